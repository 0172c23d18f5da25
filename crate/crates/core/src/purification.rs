//! Purifications and the explicit minimization of `D_N` over them.
//!
//! A qubit state `ρ = (I + r⃗·σ⃗)/2` is purified on `C² ⊗ C²` by
//!
//! ```text
//! P = 1/4 (I₄ + Σ rᵢ σᵢ⊗I + Σ γᵢ I⊗σᵢ + Σ Aᵢⱼ σᵢ⊗σⱼ),   γ⃗ = Aᵀ r⃗,
//! ```
//!
//! where the real 3×3 matrix `A` solves
//!
//! ```text
//! A Aᵀ = (1 - |r|²) I + r rᵀ,   det A = |r|² - 1.
//! ```
//!
//! The solutions form a single orbit `Ã S`, `S ∈ SO(3)`, so minimizing `D_N`
//! over purifications of σ (with one purification of ρ held fixed) is an
//! optimization over SO(3). The overlap `Tr(P_ρ P_σ)` is affine in `S`:
//!
//! ```text
//! Tr(P_ρ P_σ(S)) = 1/4 (1 + r·r' + ⟨S, Ã'ᵀ (I + r' rᵀ) A⟩),
//! ```
//!
//! so the exact maximizer is an orthogonal Procrustes problem.

use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::distances::{Diagnostics, DistanceReport, Method};
use crate::entropy::matrix_entropy;
use crate::error::{Error, Result};
use crate::linalg::{
    dot3, hermitian_eig, kron, norm3, partial_trace_aux, pauli, spectral_map, svd_real3, ComplexMatrix,
    Mat3, Vec3, SQRT_NOISE_FLOOR,
};
use crate::states::{from_bloch, to_bloch, BlochVector, DensityMatrix, PureState};

/// Tolerance for `P² = P`.
pub const PURITY_RESIDUAL_TOL: f64 = 1e-8;
/// Tolerance for `Tr P = 1`, `Tr_aux P = ρ` and the A-system.
pub const PURIFICATION_TOL: f64 = 1e-9;
pub const ROTATION_TOL: f64 = 1e-10;
/// Two singular values closer than this (relative to the largest) are equal.
pub const DEGENERACY_TOL: f64 = 1e-12;
pub const AP_CONSISTENCY_TOL: f64 = 1e-9;

/// Element of SO(3).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation3(Mat3);

impl Rotation3 {
    pub fn new(s: Mat3) -> Result<Self> {
        let orth = (s.transpose() * s).max_abs_diff(&Mat3::IDENTITY);
        let det = s.det();
        if orth > ROTATION_TOL || (det - 1.0).abs() > ROTATION_TOL {
            return Err(Error::Domain(format!(
                "not a rotation: |SᵀS - I| = {orth:.3e}, det = {det}"
            )));
        }
        Ok(Self(s))
    }

    pub fn identity() -> Self {
        Self(Mat3::IDENTITY)
    }

    pub fn about_z(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self(Mat3([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]))
    }

    pub fn about_y(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self(Mat3([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]]))
    }

    /// `R_z(α) R_y(β) R_z(γ)`.
    pub fn from_euler_zyz(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self(Self::about_z(alpha).0 * Self::about_y(beta).0 * Self::about_z(gamma).0)
    }

    /// Haar-random rotation from a uniformly random unit quaternion.
    pub fn random(rng: &mut impl Rng) -> Self {
        loop {
            let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
            let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n < 1e-9 {
                continue;
            }
            let [w, x, y, z] = q.map(|c| c / n);
            return Self(Mat3([
                [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
                [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
                [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
            ]));
        }
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.transpose())
    }
}

/// Right-hand side used for `A Aᵀ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemForm {
    /// `(1 - |r|²) I + r rᵀ`; determinant-consistent with `det A = |r|² - 1`.
    QuadraticNorm,
    /// `(1 - |r|) I + r rᵀ`.
    LinearNorm,
}

impl SystemForm {
    /// Order in which candidate forms are tried.
    pub const CANDIDATES: [SystemForm; 2] = [SystemForm::QuadraticNorm, SystemForm::LinearNorm];

    /// Coefficient `c` in `c I + r rᵀ`.
    fn diagonal(self, r: &BlochVector) -> f64 {
        let n = r.norm();
        match self {
            SystemForm::QuadraticNorm => 1.0 - n * n,
            SystemForm::LinearNorm => 1.0 - n,
        }
    }

    pub fn gram_rhs(self, r: &BlochVector) -> Mat3 {
        let v = r.components();
        Mat3::IDENTITY.scale(self.diagonal(r)) + Mat3::outer(v, v)
    }
}

impl fmt::Display for SystemForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SystemForm::QuadraticNorm => "(1-|r|^2)I + rr^T",
            SystemForm::LinearNorm => "(1-|r|)I + rr^T",
        })
    }
}

/// Fixed reflection making `det Ã = |r|² - 1 ≤ 0`.
const REFLECTION: Mat3 = Mat3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]]);

/// Particular solution of the A-system.
#[derive(Debug, Clone)]
pub struct ASolution {
    pub a: Mat3,
    pub form: SystemForm,
    /// Candidate forms tried before `form` and the purity residual that made
    /// them fail.
    pub rejected: Vec<(SystemForm, f64)>,
}

/// Principal square root of `c I + r rᵀ`: `√c` across `r`, `√(c + |r|²)` along it.
fn sqrt_gram_rhs(c: f64, r: Vec3) -> Mat3 {
    let floor = |x: f64| if x <= SQRT_NOISE_FLOOR { 0.0 } else { x.sqrt() };
    let n2 = dot3(r, r);
    let across = floor(c);
    if n2 == 0.0 {
        return Mat3::IDENTITY.scale(across);
    }
    let along = floor(c + n2);
    Mat3::IDENTITY.scale(across) + Mat3::outer(r, r).scale((along - across) / n2)
}

/// Candidate `Ã = sqrt(M) · diag(1, 1, -1)` for one right-hand side.
pub fn candidate_a(r: &BlochVector, form: SystemForm) -> Result<Mat3> {
    Ok(sqrt_gram_rhs(form.diagonal(r), r.components()) * REFLECTION)
}

/// Solves the A-system for a particular `Ã`.
///
/// Each candidate right-hand side is accepted only if the purification it
/// assembles passes the trace, purity and partial-trace checks.
pub fn solve_a_system(r: &BlochVector) -> Result<ASolution> {
    let mut rejected = Vec::new();
    for form in SystemForm::CANDIDATES {
        let a = candidate_a(r, form)?;
        match assemble_qubit_purification(r, &a) {
            Ok(_) => return Ok(ASolution { a, form, rejected }),
            Err(Error::PurityViolation { residual }) => rejected.push((form, residual)),
            Err(e) => return Err(e),
        }
    }
    Err(Error::ValidationFailure(
        rejected.iter().map(|(f, res)| format!("{f}: |P^2-P| = {res:.3e}")).collect::<Vec<_>>().join("; "),
    ))
}

/// Purity residual `max |P² - P|` of the purification assembled from each
/// candidate form, without any acceptance decision.
pub fn system_form_residuals(r: &BlochVector) -> Result<Vec<(SystemForm, f64)>> {
    SystemForm::CANDIDATES
        .iter()
        .map(|&form| {
            let p = pauli_operator(r.components(), &candidate_a(r, form)?);
            Ok((form, (&(&p * &p) - &p).max_abs()))
        })
        .collect()
}

/// `σ_μ ⊗ σ_ν` for μ, ν ∈ {0, x, y, z}, row-major over (μ, ν).
fn pauli_products() -> &'static [ComplexMatrix] {
    static CACHE: OnceLock<Vec<ComplexMatrix>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let [x, y, z] = pauli();
        let basis = [ComplexMatrix::identity(2), x, y, z];
        basis.iter().flat_map(|a| basis.iter().map(move |b| kron(a, b))).collect()
    })
}

fn pauli_operator(r: Vec3, a: &Mat3) -> ComplexMatrix {
    let gamma = a.transpose().mul_vec(r);
    let products = pauli_products();
    let mut coeffs = [0.0; 16];
    coeffs[0] = 1.0;
    for i in 0..3 {
        coeffs[4 * (i + 1)] = r[i];
        coeffs[i + 1] = gamma[i];
        for j in 0..3 {
            coeffs[4 * (i + 1) + (j + 1)] = a[(i, j)];
        }
    }
    let mut p = ComplexMatrix::zeros(4, 4);
    for (c, m) in coeffs.iter().zip(products) {
        if *c != 0.0 {
            p = &p + &m.scale(*c);
        }
    }
    p.scale(0.25)
}

/// Pure state on `C² ⊗ C²` purifying a qubit.
#[derive(Debug, Clone)]
pub struct QubitPurification {
    r: BlochVector,
    a: Mat3,
    gamma: Vec3,
    p: ComplexMatrix,
}

impl QubitPurification {
    pub fn bloch(&self) -> &BlochVector {
        &self.r
    }

    pub fn a_matrix(&self) -> &Mat3 {
        &self.a
    }

    /// `γ⃗ = Aᵀ r⃗`, the Bloch vector of the auxiliary reduced state.
    pub fn gamma(&self) -> Vec3 {
        self.gamma
    }

    /// The rank-one projector `P`.
    pub fn operator(&self) -> &ComplexMatrix {
        &self.p
    }

    /// Unit vector spanning the range of `P` (defined up to a global phase).
    pub fn state_vector(&self) -> Result<PureState> {
        let spec = hermitian_eig(&self.p)?;
        PureState::normalized(spec.eigenvector(0))
    }

    /// Same reduced state, auxiliary frame rotated: `A → A S`.
    pub fn rotated(&self, s: &Rotation3) -> Result<Self> {
        assemble_qubit_purification(&self.r, &(self.a * *s.matrix()))
    }

    /// `Tr(P Q)`, the squared overlap of the two purifying vectors.
    pub fn overlap_sq(&self, other: &Self) -> f64 {
        let (p, q) = (&self.p, &other.p);
        let mut t = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                t += (p[(i, j)] * q[(j, i)]).re;
            }
        }
        t
    }
}

/// Assembles `P` from `(r⃗, A)` and checks that it is a unit-trace rank-one
/// projector reducing to `ρ(r⃗)`.
pub fn assemble_qubit_purification(r: &BlochVector, a: &Mat3) -> Result<QubitPurification> {
    let p = pauli_operator(r.components(), a);
    let trace = p.trace().re;
    if (trace - 1.0).abs() > PURIFICATION_TOL {
        return Err(Error::InvalidTrace { trace });
    }
    let residual = (&(&p * &p) - &p).max_abs();
    if residual > PURITY_RESIDUAL_TOL {
        return Err(Error::PurityViolation { residual });
    }
    let reduced = partial_trace_aux(&p, 2, 2)?;
    let dev = reduced.max_abs_diff(from_bloch(r).matrix());
    if dev > PURIFICATION_TOL {
        return Err(Error::ValidationFailure(format!("partial trace deviates from rho by {dev:.3e}")));
    }
    Ok(QubitPurification { r: *r, a: *a, gamma: a.transpose().mul_vec(r.components()), p })
}

/// Standard purification `Σ_i √p_i |e_i⟩ ⊗ |i⟩` from the spectral
/// decomposition `ρ = Σ p_i |e_i⟩⟨e_i|`.
pub fn spectral_purify(rho: &DensityMatrix) -> Result<PureState> {
    let d = rho.dim();
    let spec = rho.spectrum()?;
    let mut psi = vec![Complex64::new(0.0, 0.0); d * d];
    for (k, &p) in spec.eigenvalues.iter().enumerate() {
        let w = p.max(0.0).sqrt();
        if w == 0.0 {
            continue;
        }
        for i in 0..d {
            psi[i * d + k] += spec.eigenvectors[(i, k)] * w;
        }
    }
    PureState::normalized(psi)
}

/// Reduced state `Tr_aux |ψ⟩⟨ψ|` of a purification in `C^d ⊗ C^d`.
pub fn reduced_state(psi: &PureState) -> Result<ComplexMatrix> {
    let d = square_root_dim(psi.dim())?;
    partial_trace_aux(&ComplexMatrix::outer(psi.amplitudes(), psi.amplitudes()), d, d)
}

fn square_root_dim(n: usize) -> Result<usize> {
    let d = (n as f64).sqrt().round() as usize;
    if d * d != n {
        return Err(Error::DimensionMismatch { expected: d * d, found: n });
    }
    Ok(d)
}

/// Result of [`unitary_freedom_check`].
#[derive(Debug, Clone)]
pub struct FreedomCheck {
    /// Auxiliary unitary `U` with `ψ₁ ≈ (I ⊗ U) ψ₂`.
    pub unitary: ComplexMatrix,
    /// `‖ψ₁ - (I ⊗ U) ψ₂‖₂`.
    pub residual: f64,
}

/// Recovers the auxiliary unitary relating two purifications of the same
/// full-rank state.
///
/// Writing `ψ = Σ X_ij |i⟩|j⟩`, both coefficient matrices factor as
/// `X_k = sqrt(ρ) W_k` with `W_k` unitary, and `U = (W₂† W₁)ᵀ`.
pub fn unitary_freedom_check(psi1: &PureState, psi2: &PureState) -> Result<FreedomCheck> {
    if psi1.dim() != psi2.dim() {
        return Err(Error::DimensionMismatch { expected: psi1.dim(), found: psi2.dim() });
    }
    let d = square_root_dim(psi1.dim())?;
    let x1 = ComplexMatrix::from_vec(d, d, psi1.amplitudes().to_vec())?;
    let x2 = ComplexMatrix::from_vec(d, d, psi2.amplitudes().to_vec())?;
    let rho1 = &x1 * &x1.adjoint();
    let rho2 = &x2 * &x2.adjoint();
    let deviation = rho1.max_abs_diff(&rho2);
    if deviation > 1e-8 {
        return Err(Error::NotSamePurified { deviation });
    }
    let spec = hermitian_eig(&(&rho1 + &rho2).scale(0.5))?;
    let min = spec.eigenvalues.last().copied().unwrap_or(0.0);
    if min <= 1e-12 {
        return Err(Error::Domain(format!("reduced state is not full rank (min eigenvalue {min:.3e})")));
    }
    let inv_root = spectral_map(&spec, |l| 1.0 / l.sqrt());
    let w1 = &inv_root * &x1;
    let w2 = &inv_root * &x2;
    let ut = &w2.adjoint() * &w1;
    let mapped = &x2 * &ut;
    let residual = mapped
        .as_slice()
        .iter()
        .zip(psi1.amplitudes())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let mut unitary = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            unitary[(i, j)] = ut[(j, i)];
        }
    }
    Ok(FreedomCheck { unitary, residual })
}

/// Rotation `S ∈ SO(3)` minimizing `‖B S - C‖_HS`.
///
/// With `Bᵀ C = U Σ Vᵀ`, the minimizer is `U diag(1, 1, det(U Vᵀ)) Vᵀ`. When
/// the reflection correction is needed and the two smallest singular values
/// coincide, the minimizer is not unique; the first branch is returned inside
/// [`Error::DegenerateInput`].
pub fn procrustes_so3(b: &Mat3, c: &Mat3) -> Result<Rotation3> {
    let svd = svd_real3(&(b.transpose() * *c))?;
    let flip = if (svd.u * svd.v.transpose()).det() < 0.0 { -1.0 } else { 1.0 };
    let rotation = Rotation3::new(svd.u * Mat3::diag([1.0, 1.0, flip]) * svd.v.transpose())?;
    let [s0, s1, s2] = svd.sigma;
    if flip < 0.0 && (s1 - s2).abs() <= DEGENERACY_TOL * s0.max(1.0) {
        return Err(Error::DegenerateInput { rotation });
    }
    Ok(rotation)
}

/// What the SO(3) search optimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// `min ‖Ã' S - A‖_HS`: aligns the correlation matrices only.
    HsNorm,
    /// `max Tr(P_ρ P_σ(S))`: the true purification overlap.
    ExactOverlap,
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Objective::HsNorm => "hs_norm",
            Objective::ExactOverlap => "exact_overlap",
        })
    }
}

/// `D_N(ρ, σ)` for qubits by explicit minimization over purifications of σ,
/// with one purification of ρ held fixed.
pub fn dn_via_purification(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    objective: Objective,
) -> Result<DistanceReport> {
    let r = to_bloch(rho)?;
    let r2 = to_bloch(sigma)?;
    let fixed = solve_a_system(&r)?;
    let other = solve_a_system(&r2)?;
    let target = match objective {
        Objective::HsNorm => fixed.a,
        Objective::ExactOverlap => (Mat3::IDENTITY + Mat3::outer(r2.components(), r.components())) * fixed.a,
    };
    // A non-unique minimizer still attains the optimal value.
    let (rotation, degenerate) = match procrustes_so3(&other.a, &target) {
        Ok(s) => (s, false),
        Err(Error::DegenerateInput { rotation }) => (rotation, true),
        Err(e) => return Err(e),
    };
    let p_rho = assemble_qubit_purification(&r, &fixed.a)?;
    let p_sigma = assemble_qubit_purification(&r2, &(other.a * *rotation.matrix()))?;
    let avg = (p_rho.operator() + p_sigma.operator()).scale(0.5);
    let value = matrix_entropy(&avg)?.sqrt();
    let overlap = p_rho.overlap_sq(&p_sigma).clamp(0.0, 1.0).sqrt();
    Ok(DistanceReport {
        value,
        method: Method::PurificationMin,
        metadata: Diagnostics {
            overlap: Some(overlap),
            objective: Some(objective),
            rotation: Some(rotation),
            degenerate,
            system_form: Some(fixed.form),
            ..Default::default()
        },
    })
}

/// Gram matrix and determinant predicted for the depolarized A-matrix.
#[derive(Debug, Clone, Copy)]
pub struct ApUpdate {
    /// `A Aᵀ + f(p) Ω` with `f(p) = 1 - (1-p)²`, `Ω = |r|² I - r rᵀ`.
    pub gram: Mat3,
    /// `det A - f(p) |r|²`.
    pub det: f64,
    pub gram_residual: f64,
    pub det_residual: f64,
}

/// Updates `(A Aᵀ, det A)` for the Bloch contraction `r → (1-p) r` and
/// cross-checks against a fresh solve for the contracted vector.
pub fn ap_update(a: &Mat3, r: &BlochVector, p: f64) -> Result<ApUpdate> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("depolarizing parameter {p} outside [0, 1]")));
    }
    let f = 1.0 - (1.0 - p) * (1.0 - p);
    let v = r.components();
    let n2 = dot3(v, v);
    let omega = Mat3::IDENTITY.scale(n2) - Mat3::outer(v, v);
    let gram = *a * a.transpose() + omega.scale(f);
    let det = a.det() - f * n2;

    let reference = solve_a_system(&r.scaled(1.0 - p)?)?.a;
    let gram_residual = gram.max_abs_diff(&(reference * reference.transpose()));
    let det_residual = (det - reference.det()).abs();
    if gram_residual > AP_CONSISTENCY_TOL || det_residual > AP_CONSISTENCY_TOL {
        return Err(Error::ConsistencyFailure { gram_residual, det_residual });
    }
    Ok(ApUpdate { gram, det, gram_residual, det_residual })
}

/// Residuals of `A` against the A-system for `r` under `form`:
/// `(max |A Aᵀ - M|, |det A - (|r|² - 1)|)`.
pub fn a_system_residuals(a: &Mat3, r: &BlochVector, form: SystemForm) -> (f64, f64) {
    let gram = (*a * a.transpose()).max_abs_diff(&form.gram_rhs(r));
    let n = norm3(r.components());
    (gram, (a.det() - (n * n - 1.0)).abs())
}
