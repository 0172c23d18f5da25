//! Density matrices, pure states and the qubit Bloch parametrization.
//!
//! All three types validate their invariants on construction, so every other
//! module takes them as given.

mod sample;
mod text;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, pauli, ComplexMatrix, Spectrum, Vec3, EPS_PSD, HERMITIAN_TOL};

pub use sample::{random_bloch, random_density, random_pure, random_unitary};
pub use text::parse_state;

pub const TRACE_TOL: f64 = 1e-9;
pub const PURITY_TOL: f64 = 1e-9;
pub const NORM_TOL: f64 = 1e-10;
pub const BLOCH_TOL: f64 = 1e-12;

/// Hermitian, positive-semidefinite, unit-trace operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::NotSquare { rows: mat.rows(), cols: mat.cols() });
        }
        let asymmetry = mat.hermitian_defect();
        if asymmetry > HERMITIAN_TOL {
            return Err(Error::NotHermitian { asymmetry });
        }
        let trace = mat.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidTrace { trace });
        }
        let mat = mat.hermitian_part();
        let spec = hermitian_eig(&mat)?;
        let min = spec.eigenvalues.last().copied().unwrap_or(0.0);
        if min < -EPS_PSD {
            return Err(Error::NotPsd { min_eigenvalue: min });
        }
        Ok(Self { mat })
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self { mat: ComplexMatrix::identity(d).scale(1.0 / d as f64) }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn spectrum(&self) -> Result<Spectrum> {
        hermitian_eig(&self.mat)
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        let n = self.dim();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += self.mat[(i, j)].norm_sqr();
            }
        }
        s
    }

    /// A state is pure iff it is idempotent, i.e. `Tr(ρ²) = 1`.
    pub fn is_pure(&self) -> bool {
        self.purity() >= 1.0 - PURITY_TOL
    }

    /// `U ρ U†` for a unitary `u`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.rows() != self.dim() || u.cols() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: u.rows() });
        }
        Self::new(&(u * &self.mat) * &u.adjoint())
    }

    /// Convex combination `w ρ + (1 - w) σ`.
    pub fn mix(&self, other: &Self, w: f64) -> Result<Self> {
        if other.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::Domain(format!("mixing weight {w} outside [0, 1]")));
        }
        Self::new(&self.mat.scale(w) + &other.mat.scale(1.0 - w))
    }

    /// Serializes in the `dim n` text format accepted by [`parse_state`].
    pub fn to_text(&self) -> String {
        let n = self.dim();
        let mut out = format!("dim {n}\n");
        for i in 0..n {
            let row: Vec<String> = (0..n)
                .map(|j| {
                    let z = self.mat[(i, j)];
                    format!("{:e}{:+e}i", z.re, z.im)
                })
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Unit-norm state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amps: Vec<Complex64>,
}

impl PureState {
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::Domain("empty state vector".into()));
        }
        let norm = l2(&amps);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amps })
    }

    /// Rescales to unit norm; fails only for the zero vector.
    pub fn normalized(amps: Vec<Complex64>) -> Result<Self> {
        let norm = l2(&amps);
        if amps.is_empty() || norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amps: amps.into_iter().map(|z| z / norm).collect() })
    }

    /// Computational basis vector `|k⟩` in dimension `d`.
    pub fn basis(d: usize, k: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); d];
        amps[k] = Complex64::new(1.0, 0.0);
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if other.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn apply(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.cols() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: u.cols() });
        }
        Self::new(u.mul_vec(&self.amps))
    }
}

fn l2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `|ψ⟩⟨ψ|`.
pub fn projector(psi: &PureState) -> DensityMatrix {
    DensityMatrix { mat: ComplexMatrix::outer(&psi.amps, &psi.amps) }
}

/// Real 3-vector inside the closed unit ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector(Vec3);

impl BlochVector {
    pub fn new(r: Vec3) -> Result<Self> {
        let norm = crate::linalg::norm3(r);
        if !norm.is_finite() || norm > 1.0 + BLOCH_TOL {
            return Err(Error::BlochNormExceeded { norm });
        }
        Ok(Self(r))
    }

    pub fn origin() -> Self {
        Self([0.0; 3])
    }

    pub fn components(&self) -> Vec3 {
        self.0
    }

    pub fn norm(&self) -> f64 {
        crate::linalg::norm3(self.0)
    }

    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(self.0.map(|x| x * s))
    }
}

/// `ρ = (I₂ + r⃗·σ⃗) / 2`.
pub fn from_bloch(r: &BlochVector) -> DensityMatrix {
    let [sx, sy, sz] = pauli();
    let [x, y, z] = r.0;
    let sum = &(&(&ComplexMatrix::identity(2) + &sx.scale(x)) + &sy.scale(y)) + &sz.scale(z);
    DensityMatrix { mat: sum.scale(0.5) }
}

/// `r_i = Tr(ρ σ_i)`.
pub fn to_bloch(rho: &DensityMatrix) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: rho.dim() });
    }
    let m = rho.matrix();
    let off = m[(0, 1)];
    let r = [2.0 * off.re, -2.0 * off.im, (m[(0, 0)] - m[(1, 1)]).re];
    // Valid qubit states sit inside the ball up to rounding; rescale the
    // boundary case instead of rejecting it.
    let n = crate::linalg::norm3(r);
    if n > 1.0 && n <= 1.0 + 1e-9 {
        return BlochVector::new(r.map(|x| x / n));
    }
    BlochVector::new(r)
}
