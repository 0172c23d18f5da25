//! Distances between quantum states.
//!
//! The central quantity is the entropic distance
//!
//! ```text
//! D_N(ψ, φ) = sqrt(H_N((|ψ⟩⟨ψ| + |φ⟩⟨φ|) / 2)) = sqrt(Φ(|⟨ψ|φ⟩|))
//! ```
//!
//! for pure states, extended to mixed states by minimizing over
//! purifications. Because Φ is decreasing, the minimum is reached at maximal
//! purification overlap, which is the fidelity, so `D_N(ρ, σ) = sqrt(Φ(F(ρ, σ)))`.
//! This module holds that closed form; [`crate::purification`] computes the
//! same number by explicit minimization.
//!
//! Fidelity uses the non-squared convention `F = Tr sqrt(sqrt(ρ) σ sqrt(ρ))`,
//! so `F = |⟨ψ|φ⟩|` on pure states.

use std::fmt;

use crate::entropy::{entropy_bits, matrix_entropy, von_neumann};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, mat_sqrt_psd, ComplexMatrix, SQRT_NOISE_FLOOR};
use crate::purification::{Objective, Rotation3, SystemForm};
use crate::states::{DensityMatrix, PureState};

pub use crate::entropy::relative_entropy;

/// Slack accepted around the `[0, 1]` domain of Φ before rejecting.
pub const PHI_DOMAIN_TOL: f64 = 1e-12;
/// Components perturbed in [`neighboring_overlap_deficit`] must exceed this.
pub const P_MIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    PurificationMin,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ClosedForm => "closed_form",
            Method::PurificationMin => "purification_min",
        })
    }
}

/// Optional diagnostics attached to a [`DistanceReport`].
#[derive(Debug, Clone, Default)]
pub struct Diagnostics {
    pub fidelity: Option<f64>,
    /// Overlap `|⟨ψ|φ⟩|` of the two purifications actually used.
    pub overlap: Option<f64>,
    pub objective: Option<Objective>,
    pub rotation: Option<Rotation3>,
    /// Set when the SO(3) minimizer was not unique.
    pub degenerate: bool,
    pub system_form: Option<SystemForm>,
}

#[derive(Debug, Clone)]
pub struct DistanceReport {
    pub value: f64,
    pub method: Method,
    pub metadata: Diagnostics,
}

/// `Φ(x) = -((1-x)/2) log₂((1-x)/2) - ((1+x)/2) log₂((1+x)/2)` on `[0, 1]`.
pub fn phi(x: f64) -> Result<f64> {
    if !(-PHI_DOMAIN_TOL..=1.0 + PHI_DOMAIN_TOL).contains(&x) {
        return Err(Error::Domain(format!("phi argument {x} outside [0, 1]")));
    }
    let x = x.clamp(0.0, 1.0);
    Ok(entropy_bits([(1.0 - x) / 2.0, (1.0 + x) / 2.0]))
}

fn check_same_dim(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { expected: a, found: b });
    }
    Ok(())
}

/// `|⟨ψ|φ⟩|` clamped to `[0, 1]`.
pub fn overlap(psi: &PureState, phi_: &PureState) -> Result<f64> {
    Ok(psi.inner(phi_)?.norm().min(1.0))
}

/// `D_N` for pure states, as the square root of the entropy of the
/// equal-weight mixture of the two projectors.
pub fn dn_pure(psi: &PureState, phi_: &PureState) -> Result<f64> {
    check_same_dim(psi.dim(), phi_.dim())?;
    let avg = (&ComplexMatrix::outer(psi.amplitudes(), psi.amplitudes())
        + &ComplexMatrix::outer(phi_.amplitudes(), phi_.amplitudes()))
        .scale(0.5);
    Ok(matrix_entropy(&avg)?.sqrt())
}

/// `D_N` for pure states via the overlap: `sqrt(Φ(|⟨ψ|φ⟩|))`.
pub fn dn_pure_overlap(psi: &PureState, phi_: &PureState) -> Result<f64> {
    Ok(phi(overlap(psi, phi_)?)?.sqrt())
}

/// Quantum Jensen–Shannon divergence
/// `H_N((ρ+σ)/2) - H_N(ρ)/2 - H_N(σ)/2`.
pub fn qjsd(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_same_dim(rho.dim(), sigma.dim())?;
    let avg = (rho.matrix() + sigma.matrix()).scale(0.5);
    let js = matrix_entropy(&avg)? - 0.5 * von_neumann(rho)? - 0.5 * von_neumann(sigma)?;
    Ok(js.clamp(0.0, 1.0))
}

/// Uhlmann fidelity `Tr sqrt(sqrt(ρ) σ sqrt(ρ))` (not squared).
///
/// Arguments are put in a canonical order first, so the result is exactly
/// symmetric.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_same_dim(rho.dim(), sigma.dim())?;
    let (a, b) = match rho.matrix().total_cmp(sigma.matrix()) {
        std::cmp::Ordering::Greater => (sigma, rho),
        _ => (rho, sigma),
    };
    let root = mat_sqrt_psd(a.matrix())?;
    let inner = (&(&root * b.matrix()) * &root).hermitian_part();
    let spec = hermitian_eig(&inner)?;
    let f: f64 = spec.eigenvalues.iter().filter(|&&l| l > SQRT_NOISE_FLOOR).map(|l| l.sqrt()).sum();
    Ok(f.clamp(0.0, 1.0))
}

/// Bures distance `sqrt(2 - 2F)`.
pub fn bures(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok((2.0 - 2.0 * fidelity(rho, sigma)?).max(0.0).sqrt())
}

/// Wootters angle `arccos |⟨ψ|φ⟩|`.
pub fn wootters(psi: &PureState, phi_: &PureState) -> Result<f64> {
    Ok(overlap(psi, phi_)?.acos())
}

/// Closed form `D_N(ρ, σ) = sqrt(Φ(F(ρ, σ)))`.
pub fn dn_mixed_closed(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<DistanceReport> {
    let f = fidelity(rho, sigma)?;
    Ok(DistanceReport {
        value: phi(f)?.sqrt(),
        method: Method::ClosedForm,
        metadata: Diagnostics { fidelity: Some(f), ..Default::default() },
    })
}

/// Exact and second-order overlap deficits between two neighboring pure states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapDeficit {
    /// `1 - |⟨ψ|ψ̃⟩|`.
    pub actual: f64,
    /// `(1/8) Σ dp_j² / p_j`.
    pub predicted: f64,
}

/// Perturbs the probabilities `p_j = |ψ_j|²` of `psi` by `dp` (phases fixed)
/// and compares the resulting overlap deficit with its Fisher-metric
/// expansion.
///
/// The deficit is evaluated as `Σ_j √p_j (√p_j - √(p_j + dp_j))`, which equals
/// `1 - Σ_j √(p_j (p_j + dp_j))` when `Σ p_j = 1` but avoids cancellation.
pub fn neighboring_overlap_deficit(psi: &PureState, dp: &[f64]) -> Result<OverlapDeficit> {
    check_same_dim(psi.dim(), dp.len())?;
    let total: f64 = dp.iter().sum();
    let scale = dp.iter().map(|x| x.abs()).fold(0.0, f64::max);
    if total.abs() > 1e-9 * scale {
        return Err(Error::Domain(format!("perturbation must sum to zero, sums to {total:e}")));
    }
    let mut actual = 0.0;
    let mut predicted = 0.0;
    for (index, (amp, &d)) in psi.amplitudes().iter().zip(dp).enumerate() {
        let p = amp.norm_sqr();
        if p + d < 0.0 {
            return Err(Error::NegativeProbability { index, value: p + d });
        }
        if d == 0.0 {
            continue;
        }
        if p <= P_MIN {
            return Err(Error::Domain(format!("perturbed component {index} has p = {p:e} <= {P_MIN:e}")));
        }
        let sp = p.sqrt();
        actual += -sp * d / (sp + (p + d).sqrt());
        predicted += d * d / p;
    }
    Ok(OverlapDeficit { actual, predicted: predicted / 8.0 })
}
