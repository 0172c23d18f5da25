//! Channels used by the experiment.

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::states::{BlochVector, DensityMatrix};

/// `E_p(ρ) = p I/2 + (1 - p) ρ` on a qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepolarizingChannel {
    p: f64,
}

impl DepolarizingChannel {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("depolarizing parameter {p} outside [0, 1]")));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `f(p) = 1 - (1 - p)²`.
    pub fn f(&self) -> f64 {
        1.0 - (1.0 - self.p) * (1.0 - self.p)
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: rho.dim() });
        }
        let mixed = ComplexMatrix::identity(2).scale(0.5 * self.p);
        DensityMatrix::new(&mixed + &rho.matrix().scale(1.0 - self.p))
    }

    pub fn apply_bloch(&self, r: &BlochVector) -> BlochVector {
        contract_bloch(r, self.p)
    }

    /// Channel applying `self` then `next`.
    pub fn then(&self, next: &Self) -> Self {
        Self { p: 1.0 - (1.0 - self.p) * (1.0 - next.p) }
    }
}

/// `r → (1 - p) r`.
pub fn contract_bloch(r: &BlochVector, p: f64) -> BlochVector {
    r.scaled(1.0 - p.clamp(0.0, 1.0)).expect("contraction stays in the ball")
}

/// `ρ → w τ + (1 - w) ρ` for a fixed state `τ` of any dimension.
#[derive(Debug, Clone)]
pub struct MixingChannel {
    target: DensityMatrix,
    weight: f64,
}

impl MixingChannel {
    pub fn new(target: DensityMatrix, weight: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&weight) {
            return Err(Error::Domain(format!("mixing weight {weight} outside [0, 1]")));
        }
        Ok(Self { target, weight })
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.target.mix(rho, self.weight)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{from_bloch, random_bloch, random_density, to_bloch};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn apply_examples() {
        let rho = from_bloch(&BlochVector::new([0.0, 0.0, 0.8]).unwrap());
        let id = DepolarizingChannel::new(0.0).unwrap().apply(&rho).unwrap();
        assert!(id.matrix().max_abs_diff(rho.matrix()) < 1e-16);
        let full = DepolarizingChannel::new(1.0).unwrap().apply(&rho).unwrap();
        assert!(full.matrix().max_abs_diff(&ComplexMatrix::identity(2).scale(0.5)) < 1e-16);
        let half = DepolarizingChannel::new(0.5).unwrap().apply(&rho).unwrap();
        assert!(half.matrix().max_abs_diff(&ComplexMatrix::from_diag(&[0.7, 0.3])) < 1e-15);
    }

    #[test]
    fn contract_examples() {
        let r = BlochVector::new([0.0, 0.0, 0.8]).unwrap();
        assert_eq!(contract_bloch(&r, 0.0), r);
        assert_eq!(contract_bloch(&r, 1.0), BlochVector::origin());
        let c = contract_bloch(&r, 0.5).components();
        assert!((c[2] - 0.4).abs() < 1e-15 && c[0] == 0.0 && c[1] == 0.0);
    }

    #[test]
    fn bloch_and_operator_encodings_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(30);
        for k in 0..500 {
            let r = random_bloch(&mut rng);
            let ch = DepolarizingChannel::new(k as f64 / 499.0).unwrap();
            let via_op = to_bloch(&ch.apply(&from_bloch(&r)).unwrap()).unwrap();
            let via_bloch = ch.apply_bloch(&r);
            for i in 0..3 {
                assert!((via_op.components()[i] - via_bloch.components()[i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn composition_multiplies_contractions() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..200 {
            let r = random_bloch(&mut rng);
            let a = DepolarizingChannel::new(rand::Rng::random(&mut rng)).unwrap();
            let b = DepolarizingChannel::new(rand::Rng::random(&mut rng)).unwrap();
            let twice = b.apply_bloch(&a.apply_bloch(&r));
            let once = contract_bloch(&r, 1.0 - (1.0 - a.p()) * (1.0 - b.p()));
            let composed = a.then(&b).apply_bloch(&r);
            for i in 0..3 {
                assert!((twice.components()[i] - once.components()[i]).abs() < 1e-12);
                assert!((composed.components()[i] - once.components()[i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn f_matches_definition() {
        assert_eq!(DepolarizingChannel::new(0.0).unwrap().f(), 0.0);
        assert_eq!(DepolarizingChannel::new(1.0).unwrap().f(), 1.0);
        assert_eq!(DepolarizingChannel::new(0.5).unwrap().f(), 0.75);
    }

    #[test]
    fn errors() {
        assert!(matches!(DepolarizingChannel::new(-0.1), Err(Error::Domain(_))));
        assert!(matches!(DepolarizingChannel::new(1.1), Err(Error::Domain(_))));
        let q = DensityMatrix::maximally_mixed(3);
        let ch = DepolarizingChannel::new(0.3).unwrap();
        assert!(matches!(ch.apply(&q), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn mixing_channel_preserves_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for d in 2..=6 {
            let ch = MixingChannel::new(random_density(d, &mut rng), 0.4).unwrap();
            let out = ch.apply(&random_density(d, &mut rng)).unwrap();
            DensityMatrix::new(out.matrix().clone()).unwrap();
        }
        assert!(MixingChannel::new(DensityMatrix::maximally_mixed(2), 2.0).is_err());
    }
}
