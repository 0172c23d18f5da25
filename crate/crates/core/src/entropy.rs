//! Shannon and von Neumann entropies, relative entropy and the mixing bound.
//!
//! All logarithms are base two; entropies are in bits.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix};
use crate::states::DensityMatrix;

/// Eigenvalues or probabilities below this contribute nothing (`0 log 0 = 0`).
pub const EPS_ENT: f64 = 1e-12;
/// Eigenvalues of σ below this span its (numerical) kernel.
pub const EPS_SUPPORT: f64 = 1e-10;
pub const PROB_SUM_TOL: f64 = 1e-10;

/// Discrete probability distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbDist(Vec<f64>);

impl ProbDist {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidDistribution("empty".into()));
        }
        if let Some((index, &value)) = p.iter().enumerate().find(|(_, &x)| x.is_nan() || x < 0.0) {
            return Err(Error::NegativeProbability { index, value });
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::InvalidDistribution(format!("probabilities sum to {total}")));
        }
        Ok(Self(p))
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `-Σ x log₂ x`. Entries within [`EPS_ENT`] of 0 or 1 contribute nothing.
pub(crate) fn entropy_bits(values: impl IntoIterator<Item = f64>) -> f64 {
    let h: f64 = values
        .into_iter()
        .filter(|&x| x > EPS_ENT && (1.0 - x).abs() > EPS_ENT)
        .map(|x| -x * x.log2())
        .sum();
    h.max(0.0)
}

/// `H_S(P) = -Σ p_i log₂ p_i`.
pub fn shannon(p: &ProbDist) -> f64 {
    entropy_bits(p.0.iter().copied())
}

/// Von Neumann entropy of a Hermitian PSD matrix given its raw matrix.
pub(crate) fn matrix_entropy(m: &ComplexMatrix) -> Result<f64> {
    let spec = hermitian_eig(m)?;
    Ok(entropy_bits(spec.eigenvalues))
}

/// `H_N(ρ) = -Tr(ρ log₂ ρ)`: the Shannon entropy of the spectrum.
pub fn von_neumann(rho: &DensityMatrix) -> Result<f64> {
    matrix_entropy(rho.matrix())
}

/// `S(ρ‖σ) = Tr[ρ (log₂ ρ - log₂ σ)]`.
///
/// Defined only when the support of ρ lies inside the support of σ. The
/// check projects ρ onto the near-kernel of σ (eigenvalues below
/// [`EPS_SUPPORT`]); any weight there is a [`Error::SupportViolation`].
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: sigma.dim() });
    }
    let spec = sigma.spectrum()?;
    let mut leakage = 0.0;
    let mut cross = 0.0;
    for (k, &mu) in spec.eigenvalues.iter().enumerate() {
        let v = spec.eigenvector(k);
        let weight = expectation(rho.matrix(), &v);
        if mu < EPS_SUPPORT {
            leakage += weight;
        } else {
            cross += weight * mu.log2();
        }
    }
    if leakage >= EPS_SUPPORT {
        return Err(Error::SupportViolation { leakage });
    }
    let s = -von_neumann(rho)? - cross;
    // tiny negatives are rounding
    Ok(if s < 0.0 && s > -1e-12 { 0.0 } else { s })
}

/// `⟨v|m|v⟩`, real for Hermitian `m`.
fn expectation(m: &ComplexMatrix, v: &[num_complex::Complex64]) -> f64 {
    let mv = m.mul_vec(v);
    v.iter().zip(&mv).map(|(a, b)| (a.conj() * b).re).sum()
}

/// Weighted collection of states of equal dimension.
#[derive(Debug, Clone)]
pub struct Ensemble {
    weights: ProbDist,
    members: Vec<DensityMatrix>,
}

impl Ensemble {
    pub fn new(weights: ProbDist, members: Vec<DensityMatrix>) -> Result<Self> {
        if weights.len() != members.len() {
            return Err(Error::DimensionMismatch { expected: weights.len(), found: members.len() });
        }
        let d = members[0].dim();
        if let Some(m) = members.iter().find(|m| m.dim() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: m.dim() });
        }
        Ok(Self { weights, members })
    }

    /// Equal-weight ensemble.
    pub fn uniform(members: Vec<DensityMatrix>) -> Result<Self> {
        Self::new(ProbDist::uniform(members.len()), members)
    }

    pub fn weights(&self) -> &ProbDist {
        &self.weights
    }

    pub fn members(&self) -> &[DensityMatrix] {
        &self.members
    }
}

/// `Σ p_i ρ_i`.
pub fn mixture(e: &Ensemble) -> Result<DensityMatrix> {
    let d = e.members[0].dim();
    let mut acc = ComplexMatrix::zeros(d, d);
    for (p, rho) in e.weights.probs().iter().zip(&e.members) {
        acc = &acc + &rho.matrix().scale(*p);
    }
    DensityMatrix::new(acc)
}

/// `Σ p_i H_N(ρ_i) + H_S(p) - H_N(Σ p_i ρ_i)`.
///
/// Nonnegative, and zero exactly when the members have mutually orthogonal
/// supports.
pub fn mixing_gap(e: &Ensemble) -> Result<f64> {
    let mut bound = shannon(&e.weights);
    for (p, rho) in e.weights.probs().iter().zip(&e.members) {
        bound += p * von_neumann(rho)?;
    }
    Ok(bound - von_neumann(&mixture(e)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{from_bloch, projector, random_density, random_unitary, BlochVector, PureState};
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn plus() -> PureState {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        PureState::new(vec![Complex64::new(s, 0.0), Complex64::new(s, 0.0)]).unwrap()
    }

    #[test]
    fn shannon_examples() {
        assert_eq!(shannon(&ProbDist::new(vec![1.0, 0.0]).unwrap()), 0.0);
        assert!((shannon(&ProbDist::new(vec![0.5, 0.5]).unwrap()) - 1.0).abs() < 1e-15);
        // 0.811278124459132863909695792039 (mpmath, 30 digits)
        let h = shannon(&ProbDist::new(vec![0.25, 0.75]).unwrap());
        assert!((h - 0.811_278_124_459_132_9).abs() < 1e-14);
    }

    #[test]
    fn prob_dist_validation() {
        assert!(matches!(ProbDist::new(vec![0.5, 0.6]), Err(Error::InvalidDistribution(_))));
        assert!(matches!(ProbDist::new(vec![1.5, -0.5]), Err(Error::NegativeProbability { index: 1, .. })));
        assert!(ProbDist::new(vec![]).is_err());
    }

    #[test]
    fn von_neumann_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for d in 2..6 {
            let psi = crate::states::random_pure(d, &mut rng);
            assert!(von_neumann(&projector(&psi)).unwrap() < 1e-12);
        }
        assert!((von_neumann(&DensityMatrix::maximally_mixed(2)).unwrap() - 1.0).abs() < 1e-15);
        // H_S(0.9, 0.1) = 0.468995593589281221253589330383
        let rho = from_bloch(&BlochVector::new([0.0, 0.0, 0.8]).unwrap());
        assert!((von_neumann(&rho).unwrap() - 0.468_995_593_589_281_2).abs() < 1e-14);
    }

    #[test]
    fn von_neumann_is_unitarily_invariant_and_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for trial in 0..300 {
            let d = 2 + trial % 5;
            let rho = random_density(d, &mut rng);
            let u = random_unitary(d, &mut rng);
            let h = von_neumann(&rho).unwrap();
            let hu = von_neumann(&rho.conjugate_by(&u).unwrap()).unwrap();
            assert!((h - hu).abs() <= 1e-10);
            assert!(h <= (d as f64).log2() + 1e-12);
        }
    }

    #[test]
    fn relative_entropy_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let rho = random_density(3, &mut rng);
        assert!(relative_entropy(&rho, &rho).unwrap().abs() < 1e-12);

        // 0.207518749639421909273130528026
        let a = DensityMatrix::new(ComplexMatrix::from_diag(&[0.5, 0.5])).unwrap();
        let b = DensityMatrix::new(ComplexMatrix::from_diag(&[0.25, 0.75])).unwrap();
        assert!((relative_entropy(&a, &b).unwrap() - 0.207_518_749_639_421_9).abs() < 1e-14);

        let zero = projector(&PureState::basis(2, 0));
        let err = relative_entropy(&zero, &projector(&plus())).unwrap_err();
        assert!(matches!(err, Error::SupportViolation { .. }));
    }

    #[test]
    fn relative_entropy_allows_pure_sigma_on_its_own_support() {
        let zero = projector(&PureState::basis(2, 0));
        assert!(relative_entropy(&zero, &zero).unwrap().abs() < 1e-12);
        // ρ on a subspace of a rank-2 σ inside a qutrit
        let sigma = DensityMatrix::new(ComplexMatrix::from_diag(&[0.5, 0.5, 0.0])).unwrap();
        let s = relative_entropy(&zero_qutrit(), &sigma).unwrap();
        assert!((s - 1.0).abs() < 1e-12);
    }

    fn zero_qutrit() -> DensityMatrix {
        projector(&PureState::basis(3, 0))
    }

    #[test]
    fn relative_entropy_nonnegative_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for trial in 0..500 {
            let d = 2 + trial % 4;
            let rho = random_density(d, &mut rng);
            let sigma = random_density(d, &mut rng);
            assert!(relative_entropy(&rho, &sigma).unwrap() >= 0.0);
            // pure σ: a full-rank ρ always leaks out of its support
            let pure = projector(&crate::states::random_pure(d, &mut rng));
            assert!(matches!(relative_entropy(&rho, &pure), Err(Error::SupportViolation { .. })));
        }
    }

    #[test]
    fn mixing_examples() {
        let zero = projector(&PureState::basis(2, 0));
        let one = projector(&PureState::basis(2, 1));
        let e = Ensemble::uniform(vec![zero.clone(), one]).unwrap();
        assert!(mixing_gap(&e).unwrap().abs() < 1e-12);

        // eigenvalues (1 ± √2/2)/2 → 0.600876036692856100842027043860
        let e = Ensemble::uniform(vec![zero.clone(), projector(&plus())]).unwrap();
        let h = von_neumann(&mixture(&e).unwrap()).unwrap();
        assert!((h - 0.600_876_036_692_856).abs() < 1e-14);
        assert!(h < shannon(e.weights()));

        let single = Ensemble::new(ProbDist::new(vec![1.0]).unwrap(), vec![from_bloch(
            &BlochVector::new([0.1, 0.2, 0.3]).unwrap(),
        )])
        .unwrap();
        assert!(mixing_gap(&single).unwrap().abs() < 1e-12);
    }

    #[test]
    fn ensemble_validation() {
        let a = DensityMatrix::maximally_mixed(2);
        let b = DensityMatrix::maximally_mixed(3);
        assert!(Ensemble::uniform(vec![a.clone(), b]).is_err());
        assert!(Ensemble::new(ProbDist::uniform(3), vec![a.clone(), a]).is_err());
    }
}
