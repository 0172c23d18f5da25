//! Random states for the property suites. Every sampler takes the generator
//! explicitly; there is no global random state.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{BlochVector, DensityMatrix, PureState};
use crate::linalg::ComplexMatrix;

fn complex_gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state: a normalized vector of i.i.d. complex Gaussians.
pub fn random_pure(d: usize, rng: &mut impl Rng) -> PureState {
    assert!(d >= 1, "dimension must be positive");
    loop {
        let v: Vec<Complex64> = (0..d).map(|_| complex_gaussian(rng)).collect();
        if let Ok(psi) = PureState::normalized(v) {
            return psi;
        }
    }
}

/// Hilbert–Schmidt random mixed state `G G† / Tr(G G†)` with `G` a square
/// Ginibre matrix.
pub fn random_density(d: usize, rng: &mut impl Rng) -> DensityMatrix {
    assert!(d >= 1, "dimension must be positive");
    let g = ComplexMatrix::from_vec(d, d, (0..d * d).map(|_| complex_gaussian(rng)).collect()).unwrap();
    let ggh = &g * &g.adjoint();
    let tr = ggh.trace().re;
    DensityMatrix::new(ggh.scale(1.0 / tr)).expect("Ginibre quotient is a valid state")
}

/// Haar-random unitary via Gram–Schmidt on a Ginibre matrix.
pub fn random_unitary(d: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(d);
    while cols.len() < d {
        let mut v: Vec<Complex64> = (0..d).map(|_| complex_gaussian(rng)).collect();
        for c in &cols {
            let proj: Complex64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            v.iter_mut().zip(c).for_each(|(x, y)| *x -= proj * y);
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-8 {
            cols.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    let mut u = ComplexMatrix::zeros(d, d);
    for (j, c) in cols.iter().enumerate() {
        for (i, z) in c.iter().enumerate() {
            u[(i, j)] = *z;
        }
    }
    u
}

/// Uniform point in the Bloch ball.
pub fn random_bloch(rng: &mut impl Rng) -> BlochVector {
    loop {
        let dir: [f64; 3] = [rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal)];
        let n = crate::linalg::norm3(dir);
        if n < 1e-12 {
            continue;
        }
        let radius = rng.random::<f64>().cbrt();
        return BlochVector::new(dir.map(|x| x * radius / n)).expect("inside unit ball");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn deterministic_per_seed() {
        let a = random_density(3, &mut ChaCha8Rng::seed_from_u64(99));
        let b = random_density(3, &mut ChaCha8Rng::seed_from_u64(99));
        assert_eq!(a, b);
        let a = random_pure(4, &mut ChaCha8Rng::seed_from_u64(5));
        let b = random_pure(4, &mut ChaCha8Rng::seed_from_u64(5));
        assert_eq!(a, b);
    }

    #[test]
    fn sampled_states_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in 2..=8 {
            for _ in 0..50 {
                let rho = random_density(d, &mut rng);
                // re-validate through the public constructor
                DensityMatrix::new(rho.matrix().clone()).unwrap();
            }
        }
    }

    #[test]
    fn hilbert_schmidt_mean_is_maximally_mixed() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let draws = 10_000;
        let mut acc = ComplexMatrix::zeros(2, 2);
        for _ in 0..draws {
            acc = &acc + random_density(2, &mut rng).matrix();
        }
        let mean = acc.scale(1.0 / draws as f64);
        assert!(mean.max_abs_diff(&ComplexMatrix::from_diag(&[0.5, 0.5])) < 0.02, "{mean:?}");
    }

    #[test]
    fn unitaries_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for d in 1..=8 {
            let u = random_unitary(d, &mut rng);
            let uhu = &u.adjoint() * &u;
            assert!(uhu.max_abs_diff(&ComplexMatrix::identity(d)) < 1e-12);
        }
    }
}
