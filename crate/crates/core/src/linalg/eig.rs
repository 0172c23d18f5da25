use num_complex::Complex64;

use super::{ComplexMatrix, HERMITIAN_TOL};
use crate::error::{Error, Result};

/// Sweep bound for the cyclic Jacobi iteration. Small Hermitian matrices
/// converge quadratically, typically in fewer than ten sweeps.
pub const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of a Hermitian matrix: `m = V diag(λ) V†`.
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Real eigenvalues, sorted in descending order.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, matching `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k)
    }

    /// `V diag(λ) V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        super::spectral_map(self, |l| l)
    }
}

/// Cyclic complex Jacobi eigensolver for Hermitian matrices.
///
/// Each rotation first removes the phase of the pivot `m[p][q]` with a
/// diagonal unitary, then applies the real symmetric Jacobi rotation that
/// annihilates it. The accumulated unitary holds the eigenvectors.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<Spectrum> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let defect = m.hermitian_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian { asymmetry: defect });
    }
    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);

    let scale = a.frobenius_norm();
    let mut converged = n < 2 || scale == 0.0;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        converged = off <= 1e-15 * scale || off < f64::MIN_POSITIVE;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let eigenvalues = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        for i in 0..n {
            eigenvectors[(i, col)] = v[(i, k)];
        }
    }
    Ok(Spectrum { eigenvalues, eigenvectors })
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let z = a[(p, q)];
    let mag = z.norm();
    if mag < f64::MIN_POSITIVE {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Negligible pivots relative to both diagonal entries are dropped outright.
    if mag < 1e-18 * app.abs() && mag < 1e-18 * aqq.abs() {
        a[(p, q)] = Complex64::new(0.0, 0.0);
        a[(q, p)] = Complex64::new(0.0, 0.0);
        return;
    }
    let phase = z / mag;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    // G = [[c, s], [-s e^{-iφ}, c e^{-iφ}]] acting on columns p, q.
    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = -phase.conj() * s;
    let g_qq = phase.conj() * c;

    let n = a.rows();
    for i in 0..n {
        let aip = a[(i, p)];
        let aiq = a[(i, q)];
        a[(i, p)] = aip * g_pp + aiq * g_qp;
        a[(i, q)] = aip * g_pq + aiq * g_qq;
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip * g_pp + viq * g_qp;
        v[(i, q)] = vip * g_pq + viq * g_qq;
    }
    for j in 0..n {
        let apj = a[(p, j)];
        let aqj = a[(q, j)];
        a[(p, j)] = g_pp.conj() * apj + g_qp.conj() * aqj;
        a[(q, j)] = g_pq.conj() * apj + g_qq.conj() * aqj;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
}
