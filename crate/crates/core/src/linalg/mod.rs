//! Dense complex and real-3×3 matrix kernel.
//!
//! Everything here works on small matrices (a handful of qubits at most), so
//! storage is a flat row-major `Vec` and algorithms favour accuracy over
//! asymptotic speed.

mod eig;
mod mat3;
mod svd3;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use eig::{hermitian_eig, Spectrum, MAX_SWEEPS};
pub use mat3::{cross as cross3, dot as dot3, norm as norm3, Mat3, Vec3};
pub use svd3::{svd_real3, Svd3};

/// Tolerance used by [`Spectrum`] reconstruction and orthonormality checks.
pub const EPS_LIN: f64 = 1e-10;
/// Negative eigenvalues down to `-EPS_PSD` are treated as rounding and clamped to zero.
pub const EPS_PSD: f64 = 1e-10;
/// Maximum anti-Hermitian part accepted by [`hermitian_eig`].
pub const HERMITIAN_TOL: f64 = 1e-9;
/// Eigenvalues below this are rounding noise for unit-scale PSD matrices and
/// are zeroed before taking square roots.
pub const SQRT_NOISE_FLOOR: f64 = 1e-14;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense complex matrix in row-major order.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::from_vec(rows, cols, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// `|v⟩⟨w|`.
    pub fn outer(v: &[Complex64], w: &[Complex64]) -> Self {
        let mut m = Self::zeros(v.len(), w.len());
        for (i, vi) in v.iter().enumerate() {
            for (j, wj) in w.iter().enumerate() {
                m[(i, j)] = vi * wj.conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest absolute entrywise difference; `INFINITY` when shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |m - m†|` over all entries.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `(m + m†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let n = self.rows;
        let mut out = self.clone();
        for i in 0..n {
            out[(i, i)] = Complex64::new(self[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let z = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
                out[(i, j)] = z;
                out[(j, i)] = z.conj();
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Entrywise lexicographic comparison, used to put symmetric functions of
    /// two matrices into a canonical argument order.
    pub(crate) fn total_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// The Pauli matrices `(σ_x, σ_y, σ_z)`.
pub fn pauli() -> [ComplexMatrix; 3] {
    let i = Complex64::i();
    [
        ComplexMatrix::from_vec(2, 2, vec![ZERO, ONE, ONE, ZERO]).unwrap(),
        ComplexMatrix::from_vec(2, 2, vec![ZERO, -i, i, ZERO]).unwrap(),
        ComplexMatrix::from_vec(2, 2, vec![ONE, ZERO, ZERO, -ONE]).unwrap(),
    ]
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for ai in 0..a.rows {
        for aj in 0..a.cols {
            let x = a[(ai, aj)];
            if x == ZERO {
                continue;
            }
            for bi in 0..b.rows {
                for bj in 0..b.cols {
                    out[(ai * b.rows + bi, aj * b.cols + bj)] = x * b[(bi, bj)];
                }
            }
        }
    }
    out
}

/// Traces out the second (auxiliary) tensor factor of an operator on
/// `C^d ⊗ C^d_aux`: `out[i][j] = Σ_k m[(i,k),(j,k)]`.
pub fn partial_trace_aux(m: &ComplexMatrix, d: usize, d_aux: usize) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows, cols: m.cols });
    }
    if m.rows != d * d_aux {
        return Err(Error::DimensionMismatch { expected: d * d_aux, found: m.rows });
    }
    let mut out = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            out[(i, j)] = (0..d_aux).map(|k| m[(i * d_aux + k, j * d_aux + k)]).sum();
        }
    }
    Ok(out)
}

/// Rebuilds `V f(λ) V†` from a spectrum.
pub fn spectral_map(spec: &Spectrum, f: impl Fn(f64) -> f64) -> ComplexMatrix {
    let n = spec.eigenvalues.len();
    let mut out = ComplexMatrix::zeros(n, n);
    for (k, &lambda) in spec.eigenvalues.iter().enumerate() {
        let w = f(lambda);
        if w == 0.0 {
            continue;
        }
        for i in 0..n {
            let vik = spec.eigenvectors[(i, k)] * w;
            for j in 0..n {
                out[(i, j)] += vik * spec.eigenvectors[(j, k)].conj();
            }
        }
    }
    out
}

/// Principal square root of a Hermitian positive-semidefinite matrix.
///
/// Eigenvalues in `[-EPS_PSD, 0)` are clamped to zero; anything more negative
/// is rejected.
pub fn mat_sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let spec = hermitian_eig(m)?;
    let min = spec.eigenvalues.last().copied().unwrap_or(0.0);
    if min < -EPS_PSD {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    Ok(spectral_map(&spec, |l| if l <= SQRT_NOISE_FLOOR { 0.0 } else { l.sqrt() }).hermitian_part())
}
