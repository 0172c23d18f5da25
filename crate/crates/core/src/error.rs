use thiserror::Error;

use crate::purification::Rotation3;

/// Errors raised by state validation and the numerical kernels.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("Hermitian invariant violated: max |m - m^dagger| = {asymmetry:.3e}")]
    NotHermitian { asymmetry: f64 },

    #[error("positive-semidefinite invariant violated: min eigenvalue {min_eigenvalue:.3e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("unit-trace invariant violated: trace = {trace}")]
    InvalidTrace { trace: f64 },

    #[error("unit-norm invariant violated: norm = {norm}")]
    NotNormalized { norm: f64 },

    #[error("Bloch vector norm {norm} exceeds 1")]
    BlochNormExceeded { norm: f64 },

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("negative probability at component {index}: {value:.3e}")]
    NegativeProbability { index: usize, value: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("support of rho is not contained in support of sigma (leakage {leakage:.3e})")]
    SupportViolation { leakage: f64 },

    #[error("argument outside its domain: {0}")]
    Domain(String),

    #[error("states do not purify the same reduced state (deviation {deviation:.3e})")]
    NotSamePurified { deviation: f64 },

    #[error("purity invariant violated: max |P^2 - P| = {residual:.3e}")]
    PurityViolation { residual: f64 },

    #[error("no candidate right-hand side produced a valid purification: {0}")]
    ValidationFailure(String),

    #[error("Procrustes minimizer is not unique (degenerate singular values with reflection correction)")]
    DegenerateInput { rotation: Rotation3 },

    #[error(
        "A-matrix update is inconsistent with the system solution \
         (Gram residual {gram_residual:.3e}, determinant residual {det_residual:.3e})"
    )]
    ConsistencyFailure { gram_residual: f64, det_residual: f64 },

    #[error("sweep row r = {r}, p = {p}: {source}")]
    Sweep { r: f64, p: f64, source: Box<Error> },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
