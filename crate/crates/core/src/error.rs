use thiserror::Error;

/// Errors surfaced by the analysis pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian positive semidefinite: {0}")]
    NotPsd(String),

    #[error("quadrature did not converge: residual error {achieved:.3e} exceeds tolerance {tol:.3e}")]
    QuadratureFailure { achieved: f64, tol: f64 },

    #[error("fixed point did not converge after {iterations} iterations (residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    /// The second-order closed forms are only valid where the stability
    /// factor and the system determinant stay positive.
    #[error("stability violation: {quantity} = {value:.6e}")]
    StabilityViolation { quantity: &'static str, value: f64 },

    #[error("invalid codeword: {0}")]
    InvalidCodeword(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
