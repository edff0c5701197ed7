use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("Schatten exponent must satisfy 1 <= p <= inf, got {0}")]
    InvalidExponent(f64),

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("density matrix must have unit trace, got {0}")]
    InvalidTrace(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("map is not a quantum channel: {0}")]
    NotCptp(String),

    #[error("channel declares no unitary covariance; the derivative formula does not apply")]
    NotCovariant,

    #[error("direction p > q ({p} > {q}) is only available by duality; call with the conjugate exponents (q', p') instead")]
    DualDirection { p: f64, q: f64 },

    #[error("non-finite sample at p = {0}")]
    NonFinite(f64),

    #[error("serialization error: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;
