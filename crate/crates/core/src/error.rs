use thiserror::Error;

/// Errors raised by the certification kernels.
///
/// Every variant is a rejected input or a tripped internal guard; a negative
/// verdict (a failed condition, an infeasible pair) is never an error.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(String),
    #[error("{0} exceeds the deterministic primality range (2^64)")]
    OutOfRange(String),
    #[error("{0} must be an odd prime")]
    NotOddPrime(u64),
    #[error("zero argument: {0}")]
    Zero(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("internal guard tripped: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
