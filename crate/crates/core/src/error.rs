use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value {value} at index {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("objective does not provide a Hessian")]
    HessianUnavailable,

    #[error("objective does not report convexity bounds")]
    BoundsUnavailable,

    #[error("direction is not a descent direction (g.d = {0})")]
    NotDescent(f64),

    #[error("line search failed: step shrank to {0:e} without sufficient decrease")]
    LineSearchFailure(f64),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
