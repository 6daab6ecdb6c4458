use thiserror::Error;

/// Coarse classification of failures, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// The caller passed something that violates a precondition.
    Usage,
    /// A dimension or key-count cap would be exceeded.
    Capacity,
    /// A numerical routine failed or produced an invalid object.
    Numeric,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not Hermitian (max |A - A^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("{what} of {requested} exceeds the configured cap of {cap}")]
    Capacity {
        what: &'static str,
        requested: usize,
        cap: usize,
    },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal mass {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("invalid scheme: {0}")]
    InvalidScheme(String),

    #[error("{0}")]
    Usage(String),

    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Capacity { .. } => ErrorKind::Capacity,
            Error::NoConvergence { .. } | Error::Numeric(_) => ErrorKind::Numeric,
            _ => ErrorKind::Usage,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
