use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{what} too large: exceeded cap of {cap} after {partial} elements")]
    CapExceeded {
        what: String,
        cap: usize,
        partial: usize,
    },

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::InvariantViolation(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
