//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument violates a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An operation was called on a value that does not satisfy its
    /// preconditions (e.g. stabilizer extraction from an invalid code).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A computation would exceed a configured resource bound.
    #[error("resource limit exceeded: {0}")]
    ResourceExhausted(String),

    #[error("serialization error: {0}")]
    Serialization(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
