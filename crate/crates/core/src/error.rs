use thiserror::Error;

/// Errors shared by every engine in the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed textual input; `offset` is the byte position where decoding failed.
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    /// The input violates a structural requirement of the operation
    /// (a loop, an out-of-range vertex, a degree mismatch, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A documented precondition of the operation does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// The exhaustive routine would exceed its documented work limit.
    #[error("resource limit: {0}")]
    Resource(String),

    /// Something that a theorem or a construction guarantees did not happen.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
