use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input violated the documented precondition of an operation.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A numeric or p-adic computation could not certify the requested accuracy.
    #[error("insufficient precision: {0}")]
    Precision(String),
    /// A configured resource budget (bits, iterations) was exhausted.
    #[error("resource budget exceeded: {0}")]
    Resource(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
