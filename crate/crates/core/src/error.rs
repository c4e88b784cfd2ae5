use thiserror::Error;

/// Failure classes; the CLI maps them onto exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or inconsistent input data.
    #[error("invalid input: {0}")]
    Invalid(String),
    /// Well-formed input that fails a mathematical requirement.
    #[error("{0}")]
    Semantic(String),
    /// Truncation ideals, finite-complement checks and ideal bookkeeping.
    #[error("ideal error: {0}")]
    Ideal(String),
    /// A value left the i64 range after exact elimination.
    #[error("integer overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}

pub(crate) fn semantic<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Semantic(msg.into()))
}
