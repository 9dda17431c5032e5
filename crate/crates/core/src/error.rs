use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An index lies outside the supported range.
    #[error("index {index} outside supported range ±{limit}")]
    Range { index: i64, limit: i64 },

    /// Arguments violate a mathematical precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// Requested precision cannot resolve the result.
    #[error("precision error: {0}")]
    Precision(String),

    /// A work budget (enumeration size, matrix dimension) would be exceeded.
    #[error("resource budget exceeded: {0}")]
    Resource(String),

    /// Input data failed validation (normalization, lengths, index ranges).
    #[error("validation error: {0}")]
    Validation(String),

    /// Two independent routes to the same exact value disagree.
    #[error("identity violated: {0}")]
    Identity(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}
