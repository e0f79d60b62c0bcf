use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("modulus mismatch: {0} vs {1}")]
    Modulus(u64, u64),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("invalid diagram: {0}")]
    Invalid(String),
    #[error("pattern mismatch for {rule}: {message}")]
    Pattern { rule: String, message: String },
    #[error("invariant violation: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn pattern<T>(rule: &str, message: impl Into<String>) -> Result<T> {
    Err(Error::Pattern { rule: rule.to_string(), message: message.into() })
}
