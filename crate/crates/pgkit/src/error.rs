use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("encoding error: {0}")]
    Encoding(String),
    #[error("numeric error: {msg} (residual {residual:e})")]
    Numeric { msg: String, residual: f64 },
    #[error("pole: {0}")]
    Pole(String),
    #[error("precision error: {0}")]
    Precision(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("no rule applies: {0}")]
    Stuck(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
