use thiserror::Error;

/// Errors produced by construction and verification routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("division by zero in GF({q})")]
    DivisionByZero { q: u64 },
    #[error("singular matrix")]
    SingularMatrix,
    #[error("resource budget exceeded: {0}")]
    ResourceBudget(String),
    #[error("embedding failure: {0}")]
    EmbeddingFailure(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
