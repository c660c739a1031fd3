use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("usage error: {0}")]
    Usage(String),

    #[error("point is not generic: {0}")]
    NotGeneric(String),

    #[error("generic point search exhausted after {0} attempts")]
    SearchExhausted(usize),

    #[error("unsupported dimension {0} (operation requires dimension 2)")]
    UnsupportedDimension(usize),

    #[error("matching verification failed:\n{0}")]
    Verification(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
