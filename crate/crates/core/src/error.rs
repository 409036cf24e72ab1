use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid stratum: {0}")]
    InvalidStratum(String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("divisor rejected: {0}")]
    DivisorRejected(String),

    #[error("cone error: {0}")]
    Cone(String),

    #[error("solver error: {0}")]
    Solver(String),

    #[error("certificate error: {0}")]
    Certificate(String),

    #[error("campaign aborted: {0}")]
    Campaign(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
