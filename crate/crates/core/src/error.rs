use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("operation requires an explicit representing measure")]
    RequiresMeasure,
    #[error("function is not in class {0}")]
    RequiresClass(String),
    #[error("divergent quantity: {0}")]
    Divergent(String),
    #[error("limit at zero is undefined for this order")]
    LimitUndefined,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("generator is not sectorial with positive real spectrum")]
    RequiresHolomorphic,
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("fewer than four usable points for a fit")]
    InsufficientPoints,
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
