use thiserror::Error;

/// Every failure mode of the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("argument outside the supported domain: {0}")]
    Domain(String),
    #[error("evaluation did not reach the requested accuracy: {0}")]
    Convergence(String),
    #[error("result does not fit in double precision: {0}")]
    Overflow(String),
    #[error("could not certify an enclosure: {0}")]
    Enclosure(String),
    #[error("quadrature error estimate exceeds tolerance: {0}")]
    Quadrature(String),
    #[error("density exceeds its declared bound: {0}")]
    RejectionBound(String),
    #[error("configuration outside the declared support: {0}")]
    Support(String),
    #[error("enumeration cap too small: {0}")]
    Cap(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid experiment config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
