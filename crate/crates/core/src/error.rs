use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("coordinate {index} out of range for dimension {dim}")]
    CoordinateOutOfRange { index: usize, dim: usize },

    #[error("{value} is outside the range of the response curve")]
    Domain { value: f64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid instance: {0}")]
    Instance(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
