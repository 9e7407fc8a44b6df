use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("no inverse of zero")]
    NoInverse,
    #[error("singular matrix")]
    Singular,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("no invertible matrix found after {0} attempts")]
    RejectionExhausted(usize),
    #[error("invalid block: {0}")]
    InvalidBlock(String),
    #[error("invalid key material: {0}")]
    InvalidKey(String),
    #[error("invalid code: {0}")]
    InvalidCode(String),
    #[error("empty input")]
    EmptyInput,
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("invalid joint table: {0}")]
    InvalidTable(String),
    #[error("non-finite value during training at epoch {epoch}, batch {batch}: {what}")]
    NonFinite {
        epoch: usize,
        batch: usize,
        what: String,
    },
    #[error("estimate {estimate:.4} nats exceeds the ceiling {ceiling:.4} nats")]
    CeilingExceeded { estimate: f64, ceiling: f64 },
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("bad file format: {0}")]
    Format(String),
    #[error("scenario `{scenario}`: {source}")]
    InScenario {
        scenario: String,
        #[source]
        source: Box<Error>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Whether this error comes from a bad configuration rather than a
    /// runtime or numeric failure. The CLI maps the two to different exit codes.
    pub fn is_config(&self) -> bool {
        match self {
            Error::InvalidScenario(_) | Error::InvalidParam(_) | Error::InvalidTable(_) | Error::Json(_) => true,
            Error::InScenario { source, .. } => source.is_config(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
