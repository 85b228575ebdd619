use std::path::PathBuf;

/// Errors raised anywhere in the detection pipeline.
#[derive(thiserror::Error, Debug)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("insufficient data: need at least {needed} samples, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("degenerate distribution: {0}")]
    DegenerateDistribution(String),

    #[error("failed to converge: {0}")]
    ConvergenceFailure(String),

    #[error("schema mismatch: expected `{expected}`, found `{found}`")]
    Schema { expected: String, found: String },

    /// A model fit failed while computing one entry of the feature vector.
    #[error("feature {index} ({name}): {source}")]
    Feature {
        index: usize,
        name: String,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for failures of the numerical routines themselves, as opposed to
    /// bad input or I/O.
    pub fn is_numeric(&self) -> bool {
        match self {
            Error::DegenerateDistribution(_) | Error::ConvergenceFailure(_) => true,
            Error::Feature { source, .. } => source.is_numeric(),
            _ => false,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
