use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Mismatched shapes or dimensions between operands.
    #[error("contract violation: {0}")]
    Shape(String),

    #[error("format error: {0}")]
    Format(String),

    /// A structurally valid input that breaks a domain invariant.
    #[error("validation error: {0}")]
    Validation(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("domain error: entry {index} is {value} after shifting, must be > 0")]
    Domain { index: usize, value: f64 },

    #[error("training diverged at epoch {epoch}: {reason}")]
    Training { epoch: usize, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 1 usage/config, 2 data/format, 3 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) | Error::Shape(_) | Error::Json(_) => 1,
            Error::Format(_)
            | Error::Validation(_)
            | Error::Data(_)
            | Error::Domain { .. }
            | Error::Io { .. } => 2,
            Error::Training { .. } => 3,
        }
    }
}
