use std::io;
use std::path::PathBuf;

use tendonplan_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("wear file {path}: {message}")]
    Store { path: PathBuf, message: String },

    #[error("serialization failed: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
}

impl AppError {
    /// 1 for mistakes in what the user asked for, 2 for failures while doing it.
    pub fn exit_code(&self) -> u8 {
        match self {
            AppError::Usage(_) => 1,
            AppError::Core(e) => match e {
                CoreError::NoConvergence { .. }
                | CoreError::Unreachable { .. }
                | CoreError::EmptyPopulation => 2,
                _ => 1,
            },
            AppError::Io { .. } | AppError::Store { .. } | AppError::Json(_) | AppError::Csv(_) => {
                2
            }
        }
    }
}
