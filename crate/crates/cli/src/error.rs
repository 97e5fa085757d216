use std::path::PathBuf;

use condscreen_core::ScreenError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// One diagnostic per offending field.
    #[error("invalid configuration:\n{}", .0.join("\n"))]
    Config(Vec<String>),

    #[error("parse error at row {row}, column '{column}': cannot read '{value}' as a number")]
    Parse {
        row: usize,
        column: String,
        value: String,
    },

    #[error("missing column '{0}'")]
    MissingColumn(String),

    #[error("non-finite value at row {row}, column '{column}'")]
    NonFiniteValue { row: usize, column: String },

    #[error("no predictor columns left after removing response and exposure")]
    NoPredictors,

    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error(transparent)]
    Screen(#[from] ScreenError),

    #[error("JSON encoding failed: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
