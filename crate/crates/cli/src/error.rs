use std::path::PathBuf;

use adjtele_core::{AnalysisError, GeometryError, SessionError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("config: {0}")]
    ConfigParse(#[from] serde_json::Error),
    #[error("config field `{field}`: {message}")]
    ConfigField { field: &'static str, message: String },
    #[error("{path}, row {row}: {message}")]
    Parse { path: String, row: usize, message: String },
    #[error("{0}")]
    Lookup(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error(transparent)]
    Session(#[from] SessionError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}
