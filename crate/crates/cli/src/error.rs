use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("refused: {0}")]
    Resource(String),

    #[error("{0}")]
    Core(quatspin_core::Error),

    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),

    #[error("cannot serialize report: {0}")]
    Json(#[from] serde_json::Error),

    #[error("cannot write csv: {0}")]
    Csv(#[from] csv::Error),
}

impl From<quatspin_core::Error> for CliError {
    fn from(e: quatspin_core::Error) -> Self {
        match e {
            quatspin_core::Error::Resource { .. } => CliError::Resource(e.to_string()),
            other => CliError::Core(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Resource(_) => ExitCode::from(3),
            _ => ExitCode::from(1),
        }
    }
}
