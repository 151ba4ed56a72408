use std::path::PathBuf;

use thiserror::Error;

/// Process exit status for each failure class.
pub mod exit {
    pub const OK: u8 = 0;
    pub const PARSE: u8 = 2;
    pub const SEMANTIC: u8 = 3;
    pub const RESOURCE: u8 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{0}")]
    Semantic(String),
    #[error(transparent)]
    Core(#[from] icem_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn parse(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        CliError::Parse {
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse { .. } | CliError::Io { .. } => exit::PARSE,
            CliError::Core(icem_core::Error::CapacityExceeded { .. }) => exit::RESOURCE,
            CliError::Core(_) | CliError::Semantic(_) | CliError::Csv(_) => exit::SEMANTIC,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
