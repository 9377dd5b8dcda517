use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error(transparent)]
    Solver(#[from] fresa::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Self::Io { path: path.into(), source }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::Usage(message.into())
    }

    /// 1 for usage errors, 3 when the reactor integration diverged, 2 for
    /// every other runtime failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 1,
            Self::Solver(fresa::Error::Diverged { .. }) => 3,
            Self::Solver(_) | Self::Io { .. } => 2,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
