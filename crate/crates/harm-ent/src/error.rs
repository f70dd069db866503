use std::io;
use std::path::{Path, PathBuf};

use harm_ent_core::Error as CoreError;

/// Failure of a command, grouped by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Malformed or physically invalid input. Exit code 2.
    #[error("{0}")]
    Spec(String),
    /// A numerical self-check failed. Exit code 3.
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// Exit code 4.
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Spec(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io { .. } => 4,
        }
    }

    pub fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidSpec(_)
            | CoreError::NotSymmetric { .. }
            | CoreError::RangeTooLarge { .. }
            | CoreError::NotPositive { .. }
            | CoreError::TooLarge { .. }
            | CoreError::BadPartition(_)
            | CoreError::NotOneDimensional => CliError::Spec(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
