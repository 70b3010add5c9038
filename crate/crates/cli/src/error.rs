use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("cannot write {}: {source}", path.display())]
    Unwritable { path: PathBuf, source: io::Error },
    #[error("cannot read {}: {source}", path.display())]
    Unreadable { path: PathBuf, source: io::Error },
    #[error("{0} validation check(s) failed")]
    ValidationFailed(usize),
}

impl CliError {
    /// Process exit status: 1 validation, 2 bad input, 3 unwritable output.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ValidationFailed(_) => 1,
            CliError::Config(_) | CliError::Unreadable { .. } => 2,
            CliError::Unwritable { .. } => 3,
        }
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }
}

impl From<subrad_core::Error> for CliError {
    fn from(e: subrad_core::Error) -> Self {
        CliError::Config(e.to_string())
    }
}
