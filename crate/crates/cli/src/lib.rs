//! File formats, subcommands and the benchmark harness of the `dtomo` tool.

pub mod bench;
pub mod commands;
pub mod format;

pub use commands::{run, Cli};

/// Errors of a CLI run, each with its process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("inconsistent line sums: {0}")]
    Inconsistent(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Malformed(_) => 2,
            CliError::Inconsistent(_) => 3,
        }
    }
}

impl From<dtomo_core::Error> for CliError {
    fn from(e: dtomo_core::Error) -> Self {
        use dtomo_core::Error;
        match e {
            Error::Inconsistent { .. } => CliError::Inconsistent(e.to_string()),
            Error::Policy(_) => CliError::Usage(e.to_string()),
            _ => CliError::Malformed(e.to_string()),
        }
    }
}
