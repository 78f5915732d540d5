//! CLI error type and the process exit-code policy.

use std::fmt;

pub const EXIT_OK: i32 = 0;
/// A validated request failed while running (I/O, backend, algorithm).
pub const EXIT_RUNTIME: i32 = 1;
/// The invocation or configuration itself was invalid.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or configuration; the run never started. Exit code 2.
    Usage(String),
    /// Failure while executing a validated request. Exit code 1.
    Runtime(anyhow::Error),
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError::Usage(message.into())
    }

    pub fn runtime(err: impl Into<anyhow::Error>) -> Self {
        CliError::Runtime(err.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Runtime(_) => EXIT_RUNTIME,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            // Every error in this workspace embeds its cause's text in its
            // own message (or is transparent), so the chain-expanding `:#`
            // format would print each cause twice.
            CliError::Runtime(err) => write!(f, "{err}"),
        }
    }
}

impl std::error::Error for CliError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            CliError::Usage(_) => None,
            CliError::Runtime(err) => err.source(),
        }
    }
}
