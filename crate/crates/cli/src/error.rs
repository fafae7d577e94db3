//! Error type carrying the process exit-code contract.

use std::fmt;

/// Exit codes: 0 success, 1 usage, 2 data/validation, 3 solver failure.
#[derive(Clone, Debug, PartialEq)]
pub enum CliError {
    /// Bad command line, bad generator spec, bad environment variable.
    Usage(String),
    /// Unreadable or invalid configuration, mesh, or material data.
    Data(String),
    /// The linear solve broke down or did not converge.
    Solver(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn data(msg: impl Into<String>) -> Self {
        CliError::Data(msg.into())
    }

    pub fn solver(msg: impl Into<String>) -> Self {
        CliError::Solver(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Solver(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Data(msg) => write!(f, "data error: {msg}"),
            CliError::Solver(msg) => write!(f, "solver error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}
