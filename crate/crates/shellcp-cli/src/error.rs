//! CLI-level error type and its mapping onto process exit codes.
//!
//! Exit codes: 0 success, 1 validation (bad configuration or inputs outside
//! the supported domain), 2 convergence/accuracy failure, 3 I/O failure.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Configuration problem: unparsable file, unknown key, missing or
    /// inconsistent field. The message carries the field path.
    Config(String),
    /// Error propagated from the solver core.
    Core(shellcp_core::Error),
    /// Filesystem / stream failure.
    Io(String),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn io(context: &str, err: std::io::Error) -> Self {
        CliError::Io(format!("{context}: {err}"))
    }

    /// Process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Core(e) => match e {
                shellcp_core::Error::Domain { .. }
                | shellcp_core::Error::Capability { .. }
                | shellcp_core::Error::Regime { .. } => 1,
                shellcp_core::Error::Convergence { .. }
                | shellcp_core::Error::JostZero { .. }
                | shellcp_core::Error::Precision { .. }
                | shellcp_core::Error::Search { .. } => 2,
            },
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<shellcp_core::Error> for CliError {
    fn from(e: shellcp_core::Error) -> Self {
        CliError::Core(e)
    }
}

/// Short machine-readable code for the per-row error column.
pub fn row_error_code(e: &shellcp_core::Error) -> &'static str {
    match e {
        shellcp_core::Error::Domain { .. } => "domain",
        shellcp_core::Error::Capability { .. } => "capability",
        shellcp_core::Error::Convergence { .. } => "convergence",
        shellcp_core::Error::JostZero { .. } => "jost_zero",
        shellcp_core::Error::Precision { .. } => "precision",
        shellcp_core::Error::Search { .. } => "search",
        shellcp_core::Error::Regime { .. } => "regime",
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
