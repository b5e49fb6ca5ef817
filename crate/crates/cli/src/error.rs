use std::fmt;

/// A command failure, carrying the process exit code it maps to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Bad input: malformed files, unmet strategy requirements, bad flags.
    Validation(String),
    /// The observed amount cannot arise under the prior.
    ImpossibleObservation(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Validation(_) => 2,
            Self::ImpossibleObservation(_) => 3,
            Self::Internal(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Validation(msg) => write!(f, "error: {msg}"),
            Self::ImpossibleObservation(msg) => write!(f, "error: {msg}"),
            Self::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<envelope_core::Error> for CliError {
    fn from(e: envelope_core::Error) -> Self {
        match e {
            envelope_core::Error::ImpossibleObservation { .. } => Self::ImpossibleObservation(e.to_string()),
            other => Self::Validation(other.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::Validation(e.to_string())
    }
}
