//! CLI error type carrying the process exit code: configuration problems
//! exit 2, numerical failures exit 3.

use mvhedge::HedgeError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad configuration: unreadable or invalid files, out-of-domain
    /// parameters, incompatible sources.
    #[error("{0}")]
    Config(String),
    /// The pipeline itself failed: singular system, degenerate measure.
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    /// Prefixes the message with the phase that failed.
    pub fn prefixed(self, phase: &str) -> CliError {
        match self {
            CliError::Config(msg) => CliError::Config(format!("{phase}: {msg}")),
            CliError::Numerical(msg) => CliError::Numerical(format!("{phase}: {msg}")),
        }
    }
}

impl From<HedgeError> for CliError {
    fn from(err: HedgeError) -> Self {
        match err {
            HedgeError::SingularSystem { .. }
            | HedgeError::NotIndependent(_)
            | HedgeError::DegenerateMarginal(_) => CliError::Numerical(err.to_string()),
            _ => CliError::Config(err.to_string()),
        }
    }
}
