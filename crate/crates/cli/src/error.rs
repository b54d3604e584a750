use thiserror::Error;

/// Failures of a command, split by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed files, bad parameters, rejected requests. Exit code 2.
    #[error("{0}")]
    Input(String),
    /// The computation ran and a check did not hold. Exit code 1.
    #[error("{0}")]
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Input(_) => 2,
        }
    }
}

impl From<alf_core::Error> for CliError {
    fn from(e: alf_core::Error) -> Self {
        use alf_core::Error::*;
        match e {
            InconsistentVertex { .. } | BlowupRelationFailed { .. } | SingularMetric { .. } | NonPositiveV { .. } => {
                CliError::Validation(e.to_string())
            }
            other => CliError::Input(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub(crate) fn io_error(path: &std::path::Path, e: std::io::Error) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}
