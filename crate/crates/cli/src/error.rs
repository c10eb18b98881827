//! CLI error type with scriptable exit codes.

use patience_core::Error as CoreError;
use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments, config, or input data. Exit code 2.
    Validation(String),
    /// An estimator could not produce a usable result. Exit code 3.
    Estimation(String),
    /// Filesystem trouble. Exit code 4.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Estimation(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        CliError::Validation(msg.into())
    }

    pub fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(msg) => write!(f, "{msg}"),
            CliError::Estimation(msg) => write!(f, "{msg}"),
            CliError::Io(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        match err {
            CoreError::InvalidParameter { .. }
            | CoreError::InvalidObservation { .. }
            | CoreError::EmptyDataset
            | CoreError::InvalidConfig { .. }
            | CoreError::InvalidMetricInput { .. }
            | CoreError::WindowExceeded { .. }
            | CoreError::EmptyCurve => CliError::Validation(err.to_string()),
            CoreError::ModelDegeneracy { .. }
            | CoreError::InsufficientData { .. }
            | CoreError::EmptySample
            | CoreError::QuadratureNonConvergence { .. }
            | CoreError::EstimationFailure { .. }
            | CoreError::BootstrapFailure { .. } => CliError::Estimation(err.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
