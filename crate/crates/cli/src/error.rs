use loopform::CoreError;

use crate::parse::ParseError;

/// Failures that stop a command before any verdict; all map to exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{file}: invalid JSON: {message}")]
    Json { file: String, message: String },
    #[error("{file}: does not match the schema:\n  {}", errors.join("\n  "))]
    Schema { file: String, errors: Vec<String> },
    #[error("{file}: {at}: {error}")]
    Parse { file: String, at: String, error: ParseError },
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io error",
            CliError::Json { .. } | CliError::Schema { .. } | CliError::Input(_) => "input error",
            CliError::Parse { .. } => "parse error",
            CliError::Core(CoreError::Mode(_)) => "mode error",
            CliError::Core(_) => "error",
        }
    }
}
