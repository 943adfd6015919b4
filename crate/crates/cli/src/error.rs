use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] l2lab::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: String, source: serde_json::Error },
}

pub type CliResult<T> = Result<T, CliError>;

/// Machine-readable diagnostic written to stderr.
#[derive(Serialize)]
pub struct Diagnostic {
    pub error: String,
    pub message: String,
    pub exit_code: i32,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use l2lab::Error as E;
        match self {
            CliError::Core(E::SizeLimitExceeded { .. }) => 4,
            CliError::Core(
                E::StepEdgeMissing { .. }
                | E::TargetMismatch
                | E::MonotonicityViolated(_)
                | E::InconsistentChain(_)
                | E::Undecided(_),
            ) => 3,
            _ => 2,
        }
    }

    pub fn kind(&self) -> String {
        match self {
            CliError::Input(_) => "InputError".into(),
            CliError::Core(e) => format!("{e:?}").split(['(', ' ', '{']).next().unwrap_or("Error").to_string(),
            CliError::Io { .. } => "Io".into(),
            CliError::Json { .. } => "MalformedJson".into(),
        }
    }

    pub fn diagnostic(&self) -> Diagnostic {
        Diagnostic { error: self.kind(), message: self.to_string(), exit_code: self.exit_code() }
    }
}
