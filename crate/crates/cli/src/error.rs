use std::path::PathBuf;

use thiserror::Error;

/// Everything that ends a command early, with its exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Engine(#[from] stable_info::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: malformed report: {source}", path.display())]
    Report {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 for bad input, 3 for numerical failure, 4 for files.
    pub fn exit_code(&self) -> u8 {
        use stable_info::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Engine(e) => match e {
                E::ConvergenceFailure { .. }
                | E::NonFiniteEvaluation { .. }
                | E::AccelerationStagnation { .. }
                | E::EvaluationFailure { .. } => 3,
                _ => 2,
            },
            CliError::Io { .. } | CliError::Report { .. } => 4,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
