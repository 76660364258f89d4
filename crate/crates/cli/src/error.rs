use thiserror::Error;

/// Failures of a CLI command, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] qaoa_bo::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 1 for bad configuration or input, 2 for an exceeded budget, 3 for
    /// numerical failure.
    pub fn exit_code(&self) -> i32 {
        use qaoa_bo::Error as E;
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Core(e) => match e {
                E::BudgetExceeded(_) => 2,
                E::NotPositiveDefinite { .. } | E::Numerical(_) => 3,
                _ => 1,
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub(crate) fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}
