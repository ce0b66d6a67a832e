use thiserror::Error;

/// Failures of a command, each with a stable process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),

    #[error(transparent)]
    Core(#[from] toricnp::Error),

    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("verification failed: {0}")]
    Verification(String),
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_VERIFICATION: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_INPUT: i32 = 4;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Core(toricnp::Error::BudgetExceeded { .. }) => EXIT_BUDGET,
            CliError::Core(_) => EXIT_INPUT,
            CliError::Io { .. } => EXIT_IO,
            CliError::Verification(_) => EXIT_VERIFICATION,
        }
    }

    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
