use std::process::ExitCode;

/// Failure classes of the command line tool. Each maps to a fixed exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Domain(#[from] xduce_core::Error),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Io(_) => 4,
            CliError::Unsupported(_) => 5,
            CliError::Verification(_) => 6,
        }
    }
}

impl From<CliError> for ExitCode {
    fn from(e: CliError) -> Self {
        ExitCode::from(e.exit_code())
    }
}

pub fn io_err(what: impl std::fmt::Display, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{what}: {e}"))
}
