use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("unknown suite {0:?}")]
    UnknownSuite(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("invalid input: {0}")]
    Input(so1n_core::Error),

    #[error(transparent)]
    Core(#[from] so1n_core::Error),
}

impl CliError {
    /// Process exit code: configuration and I/O problems map to 2, numerical failures to 1.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::UnknownSuite(_) | CliError::Io(_) | CliError::Input(_) => 2,
            CliError::Core(_) => 1,
        }
    }
}
