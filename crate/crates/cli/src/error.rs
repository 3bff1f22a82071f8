use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] dicka::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Io(_) => ExitCode::from(2),
            CliError::Core(dicka::Error::Io(_)) => ExitCode::from(2),
            _ => ExitCode::from(1),
        }
    }
}
