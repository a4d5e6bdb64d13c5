use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: {source}", path = .0.display(), source = .1)]
    Io(PathBuf, std::io::Error),
    #[error(transparent)]
    Core(#[from] kmnet::Error),
    /// A benchmark ran but missed its targets.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Core(e) if e.is_numeric() => ExitCode::from(2),
            CliError::Failed(_) => ExitCode::from(2),
            _ => ExitCode::from(1),
        }
    }
}
