use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] spinchain::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }

    /// 2 for configuration errors, 3 for numerical failures, 1 for IO.
    pub fn exit_code(&self) -> u8 {
        use spinchain::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Io { .. } => 1,
            CliError::Core(e) => match e {
                E::InvalidConfig(_)
                | E::DimensionOverflow { .. }
                | E::InvalidPulse(_)
                | E::InvalidGate(_)
                | E::Parse { .. }
                | E::UnknownTransition { .. }
                | E::MissingTarget
                | E::NoSolution { .. } => 2,
                _ => 3,
            },
        }
    }
}
