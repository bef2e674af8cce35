use thiserror::Error;

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("resource cap exceeded: {0}")]
    Resource(String),
    #[error(transparent)]
    Other(#[from] anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Resource(_) => 3,
            CliError::Other(_) => 1,
        }
    }
}

impl From<btq_core::Error> for CliError {
    fn from(e: btq_core::Error) -> CliError {
        use btq_core::Error as E;
        match e {
            E::Invalid(_) | E::Unsupported(_) | E::DifferentPlaces => CliError::Invalid(e.to_string()),
            E::ResourceCap(s) => CliError::Resource(s),
            other => CliError::Other(anyhow::anyhow!("{other}")),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn invalid<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Invalid(msg.into()))
}
