use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("parsing config: {0}")]
    Toml(#[from] toml::de::Error),
    #[error(transparent)]
    Core(#[from] topress::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;

pub(crate) fn config_error(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}
