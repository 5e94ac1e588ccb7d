use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// A scenario field failed to parse or validate; `field` names it.
    #[error("invalid configuration: {field}: {message}")]
    Config { field: String, message: String },
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write output: {0}")]
    Write(#[from] std::io::Error),
    #[error("computation failed: {0}")]
    Compute(#[from] mixphase::Error),
}

impl CliError {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Process exit code for this error. Everything except a failed check is
    /// reported as a configuration-level failure.
    pub fn exit_code(&self) -> u8 {
        2
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => CliError::Write(io),
            other => CliError::Write(std::io::Error::other(format!("{other:?}"))),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
