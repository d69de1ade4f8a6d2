use std::io;

use thiserror::Error;

/// Errors raised while planning or executing an experiment.
#[derive(Debug, Error)]
pub enum Error {
    /// A CLI flag or config key carries an unusable value. `key` uses the
    /// same spelling as the flag or config line.
    #[error("invalid value for `{key}`: {message}")]
    Invalid { key: String, message: String },

    #[error("cannot access `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },

    #[error(transparent)]
    Core(#[from] rede_core::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Invalid {
            key: key.into(),
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<String>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
