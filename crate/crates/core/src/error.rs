use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown function `{name}`; valid identifiers: {valid}")]
    UnknownFunction { name: String, valid: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: malformed summary document: {source}", path.display())]
    Format {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. } | Error::Csv(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
