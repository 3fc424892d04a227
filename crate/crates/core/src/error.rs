use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the hazard-model toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter or argument lies outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Inputs are individually valid but do not fit together.
    #[error("configuration error: {0}")]
    Config(String),

    /// The model puts positive mass on an infinite failure time and no
    /// censoring horizon was given to absorb it.
    #[error(
        "model has a defective failure-time distribution (total cumulative hazard {limit}); \
         set a censoring horizon tau to simulate from it"
    )]
    Defective { limit: f64 },

    #[error("parse error at row {row}: {message}")]
    Parse { row: usize, message: String },

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(message: impl Into<String>) -> Result<T> {
    Err(Error::Domain(message.into()))
}
