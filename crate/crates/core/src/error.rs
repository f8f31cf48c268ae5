use std::path::PathBuf;

use crate::poly::Representation;

/// Errors produced anywhere in the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("representation mismatch: expected {expected:?}, found {found:?}")]
    Representation {
        expected: Representation,
        found: Representation,
    },

    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("level mismatch: {0} vs {1}")]
    LevelMismatch(usize, usize),

    #[error("scale mismatch: {0} vs {1}")]
    ScaleMismatch(f64, f64),

    #[error("level exhausted: a level-0 ciphertext cannot be rescaled")]
    LevelExhausted,

    #[error("insufficient level: need at least {need}, have {have}")]
    InsufficientLevel { need: usize, have: usize },

    #[error("missing evaluation key for {0}")]
    MissingKey(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("seed range violation at coefficient {index}: centered value {value} is not below q0/2")]
    SeedRange { index: usize, value: i128 },

    #[error("invalid plan: {0}")]
    InvalidPlan(String),

    #[error("inconsistent schedule: {0}")]
    Schedule(String),

    #[error("serialization error: {0}")]
    Serialization(String),

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Attach a file path to an error raised while reading or writing that file.
    pub fn at_path(self, path: impl Into<PathBuf>) -> Error {
        Error::File {
            path: path.into(),
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
