use std::path::PathBuf;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A value violated a documented precondition or invariant.
    #[error("validation error: {0}")]
    Validation(String),

    /// A JSON document did not match its schema.
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("image error on {path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    /// The boundary scorer failed while predicting ring `ring` (0-based).
    #[error("scorer failed on ring {ring}: {source}")]
    Scorer {
        ring: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    /// True for errors caused by bad input values rather than the filesystem.
    pub fn is_validation(&self) -> bool {
        match self {
            Error::Validation(_) | Error::Parse(_) => true,
            Error::Scorer { source, .. } => source.is_validation(),
            Error::Io { .. } | Error::Image { .. } => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
