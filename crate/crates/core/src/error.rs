use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid {field}: {reason}")]
    Validation { field: String, reason: String },

    #[error("config line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("atom {atom}: no admissible offset after {attempts} draws")]
    DegenerateConfiguration { atom: usize, attempts: usize },

    #[error("kernel evaluated outside its domain: {0}")]
    Domain(String),

    #[error("atoms {i} and {j} are separated by {distance:e} λ0, below the minimum separation")]
    SingularSeparation { i: usize, j: usize, distance: f64 },

    #[error("eigendecomposition failed (seed {seed:?}, realization {realization:?}): {reason}")]
    Decomposition {
        seed: Option<u64>,
        realization: Option<u64>,
        reason: String,
    },

    #[error("propagation failed: {0}")]
    Propagation(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn validation(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Short stable tag used in machine-readable error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Validation { .. } => "validation",
            Error::Parse { .. } => "parse",
            Error::DegenerateConfiguration { .. } => "degenerate_configuration",
            Error::Domain(_) => "domain",
            Error::SingularSeparation { .. } => "singular_separation",
            Error::Decomposition { .. } => "decomposition",
            Error::Propagation(_) => "propagation",
            Error::Io { .. } => "io",
            Error::Json(_) => "json",
        }
    }
}
