use std::io;
use std::path::PathBuf;

use crate::pgm::PgmError;
use crate::text::TextError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },

    #[error("{}: {source}", path.display())]
    Pgm { path: PathBuf, source: PgmError },

    #[error("{}: {source}", path.display())]
    Text { path: PathBuf, source: TextError },

    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },

    #[error("invalid pipeline: {0}")]
    Spec(String),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Filter(#[from] grayfilter_core::Error),

    #[error("stage {index} ({op}): {source}")]
    Stage {
        index: usize,
        op: &'static str,
        source: Box<Error>,
    },
}

impl Error {
    /// Process exit status: 1 usage, 2 I/O or format, 3 domain.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 1,
            Error::Filter(e) if e.is_parameter() => 1,
            Error::Filter(_) => 3,
            Error::Io { .. } | Error::Pgm { .. } | Error::Text { .. } | Error::Json { .. } => 2,
            Error::Spec(_) => 2,
            Error::Stage { source, .. } => source.exit_code(),
        }
    }
}
