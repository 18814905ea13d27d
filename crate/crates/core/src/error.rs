use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{file}:{line}: {message}")]
    Parse { file: String, line: usize, message: String },

    #[error("duplicate id `{0}`")]
    DuplicateId(String),

    #[error("unknown document `{0}`")]
    UnknownDocument(String),

    #[error("scope span {start}..{end} is outside the source token range 0..{len}")]
    ScopeOutOfRange { start: usize, end: usize, len: usize },

    #[error("topic `{0}` has an empty description")]
    EmptyDescription(String),

    #[error("invalid lexicon: {0}")]
    Lexicon(String),

    #[error("invalid index snapshot: {0}")]
    Snapshot(String),

    #[error("{0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(file: impl Into<String>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            file: file.into(),
            line,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
