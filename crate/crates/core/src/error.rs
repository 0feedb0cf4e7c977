use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on `{name}`: {source}")]
    Io {
        name: String,
        #[source]
        source: io::Error,
    },

    /// A record list does not match its fixed-width layout.
    #[error("format error in `{name}`: {msg}")]
    Format { name: String, msg: String },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("input contains no reads")]
    EmptyInput,

    #[error("collection too large: {0} records do not fit 32-bit positions")]
    Capacity(u64),

    #[error("reads are not substring-free: {} read(s) contained in others (first: {})", .0.len(), .0[0])]
    NotSubstringFree(Vec<u32>),

    #[error("invalid parameter: {0}")]
    Param(String),

    #[error("path error: {0}")]
    Path(String),

    /// An internal invariant of one of the streaming passes was violated.
    #[error("invariant violation: {0}")]
    Invariant(String),

    #[error("oracle inconsistency: {0}")]
    Oracle(String),
}

impl Error {
    pub(crate) fn io(name: impl Into<String>, source: io::Error) -> Self {
        Error::Io {
            name: name.into(),
            source,
        }
    }

    pub(crate) fn format(name: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Format {
            name: name.into(),
            msg: msg.into(),
        }
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    /// True for failures caused by the pipeline itself rather than by its input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Invariant(_) | Error::Oracle(_))
    }
}
