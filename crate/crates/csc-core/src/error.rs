//! Error type shared by every module of the toolkit.

use thiserror::Error;

/// Errors produced by parsing, synthesis and evaluation operations.
#[derive(Debug, Error)]
pub enum Error {
    /// A malformed line in a TSV or count file. Line numbers are 1-based.
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Input bytes are not valid UTF-8.
    #[error("invalid UTF-8 at byte offset {offset}")]
    Utf8 { offset: usize },

    /// A configuration value is outside its allowed range.
    #[error("invalid configuration: {0}")]
    Invalid(String),

    /// An operation was handed inputs that contradict each other,
    /// e.g. a prediction file whose ids do not match the gold set.
    #[error("inconsistent input: {0}")]
    Inconsistent(String),

    /// An operation requires non-empty input.
    #[error("empty input: {0}")]
    Empty(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
