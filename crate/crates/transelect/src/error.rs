//! Error type shared across the crate.

use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by corpus loading, selection, BPE, and reporting.
#[derive(Debug, Error)]
pub enum Error {
    /// Source and target files of a parallel corpus have different line counts.
    #[error("corpus `{corpus_id}`: source/target line counts differ: {source_lines} vs {target_lines}")]
    AlignmentMismatch {
        corpus_id: String,
        source_lines: usize,
        target_lines: usize,
    },

    /// A line in an input file is not valid UTF-8.
    #[error("{path}: line {line}: invalid UTF-8")]
    Encoding { path: PathBuf, line: usize },

    /// Invalid parameter or parameter combination.
    #[error("configuration error: {0}")]
    Config(String),

    /// A precondition on an operation's input was violated.
    #[error("{0}")]
    Precondition(String),

    /// Malformed subword input (dangling continuation marker, reserved symbol).
    #[error("malformed subword input: {0}")]
    MalformedSubword(String),

    /// A structured file (meta TSV, BPE codec) failed to parse.
    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    /// I/O failure, with the path involved.
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// An internal invariant was violated; indicates a bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
