use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("FASTA parse error at line {line}: {msg}")]
    Fasta { line: usize, msg: String },

    #[error("BEDPE parse error at line {line}: {msg}")]
    Bedpe { line: usize, msg: String },

    #[error("duplicate sequence name `{0}`")]
    DuplicateName(String),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("index file error: {0}")]
    Index(String),

    #[error("alignment of {rows}x{cols} exceeds the cell limit of {limit}")]
    AlignmentTooLarge { rows: usize, cols: usize, limit: usize },

    #[error("oracle input too large: {0}")]
    OracleLimit(String),

    #[error("infeasible simulation config: {0}")]
    SimConfig(String),

    #[error("checkpoint error: {0}")]
    Checkpoint(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
