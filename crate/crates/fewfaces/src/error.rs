//! Error type shared by every module.

use std::fmt;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug)]
pub enum Error {
    /// File could not be read or written.
    Io(std::io::Error),
    /// Instance or matrix file failed to parse.
    Parse(String),
    /// A row has the wrong number of entries.
    DimensionMismatch { expected: usize, got: usize },
    /// A numeric argument is outside its admissible range.
    InvalidParameter(String),
    /// The slab body is unbounded (generators do not span the space).
    UnboundedBody,
    /// Exact volume requested above the configured dimension cap.
    DimensionCapExceeded { k: usize, cap: usize },
    /// Integer matrix does not have full row rank.
    RankDeficient,
    /// Exhaustive lattice enumeration box exceeds the hard size limit.
    EnumerationTooLarge { cells: u128, limit: u128 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Io(e) => write!(f, "i/o error: {e}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected} entries, got {got}")
            }
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::UnboundedBody => {
                write!(f, "unbounded body: generators do not span the ambient space")
            }
            Error::DimensionCapExceeded { k, cap } => {
                write!(f, "dimension {k} exceeds the exact-volume cap {cap}")
            }
            Error::RankDeficient => write!(f, "matrix does not have full row rank"),
            Error::EnumerationTooLarge { cells, limit } => {
                write!(f, "enumeration box has {cells} cells, limit is {limit}")
            }
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

impl Error {
    /// Process exit status for the CLI: 2 for bad input, 3 for a
    /// computation that cannot proceed.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter(_) => 2,
            _ => 3,
        }
    }
}
