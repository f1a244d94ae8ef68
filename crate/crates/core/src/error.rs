use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("invalid rigid shift: column {column} violates the landing rule")]
    InvalidShift { column: i64 },
    #[error("invalid cluster offsets: {0}")]
    InvalidOffsets(String),
    #[error("truncation caps differ ({0} vs {1})")]
    CapMismatch(u32, u32),
    #[error("series not invertible: {0}")]
    NotInvertible(String),
    #[error("unsupported format {0:?}")]
    UnsupportedFormat(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
