use alloc::string::String;

use crate::jpeg::JpegError;

/// Errors raised by the analysis operations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("image is {width}x{height}, operation needs at least {min}x{min}")]
    TooSmall { width: usize, height: usize, min: usize },
    #[error("image must be square, got {width}x{height}")]
    NotSquare { width: usize, height: usize },
    #[error("dimension mismatch: expected {expected:?}, got {got:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("sample buffer holds {got} values, {width}x{height} needs {expected}")]
    BufferSize {
        width: usize,
        height: usize,
        expected: usize,
        got: usize,
    },
    #[error("non-finite sample at index {0}")]
    NonFinite(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("empty input")]
    Empty,
    #[error(transparent)]
    Jpeg(#[from] JpegError),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
