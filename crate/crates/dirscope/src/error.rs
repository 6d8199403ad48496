use std::fmt;
use std::path::Path;

/// Failure of a subcommand, classified by exit status.
#[derive(Debug)]
pub enum AppError {
    /// Bad arguments or flag combinations. Exit status 1.
    Usage(String),
    /// Unreadable, malformed or unsuitable input data, or an unwritable
    /// output. Exit status 2.
    Data(String),
}

pub type AppResult<T> = Result<T, AppError>;

impl AppError {
    pub fn usage(msg: impl Into<String>) -> Self {
        AppError::Usage(msg.into())
    }

    pub fn data(msg: impl Into<String>) -> Self {
        AppError::Data(msg.into())
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        AppError::Data(format!("{}: {e}", path.display()))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Usage(_) => 1,
            AppError::Data(_) => 2,
        }
    }
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Usage(m) => write!(f, "usage error: {m}"),
            AppError::Data(m) => write!(f, "error: {m}"),
        }
    }
}

impl std::error::Error for AppError {}

impl From<dirscope_core::Error> for AppError {
    fn from(e: dirscope_core::Error) -> Self {
        AppError::Data(e.to_string())
    }
}

impl From<dirscope_core::jpeg::JpegError> for AppError {
    fn from(e: dirscope_core::jpeg::JpegError) -> Self {
        AppError::Data(e.to_string())
    }
}
