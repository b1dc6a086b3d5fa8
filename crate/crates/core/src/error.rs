use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the detector, the evaluation toolkit and the file readers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("image is empty ({width}x{height})")]
    EmptyImage { width: usize, height: usize },

    #[error("pixel buffer has {actual} values, expected {expected}")]
    BufferSize { expected: usize, actual: usize },

    #[error("image {width}x{height} is smaller than the required {min_width}x{min_height}")]
    ImageTooSmall {
        width: usize,
        height: usize,
        min_width: usize,
        min_height: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate segment (zero length)")]
    DegenerateSegment,

    #[error("singular homography")]
    SingularHomography,

    #[error("unsupported image format: {0}")]
    UnsupportedFormat(String),

    #[error("truncated or corrupt image data: {0}")]
    TruncatedImage(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("image encoding failed: {0}")]
    Encode(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
