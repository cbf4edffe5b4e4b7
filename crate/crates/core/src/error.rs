use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("image dimensions must be at least 1x1, got {width}x{height}")]
    EmptyImage { width: usize, height: usize },

    #[error("expected {expected} samples for the given dimensions, got {actual}")]
    SampleCount { expected: usize, actual: usize },

    #[error("sample {index} is {value}, outside the allowed range")]
    SampleOutOfRange { index: usize, value: f64 },

    #[error("value is not finite")]
    NonFinite,

    #[error("invalid {name}: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },

    #[error("invalid kernel: {0}")]
    InvalidKernel(&'static str),

    #[error("dimension mismatch: {left_width}x{left_height} vs {right_width}x{right_height}")]
    DimensionMismatch {
        left_width: usize,
        left_height: usize,
        right_width: usize,
        right_height: usize,
    },
}

impl Error {
    /// True for errors caused by a bad caller-supplied parameter (as opposed
    /// to incompatible or malformed data).
    pub fn is_parameter(&self) -> bool {
        matches!(self, Error::InvalidParameter { .. } | Error::InvalidKernel(_))
    }
}
