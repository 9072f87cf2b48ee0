use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied value is outside its documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// An evaluated expression left the model's admissible region
    /// (for example a non-positive SNR denominator).
    #[error("model violation: {0}")]
    ModelViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
