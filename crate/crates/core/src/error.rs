//! Error taxonomy shared by the whole crate.

use thiserror::Error;

/// Errors reported by parameter validation, matrix algebra, and the cipher.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Invalid or unsupported parameters (non-prime modulus, bad divisibility,
    /// out-of-range values, `k = 1`, ...).
    #[error("parameter error: {0}")]
    Param(String),

    /// A matrix that must be invertible has determinant zero.
    #[error("singular matrix: {0}")]
    SingularMatrix(String),

    /// Decryption produced a non-integral or out-of-range result, which
    /// signals a key/ciphertext mismatch or a corrupted block.
    #[error("integrity error: {0}")]
    Integrity(String),

    /// Malformed serialized data (message framing, key or cipher files).
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
