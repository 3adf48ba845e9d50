use thiserror::Error;

/// Errors shared across the workspace.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// m is divisible by p+1, i.e. the character equals its Frobenius twist.
    #[error("character is Frobenius-fixed: (p+1) | m = {m}")]
    FrobeniusFixedCharacter { m: i64 },

    /// A valuation or an equality could not be decided at the available precision.
    #[error("insufficient precision: {context} (needs at least {needed} digits)")]
    Precision { context: String, needed: u32 },

    #[error("singular matrix")]
    Singular,

    #[error("domain error: {0}")]
    Domain(String),

    /// No w1 candidate reproduces the Frobenius-square scalar.
    #[error("calibration failed: {0}")]
    Calibration(String),
}

pub type Result<T> = std::result::Result<T, Error>;
