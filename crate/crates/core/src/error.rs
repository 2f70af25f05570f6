use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("n must be at least 3, got {0}")]
    LevelTooSmall(i64),

    #[error("cyclotomic order mismatch: {0} vs {1}")]
    OrderMismatch(u64, u64),

    #[error("{ell} is not coprime to {modulus}")]
    NotCoprime { ell: i64, modulus: u64 },

    #[error("label {0} is outside P+ = {{1, ..., n-1}}")]
    LabelOutOfRange(i64),

    #[error("family {family} is not defined at n = {n}")]
    Inapplicable { family: String, n: u64 },

    #[error("dimension mismatch: expected {expected}x{expected}, got {found}")]
    Dimension { expected: usize, found: String },

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("search guard exceeded: {0}")]
    Guard(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    /// A published structural result failed on an input that satisfies its
    /// hypotheses. Treated as a hard failure by the CLI.
    #[error("lemma violation: {0}")]
    LemmaViolation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
