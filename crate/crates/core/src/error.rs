use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported field degree m={0}; supported degrees are 3, 4, 5, 6")]
    UnsupportedDegree(u32),
    #[error("unsupported projective geometry exponent s={0}; supported values are 2..=5")]
    UnsupportedGeometry(u32),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("value {0} is not a bit")]
    NotABit(u8),
    #[error("symbol {0:#x} is outside the field")]
    SymbolOutOfField(u8),
    #[error("invalid erasure positions {0} and {1}")]
    InvalidErasures(usize, usize),
    #[error("parity-check structure verification failed: {0}")]
    Structure(String),
    #[error("LDPC construction failed: {0}")]
    Construction(String),
    #[error("invalid channel parameters: {0}")]
    Channel(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}
