use thiserror::Error;

/// Errors raised by the engines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("symbol {symbol} is outside an alphabet of size {size}")]
    SymbolOutOfRange { symbol: u32, size: u32 },

    #[error("words must have equal length (got {left} and {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("word {0} is not allowed in the ambient system")]
    NotAllowed(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("singular matrix")]
    Singular,

    #[error("zero polynomial has no roots to isolate")]
    ZeroPolynomial,

    #[error("nilpotent adjacency matrix: the shift is empty")]
    Nilpotent,

    #[error("oracle disagreement: {0}")]
    OracleDisagreement(String),
}

/// Coarse classification used by front ends to choose exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Parse,
    Unsupported,
    Oracle,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse(_) | Error::SymbolOutOfRange { .. } => ErrorKind::Parse,
            Error::OracleDisagreement(_) => ErrorKind::Oracle,
            _ => ErrorKind::Unsupported,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
