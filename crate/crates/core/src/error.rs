use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid N-function: {0}")]
    InvalidNFunction(String),

    #[error("Sobolev conjugate undefined: {0}")]
    SobolevConjugate(String),

    #[error("root bracketing failed: {0}")]
    Bracket(String),

    #[error("non-positive input: {0}")]
    NonPositive(String),

    #[error("rejected nonlinearity: {0}")]
    Nonlinearity(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

