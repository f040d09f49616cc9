use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("graph is not {0}-regular")]
    NotRegular(u64),

    #[error("graph is not square ({n_u} x {n_v})")]
    NotSquare { n_u: usize, n_v: usize },

    #[error("{what} = {value} exceeds the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        value: u64,
        cap: u64,
    },

    #[error("index {index} out of range for {what} of size {len}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
