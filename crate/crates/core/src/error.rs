use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} = {value} is outside its domain ({expected})")]
    Domain {
        what: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("sequence of length {len} is too short (need at least {needed})")]
    SequenceTooShort { len: usize, needed: usize },

    #[error("{0} is not representable: alphabet power overflows 64 bits")]
    Overflow(String),

    #[error("order/alphabet mismatch: {0}")]
    Mismatch(String),

    #[error("observed transition {symbol} after context {context} has zero probability")]
    ZeroProbabilityObserved { context: String, symbol: u8 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
