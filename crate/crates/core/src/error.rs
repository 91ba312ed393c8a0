use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} out of range for length {len}")]
    OutOfRange { index: usize, len: usize },

    #[error("no such occurrence")]
    NotFound,

    #[error("symbol {symbol} outside alphabet of size {sigma}")]
    SymbolOutOfAlphabet { symbol: u32, sigma: usize },

    #[error("input contains the reserved sentinel byte 0x00 at offset {0}")]
    ReservedByte(usize),

    #[error("invalid text: {0}")]
    InvalidText(&'static str),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("corrupt index: {0}")]
    CorruptIndex(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}
