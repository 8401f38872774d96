use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("sequence is empty")]
    Empty,
    #[error("entry {index} is {value}, expected +1 or -1")]
    NotBinary { index: usize, value: i64 },
    #[error("sequence of length {0} has no off-peak lag")]
    TooShort(usize),
    #[error("invalid hex digit {ch:?} at offset {offset}")]
    InvalidHexDigit { ch: char, offset: usize },
    #[error("length {length} exceeds the {bits} bits available in the hex string")]
    HexTooShort { length: usize, bits: usize },
    #[error("dropped leading bits of the hex string contain a 1 (length {length}, {surplus} surplus bits)")]
    NonZeroPadding { length: usize, surplus: usize },
    #[error("sequence is not skew-symmetric")]
    NotSkewSymmetric,
    #[error("position {pos} out of range for {size} flip positions")]
    PositionOutOfRange { pos: usize, size: usize },
    #[error("skew-symmetric mode requires odd length, got {0}")]
    EvenSkewLength(usize),
    #[error("length {length} exceeds the exhaustive search cap of {cap} for {mode} mode")]
    OracleCap {
        length: usize,
        cap: usize,
        mode: &'static str,
    },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("dataset line {line}: {msg}")]
    Dataset { line: usize, msg: String },
}
