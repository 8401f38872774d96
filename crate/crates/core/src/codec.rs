//! Hexadecimal notation for sequences.
//!
//! Each hex digit expands to four bits, most significant first. The
//! `4·digits − L` leading bits are padding and must be zero; the remaining
//! bits map `0 ↦ +1`, `1 ↦ -1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::Sequence;

/// A hex string together with the sequence length it encodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HexRecord {
    pub hex: String,
    pub length: usize,
}

impl HexRecord {
    pub fn new(hex: impl Into<String>, length: usize) -> Self {
        HexRecord {
            hex: hex.into(),
            length,
        }
    }

    pub fn decode(&self) -> Result<Sequence> {
        decode(&self.hex, self.length)
    }
}

impl fmt::Display for HexRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.hex)
    }
}

/// Decodes `hex` into a sequence of exactly `length` entries. Whitespace
/// anywhere in `hex` is ignored and lowercase digits are accepted.
pub fn decode(hex: &str, length: usize) -> Result<Sequence> {
    if length == 0 {
        return Err(Error::Empty);
    }
    let mut digits = Vec::with_capacity(hex.len());
    for (offset, ch) in hex.char_indices() {
        if ch.is_whitespace() {
            continue;
        }
        let d = ch.to_digit(16).ok_or(Error::InvalidHexDigit { ch, offset })?;
        digits.push(d as u8);
    }
    let bits = 4 * digits.len();
    if length > bits {
        return Err(Error::HexTooShort { length, bits });
    }
    let surplus = bits - length;
    let mut values = Vec::with_capacity(length);
    for (i, bit) in digits
        .iter()
        .flat_map(|&d| (0..4).rev().map(move |b| (d >> b) & 1 == 1))
        .enumerate()
    {
        if i < surplus {
            if bit {
                return Err(Error::NonZeroPadding { length, surplus });
            }
        } else {
            values.push(if bit { -1 } else { 1 });
        }
    }
    Ok(Sequence::from_trusted(values))
}

/// Uppercase hex with the minimal number of digits, zero bits padding the
/// front.
pub fn encode(s: &Sequence) -> HexRecord {
    let length = s.len();
    let digits = length.div_ceil(4);
    let pad = 4 * digits - length;
    let mut hex = String::with_capacity(digits);
    let mut acc = 0u32;
    for (i, bit) in std::iter::repeat_n(false, pad).chain(s.bits()).enumerate() {
        acc = (acc << 1) | u32::from(bit);
        if i % 4 == 3 {
            hex.push(char::from_digit(acc, 16).unwrap().to_ascii_uppercase());
            acc = 0;
        }
    }
    HexRecord { hex, length }
}
