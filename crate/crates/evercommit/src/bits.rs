//! Fixed-width bit strings.
//!
//! Keys, pads, certificates, oracle inputs and outputs are all bit strings,
//! so they share one small type. Position 0 is the first bit. The hex wire
//! encoding packs bit `8*j + k` into bit `k` (the least significant bit) of
//! byte `j`; a width that is not a multiple of eight leaves the unused high
//! bits of the final byte at zero.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Bits(Vec<bool>);

impl Bits {
    pub fn new() -> Self {
        Bits(Vec::new())
    }

    pub fn zeros(len: usize) -> Self {
        Bits(vec![false; len])
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        Bits((0..len).map(|_| rng.random::<bool>()).collect())
    }

    /// The `len` low bits of `value`, position 0 holding the least
    /// significant bit.
    pub fn from_uint(value: u64, len: usize) -> Self {
        assert!(len <= 64, "from_uint supports at most 64 bits");
        Bits((0..len).map(|i| (value >> i) & 1 == 1).collect())
    }

    /// Interpret the string as an unsigned integer, position 0 being the
    /// least significant bit. Widths above 64 are a caller bug.
    pub fn to_uint(&self) -> u64 {
        assert!(self.len() <= 64, "to_uint supports at most 64 bits");
        self.0
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| acc | ((b as u64) << i))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, index: usize) -> bool {
        self.0[index]
    }

    pub fn set(&mut self, index: usize, value: bool) {
        self.0[index] = value;
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.0.iter().copied()
    }

    pub fn hamming_weight(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    /// Positions holding `value`, ascending.
    pub fn positions(&self, value: bool) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.0[i] == value).collect()
    }

    /// XOR of two equal-width strings. Width mismatch is a caller bug, not
    /// an input error: every public entry point validates widths first.
    pub fn xor(&self, other: &Bits) -> Bits {
        assert_eq!(self.len(), other.len(), "xor of unequal widths");
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a ^ b).collect())
    }

    pub fn concat(&self, other: &Bits) -> Bits {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Bits(v)
    }

    /// The sub-string at the given positions, in the order supplied.
    pub fn select(&self, positions: &[usize]) -> Bits {
        Bits(positions.iter().map(|&i| self.0[i]).collect())
    }

    /// Split into consecutive chunks of the given widths; errors unless the
    /// widths sum to the total width.
    pub fn split(&self, widths: &[usize]) -> Result<Vec<Bits>> {
        let total: usize = widths.iter().sum();
        if total != self.len() {
            return Err(Error::LengthMismatch { expected: total, got: self.len() });
        }
        let mut out = Vec::with_capacity(widths.len());
        let mut at = 0;
        for &w in widths {
            out.push(Bits(self.0[at..at + w].to_vec()));
            at += w;
        }
        Ok(out)
    }

    /// Number of positions where the two strings differ.
    pub fn hamming_distance(&self, other: &Bits) -> usize {
        assert_eq!(self.len(), other.len(), "distance of unequal widths");
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }

    pub fn to_hex(&self) -> String {
        let mut bytes = vec![0u8; self.len().div_ceil(8)];
        for (i, &b) in self.0.iter().enumerate() {
            if b {
                bytes[i / 8] |= 1 << (i % 8);
            }
        }
        hex::encode(bytes)
    }

    /// Decode `bit_len` bits from the hex wire form.
    pub fn from_hex(s: &str, bit_len: usize) -> Result<Self> {
        let bytes = hex::decode(s)
            .map_err(|e| Error::InvalidParams(format!("bad hex string: {e}")))?;
        if bytes.len() != bit_len.div_ceil(8) {
            return Err(Error::LengthMismatch { expected: bit_len.div_ceil(8), got: bytes.len() });
        }
        let bits: Vec<bool> =
            (0..bit_len).map(|i| (bytes[i / 8] >> (i % 8)) & 1 == 1).collect();
        // Reject stray high bits so hex -> bits -> hex round-trips exactly.
        for i in bit_len..bytes.len() * 8 {
            if (bytes[i / 8] >> (i % 8)) & 1 == 1 {
                return Err(Error::InvalidParams("hex padding bits are not zero".into()));
            }
        }
        Ok(Bits(bits))
    }
}

impl From<Vec<bool>> for Bits {
    fn from(v: Vec<bool>) -> Self {
        Bits(v)
    }
}

impl FromIterator<bool> for Bits {
    fn from_iter<T: IntoIterator<Item = bool>>(iter: T) -> Self {
        Bits(iter.into_iter().collect())
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits(")?;
        for &b in &self.0 {
            write!(f, "{}", b as u8)?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            write!(f, "{}", b as u8)?;
        }
        Ok(())
    }
}

/// Wire form: hex with an explicit bit width, e.g. `"16:a3c1"`, so widths
/// that are not byte multiples survive a round trip.
impl Serialize for Bits {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&format!("{}:{}", self.len(), self.to_hex()))
    }
}

impl<'de> Deserialize<'de> for Bits {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        let (len, hex_part) = s
            .split_once(':')
            .ok_or_else(|| serde::de::Error::custom("expected \"<bits>:<hex>\""))?;
        let bit_len: usize = len.parse().map_err(serde::de::Error::custom)?;
        Bits::from_hex(hex_part, bit_len).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_is_lsb_first() {
        // bits 1000 0110 -> byte 0x61 (bit 0 set, bit 5 set, bit 6 set).
        let b: Bits = [true, false, false, false, false, true, true, false]
            .into_iter()
            .collect();
        assert_eq!(b.to_hex(), "61");
        assert_eq!(Bits::from_hex("61", 8).unwrap(), b);
    }

    #[test]
    fn short_width_keeps_padding_zero() {
        let b: Bits = [true, true, false].into_iter().collect();
        assert_eq!(b.to_hex(), "03");
        assert_eq!(Bits::from_hex("03", 3).unwrap(), b);
        assert!(Bits::from_hex("09", 3).is_err());
    }

    #[test]
    fn uint_round_trip_is_lsb_first() {
        let b = Bits::from_uint(0b1101, 6);
        assert_eq!(b.to_string(), "101100");
        assert_eq!(b.to_uint(), 0b1101);
    }

    #[test]
    fn select_and_split() {
        let b = Bits::from_uint(0b10110, 5);
        assert_eq!(b.select(&[1, 2, 4]).to_string(), "111");
        let parts = b.split(&[2, 3]).unwrap();
        assert_eq!(parts[0].to_string(), "01");
        assert_eq!(parts[1].to_string(), "101");
        assert!(b.split(&[2, 2]).is_err());
    }
}
