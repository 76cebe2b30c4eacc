use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest register width representable by the packed bit types.
pub const MAX_QUBITS: usize = 64;

/// A computational-basis outcome on `n` qubits.
///
/// Qubit 0 is the most significant bit of `value`, so `value` is also the
/// index of the basis state in a `2^n`-dimensional vector whose tensor
/// factors are ordered qubit 0 first. The text form lists qubit 0 first.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    n: usize,
    value: u64,
}

impl BitString {
    pub fn zeros(n: usize) -> Self {
        assert!(n <= MAX_QUBITS, "at most {MAX_QUBITS} qubits supported");
        Self { n, value: 0 }
    }

    /// Builds a bit string from a basis index. Bits above `n` must be clear.
    pub fn from_index(n: usize, value: u64) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::WidthLimit {
                what: "bit string",
                n,
                limit: MAX_QUBITS,
            });
        }
        if n < 64 && value >> n != 0 {
            return Err(Error::invalid(format!(
                "basis index {value} does not fit in {n} bits"
            )));
        }
        Ok(Self { n, value })
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut s = Self::zeros(bits.len());
        for (q, &b) in bits.iter().enumerate() {
            s.set(q, b);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn index(&self) -> u64 {
        self.value
    }

    pub fn get(&self, qubit: usize) -> bool {
        assert!(qubit < self.n);
        (self.value >> (self.n - 1 - qubit)) & 1 == 1
    }

    pub fn set(&mut self, qubit: usize, bit: bool) {
        assert!(qubit < self.n);
        let mask = 1u64 << (self.n - 1 - qubit);
        if bit {
            self.value |= mask;
        } else {
            self.value &= !mask;
        }
    }

    pub fn xor(&self, other: &BitString) -> Result<BitString> {
        if self.n != other.n {
            return Err(Error::WidthMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(BitString {
            n: self.n,
            value: self.value ^ other.value,
        })
    }

    pub fn hamming_distance(&self, other: &BitString) -> usize {
        debug_assert_eq!(self.n, other.n);
        (self.value ^ other.value).count_ones() as usize
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n {
            f.write_str(if self.get(q) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.len() > MAX_QUBITS {
            return Err(Error::WidthLimit {
                what: "bit string",
                n: s.len(),
                limit: MAX_QUBITS,
            });
        }
        let mut out = BitString::zeros(s.len());
        for (q, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => out.set(q, true),
                other => {
                    return Err(Error::parse(
                        1,
                        q + 1,
                        format!("unexpected character {other:?} in bit string"),
                    ))
                }
            }
        }
        Ok(out)
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_form_lists_qubit_zero_first() {
        let b: BitString = "100".parse().unwrap();
        assert!(b.get(0));
        assert_eq!(b.index(), 4);
        assert_eq!(b.to_string(), "100");
    }

    #[test]
    fn hamming_distance_counts_differing_qubits() {
        let a: BitString = "0110".parse().unwrap();
        let b: BitString = "1100".parse().unwrap();
        assert_eq!(a.hamming_distance(&b), 2);
    }

    #[test]
    fn rejects_garbage() {
        assert!("01x".parse::<BitString>().is_err());
        assert!(BitString::from_index(2, 4).is_err());
    }
}
