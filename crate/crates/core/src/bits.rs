use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A length-`n` binary word; bit `i` is the outcome on qubit (or edge) `i`.
///
/// Displayed most-significant-first in the sense of the text formats: the
/// first character is qubit 0.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    bits: u64,
    n: usize,
}

pub const MAX_BITS: usize = 64;

impl BitString {
    pub fn zeros(n: usize) -> Self {
        assert!(n <= MAX_BITS, "bit strings hold at most {MAX_BITS} bits");
        BitString { bits: 0, n }
    }

    pub fn from_bits(bits: u64, n: usize) -> Self {
        assert!(n <= MAX_BITS, "bit strings hold at most {MAX_BITS} bits");
        let mask = low_mask(n);
        assert!(bits & !mask == 0, "bits beyond length {n}");
        BitString { bits, n }
    }

    pub fn from_index(index: usize, n: usize) -> Self {
        Self::from_bits(index as u64, n)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn index(&self) -> usize {
        self.bits as usize
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.n);
        (self.bits >> i) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.n);
        if value {
            self.bits |= 1 << i;
        } else {
            self.bits &= !(1 << i);
        }
    }

    #[inline]
    pub fn flipped(self, i: usize) -> Self {
        debug_assert!(i < self.n);
        BitString {
            bits: self.bits ^ (1 << i),
            n: self.n,
        }
    }

    #[inline]
    pub fn xor_mask(self, mask: u64) -> Self {
        BitString::from_bits(self.bits ^ mask, self.n)
    }

    pub fn count_ones(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn hamming(&self, other: &BitString) -> u32 {
        (self.bits ^ other.bits).count_ones()
    }

    /// Restriction `x_A` packed little-endian: bit `k` of the result is
    /// `x[positions[k]]`.
    pub fn restrict(&self, positions: &[usize]) -> u64 {
        positions
            .iter()
            .enumerate()
            .fold(0u64, |acc, (k, &q)| acc | (((self.bits >> q) & 1) << k))
    }

    /// Overwrites the bits at `positions` with the packed `value`.
    pub fn with_restriction(mut self, positions: &[usize], value: u64) -> Self {
        for (k, &q) in positions.iter().enumerate() {
            self.set(q, (value >> k) & 1 == 1);
        }
        self
    }

    pub fn iter_all(n: usize) -> impl Iterator<Item = BitString> {
        assert!(n < MAX_BITS);
        (0..1u64 << n).map(move |b| BitString::from_bits(b, n))
    }
}

pub(crate) fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.len() > MAX_BITS {
            return Err(Error::InvalidArgument(format!(
                "bit string longer than {MAX_BITS}"
            )));
        }
        let mut out = BitString::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => out.set(i, true),
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "invalid character {c:?} in bit string"
                    )))
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn display_puts_qubit_zero_first() {
        let mut x = BitString::zeros(3);
        x.set(0, true);
        assert_eq!(x.to_string(), "100");
        assert_eq!(x.index(), 1);
        assert_eq!("100".parse::<BitString>().unwrap(), x);
    }

    #[test]
    fn restriction_packs_in_position_order() {
        let x: BitString = "0110".parse().unwrap();
        assert_eq!(x.restrict(&[2, 0]), 0b01);
        assert_eq!(x.restrict(&[1, 2]), 0b11);
        assert_eq!(x.with_restriction(&[0, 3], 0b11).to_string(), "1111");
    }

    #[test]
    fn rejects_bad_characters() {
        assert!("01x".parse::<BitString>().is_err());
    }

    proptest! {
        #[test]
        fn parse_display_round_trip(bits in any::<u64>(), n in 0usize..=64) {
            let x = BitString::from_bits(bits & low_mask(n), n);
            prop_assert_eq!(x.to_string().parse::<BitString>().unwrap(), x);
        }
    }
}
