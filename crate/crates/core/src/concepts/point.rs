use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Number of coordinates packed into one storage word.
pub const WORD_BITS: usize = 64;

/// Number of words needed to hold `n` bits.
#[inline]
pub fn words_for(n: usize) -> usize {
    n.div_ceil(WORD_BITS)
}

/// Mask selecting the valid bits of the last word of an `n`-bit vector.
#[inline]
pub fn tail_mask(n: usize) -> u64 {
    match n % WORD_BITS {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

/// A vertex of the hypercube `{0,1}^n`.
///
/// Coordinates are stored little-endian, 64 per word: coordinate `j`
/// (0-based) lives at bit `j % 64` of word `j / 64`. Bits past `n` in the
/// last word are always zero, so derived equality and hashing are sound.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    len: usize,
    words: Vec<u64>,
}

impl Point {
    pub fn zeros(n: usize) -> Self {
        Self { len: n, words: vec![0; words_for(n)] }
    }

    /// Builds a point from packed words, clearing any bits past `n`.
    pub fn from_words(n: usize, mut words: Vec<u64>) -> Result<Self> {
        if words.len() != words_for(n) {
            return Err(Error::DimensionMismatch { expected: words_for(n), found: words.len() });
        }
        if let Some(last) = words.last_mut() {
            *last &= tail_mask(n);
        }
        Ok(Self { len: n, words })
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut p = Self::zeros(bits.len());
        for (j, &b) in bits.iter().enumerate() {
            p.set(j, b);
        }
        p
    }

    /// The `n`-bit little-endian binary representation of `value`:
    /// coordinate `j` is bit `j` of `value`.
    pub fn from_index(n: usize, value: u64) -> Self {
        let mut p = Self::zeros(n);
        if n > 0 {
            p.words[0] = value & tail_mask(n.min(WORD_BITS));
        }
        p
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Coordinate `j`, 0-based.
    #[inline]
    pub fn get(&self, j: usize) -> bool {
        debug_assert!(j < self.len);
        (self.words[j / WORD_BITS] >> (j % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, j: usize, value: bool) {
        assert!(j < self.len, "coordinate {j} out of range for dimension {}", self.len);
        let bit = 1u64 << (j % WORD_BITS);
        if value {
            self.words[j / WORD_BITS] |= bit;
        } else {
            self.words[j / WORD_BITS] &= !bit;
        }
    }

    /// Number of ones.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |j| self.get(j))
    }

    /// 0-based indices of coordinates equal to one, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| BitIter(word).map(move |b| w * WORD_BITS + b))
    }

    pub(crate) fn check_dim(&self, n: usize) -> Result<()> {
        if self.len == n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: n, found: self.len })
        }
    }
}

/// Iterates the positions of set bits in a word, lowest first.
pub(crate) struct BitIter(pub u64);

impl Iterator for BitIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(b)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.iter().map(|b| if b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Point({self})")
    }
}

impl FromStr for Point {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("unexpected character {other:?} in point {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_bits(&bits))
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
