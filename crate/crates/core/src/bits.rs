//! Finite binary strings (Cohen conditions) and infinite bit streams
//! (branches through Cohen forcing).

use std::fmt;
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Name recorded in traces for the seeded tail generator.
pub const PRNG_ALGORITHM: &str = "chacha8";

/// A finite binary sequence. As a Cohen condition, longer is stronger:
/// `p.leq(q)` holds when `p` end-extends `q`.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    /// Bytes read most-significant bit first.
    pub fn from_bytes(bytes: &[u8]) -> Self {
        Self(
            bytes
                .iter()
                .flat_map(|byte| (0..8).rev().map(move |i| (byte >> i) & 1 == 1))
                .collect(),
        )
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![false; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.0.get(i).copied()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn push(&mut self, bit: bool) {
        self.0.push(bit);
    }

    pub fn extend_from(&mut self, other: &BitString) {
        self.0.extend_from_slice(&other.0);
    }

    /// Pads with zeros up to length `n` (no-op when already that long).
    pub fn pad_to(&mut self, n: usize) {
        if self.0.len() < n {
            self.0.resize(n, false);
        }
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        self.0[i] = bit;
    }

    pub fn truncated(&self, n: usize) -> BitString {
        Self(self.0[..n.min(self.0.len())].to_vec())
    }

    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        other.0.starts_with(&self.0)
    }

    /// `self ≤ other` in Cohen forcing: self end-extends other.
    pub fn leq(&self, other: &BitString) -> bool {
        other.is_prefix_of(self)
    }

    pub fn compatible(&self, other: &BitString) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|b| **b).count()
    }

    /// Position of the first 1 at index ≥ `from`, if any.
    pub fn find_one(&self, from: usize) -> Option<usize> {
        self.0
            .iter()
            .skip(from)
            .position(|b| *b)
            .map(|off| off + from)
    }

    /// Whether `word` occurs starting at some position ≥ `from`.
    pub fn contains_from(&self, word: &BitString, from: usize) -> bool {
        if word.is_empty() {
            return from <= self.len();
        }
        if self.len() < word.len() {
            return false;
        }
        (from..=self.len() - word.len()).any(|i| self.0[i..i + word.len()] == word.0[..])
    }

    /// Index in the length-lexicographic enumeration: `2^len − 1 + value`.
    /// `None` when it does not fit in a `u64`.
    pub fn lex_index(&self) -> Option<u64> {
        if self.len() > 63 {
            return None;
        }
        let value = self
            .0
            .iter()
            .fold(0u64, |acc, b| (acc << 1) | u64::from(*b));
        Some((1u64 << self.len()) - 1 + value)
    }

    /// Inverse of [`BitString::lex_index`].
    pub fn from_lex_index(index: u64) -> BitString {
        let shifted = u128::from(index) + 1;
        let len = 127 - shifted.leading_zeros() as usize;
        let value = shifted - (1u128 << len);
        Self((0..len).rev().map(|i| (value >> i) & 1 == 1).collect())
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            f.write_str(if *b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for BitString {
    type Err = Error;

    /// Accepts ASCII '0'/'1'; whitespace (including newlines) is ignored.
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!(
                    "unexpected character {other:?} in bitstring"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitString)
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// How a stream continues past its finalized prefix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum TailRule {
    Constant {
        bit: u8,
    },
    /// Bit `i` is bit `i mod 32` of word `i / 32` of a ChaCha8 keystream.
    Seeded {
        algorithm: String,
        seed: u64,
        stream: u64,
    },
}

impl TailRule {
    pub fn zero() -> Self {
        TailRule::Constant { bit: 0 }
    }

    pub fn constant(bit: bool) -> Self {
        TailRule::Constant { bit: u8::from(bit) }
    }

    pub fn seeded(seed: u64, stream: u64) -> Self {
        TailRule::Seeded {
            algorithm: PRNG_ALGORITHM.to_string(),
            seed,
            stream,
        }
    }

    pub fn bit(&self, i: usize) -> bool {
        match self {
            TailRule::Constant { bit } => *bit != 0,
            TailRule::Seeded { seed, stream, .. } => {
                let mut rng = keystream(*seed, *stream, i);
                (rng.next_u32() >> (i % 32)) & 1 == 1
            }
        }
    }

    /// Bits `start..end`, generated sequentially.
    pub fn bits(&self, start: usize, end: usize) -> Vec<bool> {
        match self {
            TailRule::Constant { bit } => vec![*bit != 0; end.saturating_sub(start)],
            TailRule::Seeded { seed, stream, .. } => {
                let mut out = Vec::with_capacity(end.saturating_sub(start));
                let mut rng = keystream(*seed, *stream, start);
                let mut word = rng.next_u32();
                for i in start..end {
                    if i > start && i % 32 == 0 {
                        word = rng.next_u32();
                    }
                    out.push((word >> (i % 32)) & 1 == 1);
                }
                out
            }
        }
    }
}

fn keystream(seed: u64, stream: u64, bit_index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.set_word_pos((bit_index / 32) as u128);
    rng
}

/// An infinite binary sequence: a finalized prefix followed by a tail rule.
/// Its filter is the set of its finite prefixes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitStream {
    pub prefix: BitString,
    pub tail_rule: TailRule,
}

impl BitStream {
    pub fn new(prefix: BitString, tail_rule: TailRule) -> Self {
        Self { prefix, tail_rule }
    }

    /// The prefix followed by zeros forever.
    pub fn zero_tail(prefix: BitString) -> Self {
        Self::new(prefix, TailRule::zero())
    }

    pub fn constant(bit: bool) -> Self {
        Self::new(BitString::new(), TailRule::constant(bit))
    }

    pub fn seeded(seed: u64, stream: u64) -> Self {
        Self::new(BitString::new(), TailRule::seeded(seed, stream))
    }

    pub fn bit(&self, i: usize) -> bool {
        self.prefix.get(i).unwrap_or_else(|| self.tail_rule.bit(i))
    }

    /// The prefix of length `n` as a condition.
    pub fn take(&self, n: usize) -> BitString {
        if n <= self.prefix.len() {
            return self.prefix.truncated(n);
        }
        let mut bits = self.prefix.bits().to_vec();
        bits.extend(self.tail_rule.bits(self.prefix.len(), n));
        BitString::from_bits(bits)
    }
}

/// Source of payload bits for the coding constructions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    Finite(BitString),
    Stream(BitStream),
}

impl Payload {
    pub fn bit(&self, i: usize) -> Option<bool> {
        match self {
            Payload::Finite(bits) => bits.get(i),
            Payload::Stream(stream) => Some(stream.bit(i)),
        }
    }

    /// Bytes read most-significant bit first.
    pub fn from_bytes(bytes: &[u8]) -> Self {
        Payload::Finite(BitString::from_bytes(bytes))
    }
}

/// Sequential reader over a payload that reports exhaustion as an error.
#[derive(Debug)]
pub(crate) struct PayloadReader<'a> {
    payload: &'a Payload,
    consumed: Vec<bool>,
}

impl<'a> PayloadReader<'a> {
    pub fn new(payload: &'a Payload) -> Self {
        Self {
            payload,
            consumed: Vec::new(),
        }
    }

    pub fn next_bit(&mut self) -> Result<bool> {
        let bit = self
            .payload
            .bit(self.consumed.len())
            .ok_or(Error::PayloadExhausted {
                consumed: self.consumed.len(),
            })?;
        self.consumed.push(bit);
        Ok(bit)
    }

    pub fn into_consumed(self) -> BitString {
        BitString::from_bits(self.consumed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn order_is_end_extension() {
        assert!(bs("0110").leq(&bs("01")));
        assert!(!bs("01").leq(&bs("0110")));
        assert!(bs("01").leq(&bs("")));
        assert!(bs("01").compatible(&bs("0110")));
        assert!(!bs("00").compatible(&bs("01")));
    }

    #[test]
    fn lex_index_closed_form() {
        assert_eq!(bs("").lex_index(), Some(0));
        assert_eq!(bs("0").lex_index(), Some(1));
        assert_eq!(bs("1").lex_index(), Some(2));
        assert_eq!(bs("00").lex_index(), Some(3));
        assert_eq!(bs("00001").lex_index(), Some(32));
        for i in 0..2000u64 {
            assert_eq!(BitString::from_lex_index(i).lex_index(), Some(i));
        }
        assert_eq!(BitString::from_lex_index(u64::MAX - 1).len(), 63);
        assert_eq!(BitString::from_lex_index(u64::MAX).len(), 64);
    }

    #[test]
    fn parse_ignores_newlines_and_rejects_junk() {
        assert_eq!(bs("01\n10\n"), bs("0110"));
        assert!("012".parse::<BitString>().is_err());
    }

    #[test]
    fn seeded_tail_random_access_matches_bulk() {
        let rule = TailRule::seeded(7, 3);
        let bulk = rule.bits(5, 200);
        for (off, b) in bulk.iter().enumerate() {
            assert_eq!(rule.bit(5 + off), *b);
        }
        let stream = BitStream::new(bs("111"), rule.clone());
        assert_eq!(stream.take(3), bs("111"));
        assert_eq!(stream.bit(40), rule.bit(40));
    }

    #[test]
    fn contains_from_respects_start() {
        assert!(bs("0101").contains_from(&bs("101"), 1));
        assert!(!bs("0101").contains_from(&bs("101"), 2));
        assert!(!bs("01").contains_from(&bs("101"), 0));
    }

    #[test]
    fn payload_reader_exhausts() {
        let payload = Payload::from_bytes(&[0xA0]);
        let mut reader = PayloadReader::new(&payload);
        let bits: Vec<bool> = (0..8).map(|_| reader.next_bit().unwrap()).collect();
        assert_eq!(bits[..3], [true, false, true]);
        assert_eq!(
            reader.next_bit(),
            Err(Error::PayloadExhausted { consumed: 8 })
        );
    }
}
