//! Run-length binary strings whose run lengths may be astronomically large.
//!
//! Coding through the length-lexicographic enumeration of Cohen forcing
//! makes condition lengths grow as a tower of exponentials: the index of a
//! string of length `L` is at least `2^L − 1`, and the next condition is
//! padded by that many zeros. Such lengths are kept symbolic. A [`LexNat`]
//! is either a machine word or *the length-lex index of another string*,
//! and a [`RunString`] is a sequence of runs whose counts are `LexNat`s.
//! Because the enumeration is a bijection, `Big(s)` is a canonical name for
//! the number, so equality of numbers reduces to equality of strings, which
//! is decided by a Merkle digest computed over the canonical run form.
//!
//! Arithmetic is closed for everything the wide-poset coding needs:
//! successor, predecessor, `2x + b`, halving with remainder, parity, and
//! addition or subtraction of a machine word. Adding two huge numbers and
//! comparing lengths made of unrelated huge terms are not supported and
//! panic.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::bits::BitString;
use crate::error::{Error, Result};

/// Upper bound on successor/predecessor steps used to add or subtract a
/// machine word from a huge number.
const MAX_UNIT_STEPS: u64 = 1 << 16;

/// A natural number: a machine word, or the length-lex index of a string of
/// length ≥ 64.
#[derive(Clone)]
pub enum LexNat {
    Small(u64),
    Big(Arc<RunString>),
}

impl LexNat {
    pub fn zero() -> Self {
        LexNat::Small(0)
    }

    pub fn from_u64(v: u64) -> Self {
        Self::from_u128(u128::from(v))
    }

    pub fn from_u128(v: u128) -> Self {
        if v < u128::from(u64::MAX) {
            LexNat::Small(v as u64)
        } else {
            LexNat::Big(Arc::new(RunString::from_index_u128(v)))
        }
    }

    pub fn as_u64(&self) -> Option<u64> {
        match self {
            LexNat::Small(v) => Some(*v),
            LexNat::Big(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, LexNat::Small(0))
    }

    pub fn is_odd(&self) -> bool {
        match self {
            LexNat::Small(v) => v & 1 == 1,
            // 2^L − 1 + value with L ≥ 64: odd iff the last bit is 0.
            LexNat::Big(s) => s.last_bit() == Some(false),
        }
    }

    pub fn succ(&self) -> Self {
        match self {
            LexNat::Small(v) => Self::from_u128(u128::from(*v) + 1),
            LexNat::Big(s) => s.lex_successor().lex_index(),
        }
    }

    /// Predecessor; panics on zero.
    pub fn pred(&self) -> Self {
        match self {
            LexNat::Small(0) => panic!("predecessor of zero"),
            LexNat::Small(v) => LexNat::Small(v - 1),
            LexNat::Big(s) => s.lex_predecessor().lex_index(),
        }
    }

    /// `2·self + bit`.
    pub fn double_plus(&self, bit: bool) -> Self {
        match self {
            LexNat::Small(v) => Self::from_u128(2 * u128::from(*v) + u128::from(bit)),
            LexNat::Big(_) if bit => RunString::from_lex_index(self).with_bit(false).lex_index(),
            LexNat::Big(_) => RunString::from_lex_index(&self.pred())
                .with_bit(true)
                .lex_index(),
        }
    }

    /// `(⌊self / 2⌋, self mod 2)`.
    pub fn halve(&self) -> (Self, bool) {
        match self {
            LexNat::Small(v) => (LexNat::Small(v / 2), v & 1 == 1),
            LexNat::Big(s) => {
                // index(u⌢0) = 2·index(u) + 1, index(u⌢1) = 2·(index(u) + 1)
                let u = s.without_last_bit();
                if s.last_bit() == Some(false) {
                    (u.lex_index(), true)
                } else {
                    (u.lex_index().succ(), false)
                }
            }
        }
    }

    pub fn add(&self, other: &LexNat) -> Self {
        match (self, other) {
            (LexNat::Small(a), LexNat::Small(b)) => {
                Self::from_u128(u128::from(*a) + u128::from(*b))
            }
            (big @ LexNat::Big(_), LexNat::Small(k)) | (LexNat::Small(k), big @ LexNat::Big(_)) => {
                assert!(
                    *k <= MAX_UNIT_STEPS,
                    "symbolic addition of a large word is unsupported"
                );
                (0..*k).fold(big.clone(), |acc, _| acc.succ())
            }
            (LexNat::Big(_), LexNat::Big(_)) => {
                panic!("symbolic addition of two huge numbers is unsupported")
            }
        }
    }

    /// `self − other`, requiring `self ≥ other`.
    pub fn sub(&self, other: &LexNat) -> Self {
        if self == other {
            return LexNat::zero();
        }
        match (self, other) {
            (LexNat::Small(a), LexNat::Small(b)) => {
                LexNat::Small(a.checked_sub(*b).expect("symbolic subtraction underflow"))
            }
            (LexNat::Big(_), LexNat::Small(k)) => {
                assert!(
                    *k <= MAX_UNIT_STEPS,
                    "symbolic subtraction of a large word is unsupported"
                );
                (0..*k).fold(self.clone(), |acc, _| acc.pred())
            }
            _ => panic!("symbolic subtraction of a huge number is unsupported"),
        }
    }

    fn feed(&self, hasher: &mut Sha256) {
        match self {
            LexNat::Small(v) => {
                hasher.update([0u8]);
                hasher.update(v.to_be_bytes());
            }
            LexNat::Big(s) => {
                hasher.update([1u8]);
                hasher.update(s.digest);
            }
        }
    }

    fn sort_key(&self) -> [u8; 32] {
        match self {
            LexNat::Small(v) => {
                let mut key = [0u8; 32];
                key[24..].copy_from_slice(&v.to_be_bytes());
                key
            }
            LexNat::Big(s) => s.digest,
        }
    }
}

impl PartialEq for LexNat {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (LexNat::Small(a), LexNat::Small(b)) => a == b,
            (LexNat::Big(a), LexNat::Big(b)) => a.digest == b.digest,
            _ => false,
        }
    }
}

impl Eq for LexNat {}

impl PartialOrd for LexNat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order on numbers. Panics when two huge numbers cannot be
/// compared symbolically (see module docs).
impl Ord for LexNat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (LexNat::Small(a), LexNat::Small(b)) => a.cmp(b),
            (LexNat::Small(_), LexNat::Big(_)) => Ordering::Less,
            (LexNat::Big(_), LexNat::Small(_)) => Ordering::Greater,
            (LexNat::Big(a), LexNat::Big(b)) => a.lex_cmp(b),
        }
    }
}

impl From<u64> for LexNat {
    fn from(v: u64) -> Self {
        LexNat::from_u64(v)
    }
}

impl fmt::Debug for LexNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LexNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.render(f, 2)
    }
}

impl LexNat {
    fn render(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        match self {
            LexNat::Small(v) => write!(f, "{v}"),
            LexNat::Big(s) if depth == 0 => write!(f, "ι(#{})", short_hex(&s.digest)),
            LexNat::Big(s) => {
                f.write_str("ι(")?;
                s.render(f, depth - 1)?;
                f.write_str(")")
            }
        }
    }
}

fn short_hex(digest: &[u8; 32]) -> String {
    digest[..4].iter().map(|b| format!("{b:02x}")).collect()
}

/// One maximal block of equal bits.
#[derive(Clone, PartialEq, Eq)]
pub struct Run {
    pub bit: bool,
    pub count: LexNat,
}

/// The length of a [`RunString`]: a machine part plus a multiset of huge
/// terms, kept sorted by digest.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Length {
    small: u128,
    bigs: Vec<LexNat>,
}

impl Length {
    pub fn as_u128(&self) -> Option<u128> {
        self.bigs.is_empty().then_some(self.small)
    }

    pub fn at_least(&self, n: u128) -> bool {
        !self.bigs.is_empty() || self.small >= n
    }

    fn compare(&self, other: &Length) -> Ordering {
        let mut left: Vec<&LexNat> = self.bigs.iter().collect();
        let mut right: Vec<&LexNat> = Vec::new();
        for term in &other.bigs {
            match left.iter().position(|x| *x == term) {
                Some(i) => {
                    left.remove(i);
                }
                None => right.push(term),
            }
        }
        // every huge term exceeds 2^63
        const FLOOR: u128 = 1 << 63;
        match (left.is_empty(), right.is_empty()) {
            (true, true) => self.small.cmp(&other.small),
            (true, false) if self.small < other.small + FLOOR => Ordering::Less,
            (false, true) if other.small < self.small + FLOOR => Ordering::Greater,
            _ => panic!("cannot compare symbolic lengths made of unrelated huge terms"),
        }
    }
}

/// A canonical run-length binary string: no empty runs, adjacent runs
/// carry different bits.
#[derive(Clone)]
pub struct RunString {
    runs: Vec<Run>,
    len: Length,
    digest: [u8; 32],
}

impl RunString {
    pub fn empty() -> Self {
        Self::from_runs(Vec::new())
    }

    /// Builds a canonical string, dropping empty runs and merging equal
    /// neighbours.
    pub fn from_runs(raw: Vec<Run>) -> Self {
        let mut runs: Vec<Run> = Vec::with_capacity(raw.len());
        for run in raw {
            if run.count.is_zero() {
                continue;
            }
            match runs.last_mut() {
                Some(last) if last.bit == run.bit => last.count = last.count.add(&run.count),
                _ => runs.push(run),
            }
        }
        let mut small = 0u128;
        let mut bigs = Vec::new();
        let mut hasher = Sha256::new();
        for run in &runs {
            hasher.update([u8::from(run.bit)]);
            run.count.feed(&mut hasher);
            match &run.count {
                LexNat::Small(v) => small += u128::from(*v),
                big => bigs.push(big.clone()),
            }
        }
        bigs.sort_by_key(|b| b.sort_key());
        Self {
            runs,
            len: Length { small, bigs },
            digest: hasher.finalize().into(),
        }
    }

    pub fn from_bits(bits: &BitString) -> Self {
        Self::from_runs(
            bits.bits()
                .iter()
                .map(|b| Run {
                    bit: *b,
                    count: LexNat::Small(1),
                })
                .collect(),
        )
    }

    fn from_index_u128(v: u128) -> Self {
        let shifted = v + 1;
        let len = 127 - shifted.leading_zeros() as usize;
        let value = shifted - (1u128 << len);
        let bits = (0..len).rev().map(|i| (value >> i) & 1 == 1).collect();
        Self::from_bits(&BitString::from_bits(bits))
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    pub fn len(&self) -> &Length {
        &self.len
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn digest(&self) -> [u8; 32] {
        self.digest
    }

    pub fn last_bit(&self) -> Option<bool> {
        self.runs.last().map(|r| r.bit)
    }

    /// Materializes the string when its length is at most `max_len`.
    pub fn to_bits(&self, max_len: usize) -> Option<BitString> {
        let len = self.len.as_u128()?;
        if len > max_len as u128 {
            return None;
        }
        let mut out = Vec::with_capacity(len as usize);
        for run in &self.runs {
            let n = run.count.as_u64()? as usize;
            out.extend(std::iter::repeat_n(run.bit, n));
        }
        Some(BitString::from_bits(out))
    }

    /// Materializes with every run shortened to at most `cap` bits.
    pub fn capped(&self, cap: u64) -> BitString {
        let mut out = Vec::new();
        for run in &self.runs {
            let n = run.count.as_u64().map_or(cap, |v| v.min(cap));
            out.extend(std::iter::repeat_n(run.bit, n as usize));
        }
        BitString::from_bits(out)
    }

    pub fn with_run(&self, bit: bool, count: LexNat) -> Self {
        let mut runs = self.runs.clone();
        runs.push(Run { bit, count });
        Self::from_runs(runs)
    }

    pub fn with_bit(&self, bit: bool) -> Self {
        self.with_run(bit, LexNat::Small(1))
    }

    pub fn with_bits(&self, bits: &BitString) -> Self {
        let mut runs = self.runs.clone();
        runs.extend(bits.bits().iter().map(|b| Run {
            bit: *b,
            count: LexNat::Small(1),
        }));
        Self::from_runs(runs)
    }

    /// Parity of the number of ones.
    pub fn ones_odd(&self) -> bool {
        self.runs
            .iter()
            .filter(|r| r.bit)
            .fold(false, |acc, r| acc ^ r.count.is_odd())
    }

    pub fn without_last_bit(&self) -> Self {
        let mut runs = self.runs.clone();
        if let Some(last) = runs.last_mut() {
            last.count = last.count.pred();
        }
        Self::from_runs(runs)
    }

    fn is_constant(&self, bit: bool) -> bool {
        self.runs.is_empty() || (self.runs.len() == 1 && self.runs[0].bit == bit)
    }

    /// The next string in length-lex order.
    pub fn lex_successor(&self) -> Self {
        if self.is_constant(true) {
            let len = self
                .runs
                .first()
                .map_or(LexNat::zero(), |r| r.count.clone());
            return Self::from_runs(vec![Run {
                bit: false,
                count: len.succ(),
            }]);
        }
        // binary increment: u 0 1^r  ↦  u 1 0^r
        let mut runs = self.runs.clone();
        let trailing_ones = match runs.last() {
            Some(r) if r.bit => runs.pop().map(|r| r.count),
            _ => None,
        };
        let zeros = runs.last_mut().expect("non-constant string has a zero run");
        zeros.count = zeros.count.pred();
        runs.push(Run {
            bit: true,
            count: LexNat::Small(1),
        });
        if let Some(count) = trailing_ones {
            runs.push(Run { bit: false, count });
        }
        Self::from_runs(runs)
    }

    /// The previous string in length-lex order; panics on the empty string.
    pub fn lex_predecessor(&self) -> Self {
        assert!(!self.is_empty(), "the empty string has no predecessor");
        if self.is_constant(false) {
            let len = self.runs[0].count.pred();
            return Self::from_runs(vec![Run {
                bit: true,
                count: len,
            }]);
        }
        // binary decrement: u 1 0^r  ↦  u 0 1^r
        let mut runs = self.runs.clone();
        let trailing_zeros = match runs.last() {
            Some(r) if !r.bit => runs.pop().map(|r| r.count),
            _ => None,
        };
        let ones = runs.last_mut().expect("non-constant string has a one run");
        ones.count = ones.count.pred();
        runs.push(Run {
            bit: false,
            count: LexNat::Small(1),
        });
        if let Some(count) = trailing_zeros {
            runs.push(Run { bit: true, count });
        }
        Self::from_runs(runs)
    }

    /// Index in the length-lex enumeration `2^len − 1 + value`.
    pub fn lex_index(&self) -> LexNat {
        match self.len.as_u128() {
            Some(len) if len <= 63 => {
                let bits = self.to_bits(63).expect("short string materializes");
                LexNat::Small(bits.lex_index().expect("length ≤ 63 fits"))
            }
            _ => LexNat::Big(Arc::new(self.clone())),
        }
    }

    pub fn from_lex_index(index: &LexNat) -> Self {
        match index {
            LexNat::Small(v) => Self::from_bits(&BitString::from_lex_index(*v)),
            LexNat::Big(s) => (**s).clone(),
        }
    }

    /// Length-lexicographic comparison.
    pub fn lex_cmp(&self, other: &RunString) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        match self.len.compare(&other.len) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for (a, b) in self.runs.iter().zip(&other.runs) {
            if a == b {
                continue;
            }
            if a.bit != b.bit {
                return a.bit.cmp(&b.bit);
            }
            // same bit, different run lengths: the shorter run switches bit first
            let shorter_first = a.count.cmp(&b.count);
            return if a.bit {
                shorter_first
            } else {
                shorter_first.reverse()
            };
        }
        Ordering::Equal
    }

    pub fn is_prefix_of(&self, other: &RunString) -> bool {
        let n = self.runs.len();
        if n == 0 {
            return true;
        }
        if other.runs.len() < n || self.runs[..n - 1] != other.runs[..n - 1] {
            return false;
        }
        let (mine, theirs) = (&self.runs[n - 1], &other.runs[n - 1]);
        mine.bit == theirs.bit && mine.count <= theirs.count
    }

    /// Cohen order: `self` end-extends `other`.
    pub fn leq(&self, other: &RunString) -> bool {
        other.is_prefix_of(self)
    }

    pub fn compatible(&self, other: &RunString) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// When `self = prefix ⌢ 0^j ⌢ 1 ⌢ …`, returns `j`.
    pub fn zero_run_after(&self, prefix: &RunString) -> Option<LexNat> {
        if !prefix.is_prefix_of(self) {
            return None;
        }
        let n = prefix.runs.len();
        let mut rest: Vec<Run> = Vec::new();
        if n > 0 {
            let (mine, theirs) = (&prefix.runs[n - 1], &self.runs[n - 1]);
            if mine.count != theirs.count {
                rest.push(Run {
                    bit: theirs.bit,
                    count: theirs.count.sub(&mine.count),
                });
            }
        }
        rest.extend(self.runs[n..].iter().take(2).cloned());
        match rest.as_slice() {
            [first, ..] if first.bit => Some(LexNat::zero()),
            [zeros, ones, ..] if ones.bit => Some(zeros.count.clone()),
            _ => None,
        }
    }

    fn render(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        if let Some(bits) = self.to_bits(96) {
            return write!(f, "\"{bits}\"");
        }
        f.write_str("⟨")?;
        for (i, run) in self.runs.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}^", u8::from(run.bit))?;
            run.count.render(f, depth)?;
        }
        f.write_str("⟩")
    }
}

impl PartialEq for RunString {
    fn eq(&self, other: &Self) -> bool {
        self.digest == other.digest
    }
}

impl Eq for RunString {}

impl std::hash::Hash for RunString {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.digest.hash(state);
    }
}

impl fmt::Debug for RunString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.render(f, 2)
    }
}

impl fmt::Display for RunString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.render(f, 2)
    }
}

impl From<&BitString> for RunString {
    fn from(bits: &BitString) -> Self {
        RunString::from_bits(bits)
    }
}

/// Shared-node text encoding for sets of [`RunString`]s.
///
/// Node `k` is written as space-separated runs `b^n` where `n` is a decimal
/// count or `#i`, the length-lex index of node `i < k`. Nested indices are
/// shared, so encodings stay linear in the construction length even though
/// the strings themselves are not printable.
#[derive(Debug, Default)]
pub struct RunTable {
    nodes: Vec<String>,
    ids: HashMap<[u8; 32], usize>,
}

impl RunTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, s: &RunString) -> usize {
        if let Some(id) = self.ids.get(&s.digest) {
            return *id;
        }
        let mut parts = Vec::with_capacity(s.runs.len());
        for run in &s.runs {
            let count = match &run.count {
                LexNat::Small(v) => v.to_string(),
                LexNat::Big(inner) => format!("#{}", self.intern(inner)),
            };
            parts.push(format!("{}^{count}", u8::from(run.bit)));
        }
        let id = self.nodes.len();
        self.nodes.push(parts.join(" "));
        self.ids.insert(s.digest, id);
        id
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn into_nodes(self) -> Vec<String> {
        self.nodes
    }

    pub fn decode(nodes: &[String]) -> Result<Vec<RunString>> {
        let mut out: Vec<RunString> = Vec::with_capacity(nodes.len());
        for (k, text) in nodes.iter().enumerate() {
            let mut runs = Vec::new();
            for token in text.split_whitespace() {
                let bad = || Error::Parse(format!("bad run token {token:?} in node {k}"));
                let (bit, count) = token.split_once('^').ok_or_else(bad)?;
                let bit = match bit {
                    "0" => false,
                    "1" => true,
                    _ => return Err(bad()),
                };
                let count = if let Some(id) = count.strip_prefix('#') {
                    let id: usize = id.parse().map_err(|_| bad())?;
                    let inner = out.get(id).ok_or_else(bad)?;
                    let n = inner.lex_index();
                    if n.as_u64().is_some() {
                        return Err(bad());
                    }
                    n
                } else {
                    LexNat::from_u64(count.parse().map_err(|_| bad())?)
                };
                runs.push(Run { bit, count });
            }
            out.push(RunString::from_runs(runs));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rs(s: &str) -> RunString {
        RunString::from_bits(&s.parse().unwrap())
    }

    #[test]
    fn small_indices_match_closed_form() {
        assert_eq!(rs("00001").lex_index(), LexNat::Small(32));
        assert_eq!(RunString::from_lex_index(&LexNat::Small(32)), rs("00001"));
        assert_eq!(rs("").lex_index(), LexNat::Small(0));
    }

    #[test]
    fn boundary_between_word_and_symbolic() {
        let max = LexNat::from_u64(u64::MAX);
        assert!(matches!(max, LexNat::Big(_)));
        assert_eq!(max.pred(), LexNat::Small(u64::MAX - 1));
        assert_eq!(LexNat::Small(u64::MAX - 1).succ(), max);
        let s = RunString::from_lex_index(&max);
        assert_eq!(
            s,
            RunString::from_runs(vec![Run {
                bit: false,
                count: LexNat::Small(64)
            }])
        );
    }

    #[test]
    fn u128_arithmetic_agrees_across_the_boundary() {
        let base = u128::from(u64::MAX) - 40;
        for v in base..base + 80 {
            let n = LexNat::from_u128(v);
            assert_eq!(n.succ(), LexNat::from_u128(v + 1), "succ {v}");
            assert_eq!(n.pred(), LexNat::from_u128(v - 1), "pred {v}");
            assert_eq!(n.double_plus(true), LexNat::from_u128(2 * v + 1));
            assert_eq!(n.double_plus(false), LexNat::from_u128(2 * v));
            assert_eq!(n.halve(), (LexNat::from_u128(v / 2), v % 2 == 1));
            assert_eq!(n.is_odd(), v % 2 == 1);
            assert_eq!(n.add(&LexNat::Small(5)), LexNat::from_u128(v + 5));
            assert_eq!(n.cmp(&LexNat::from_u128(v + 1)), Ordering::Less);
        }
    }

    fn tower() -> LexNat {
        // index of 0^33 1 is 2^34; pad a string by that much and index it
        let q = rs("0").with_run(false, LexNat::Small(32)).with_bit(true);
        let alpha = q.lex_index();
        let p = rs("00001")
            .with_run(false, alpha.double_plus(true))
            .with_bit(true);
        p.lex_index()
    }

    #[test]
    fn huge_numbers_round_trip_through_halving() {
        let n = tower();
        assert!(n.as_u64().is_none());
        for bit in [false, true] {
            let doubled = n.double_plus(bit);
            assert_eq!(doubled.halve(), (n.clone(), bit));
            assert_eq!(doubled.is_odd(), bit);
        }
        assert_eq!(n.succ().pred(), n);
        assert_eq!(n.pred().succ(), n);
        assert!(n.succ() > n);
        assert_eq!(n.add(&LexNat::Small(3)).sub(&LexNat::Small(3)), n);
    }

    #[test]
    fn zero_run_after_reads_padding() {
        let p = rs("0");
        let a = p.with_run(false, LexNat::Small(3)).with_bit(true);
        assert_eq!(a, rs("00001"));
        assert_eq!(a.zero_run_after(&p), Some(LexNat::Small(3)));
        let big = tower();
        let b = a
            .with_run(false, big.clone())
            .with_bit(true)
            .with_bits(&"0110".parse().unwrap());
        assert_eq!(b.zero_run_after(&a), Some(big));
        assert!(b.leq(&a) && !a.leq(&b));
        assert_eq!(b.zero_run_after(&rs("1")), None);
    }

    #[test]
    fn table_round_trip_shares_nodes() {
        let big = tower();
        let s = rs("01").with_run(false, big.clone()).with_bit(true);
        let t = s.with_run(false, s.lex_index()).with_bit(true);
        let mut table = RunTable::new();
        let ids = [table.intern(&s), table.intern(&t)];
        let decoded = RunTable::decode(table.nodes()).unwrap();
        assert_eq!(decoded[ids[0]], s);
        assert_eq!(decoded[ids[1]], t);
        assert!(RunTable::decode(&["1^#0".to_string()]).is_err());
    }

    proptest! {
        #[test]
        fn small_strings_agree_with_explicit_bits(a in "[01]{0,20}", b in "[01]{0,20}") {
            let (ba, bb): (BitString, BitString) = (a.parse().unwrap(), b.parse().unwrap());
            let (ra, rb) = (RunString::from_bits(&ba), RunString::from_bits(&bb));
            prop_assert_eq!(ra.leq(&rb), ba.leq(&bb));
            prop_assert_eq!(ra.compatible(&rb), ba.compatible(&bb));
            prop_assert_eq!(ra.lex_index(), LexNat::Small(ba.lex_index().unwrap()));
            prop_assert_eq!(ra.lex_cmp(&rb), ba.lex_index().cmp(&bb.lex_index()));
            prop_assert_eq!(ra.to_bits(64).unwrap(), ba.clone());
            prop_assert_eq!(ra.ones_odd(), ba.count_ones() % 2 == 1);
            if !ba.is_empty() {
                let idx = ba.lex_index().unwrap();
                prop_assert_eq!(ra.lex_predecessor().lex_index(), LexNat::Small(idx - 1));
            }
            prop_assert_eq!(ra.lex_successor().lex_index(), LexNat::Small(ba.lex_index().unwrap() + 1));
        }
    }
}
