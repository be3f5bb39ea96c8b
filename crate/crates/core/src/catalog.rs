//! The built-in catalog of dense sets, specified as JSON lists.
//!
//! Entry `i` of a list defines `D_i`; every entry's semantics depends on its
//! own index `n`. All catalog sets are open (closed under extension), and
//! every densifier is the identity on members. When a densifier has to move
//! a condition it may append up to `jitter` extra pseudo-random bits, seeded
//! by the family seed, the set index and the input condition, so densifiers
//! stay pure while exercising the freedom a construction must tolerate.
//!
//! Cohen entries (conditions are binary strings):
//!
//! | entry | `D_n` | densifier |
//! |---|---|---|
//! | `{"type":"min-length"}` | length ≥ n+1 | pad with 0 |
//! | `{"type":"pattern","word":"101"}` | `word` occurs at a position ≥ n | pad to n, append `word` |
//! | `{"type":"parity","bit":1}` | some prefix of length ≥ n+1 has an odd (bit=1) / even (bit=0) number of ones | pad to n+1, append 1 if needed |
//!
//! Product entries (conditions are tuples of strings):
//!
//! | entry | `D_n` |
//! |---|---|
//! | `{"type":"min-length"}` | every coordinate has length ≥ n+1 |
//! | `{"type":"coord","coord":j,"inner":<cohen entry>}` | coordinate `j` is in the inner `D_n` |
//! | `{"type":"every","inner":<cohen entry>}` | every coordinate is in the inner `D_n` |
//! | `{"type":"separate","a":i,"b":j}` | coordinates `i` and `j` differ at a position both define |
//!
//! Plane entries (conditions are finite partial functions on ω×ω):
//!
//! | entry | `D_n` | densifier |
//! |---|---|---|
//! | `{"type":"square"}` (alias `min-length`) | defined on the whole (n+1)×(n+1) square | fill missing cells with 0 (`"fill":"random"` for seeded bits) |
//! | `{"type":"cell","row":r}` | row `r` defined on columns 0..=n | fill with 0 |
//! | `{"type":"rows","rows":[..],"inner":<product entry>}` | the initial segments of the listed rows form a tuple in the inner `D_n` | close gaps with 0, then the inner densifier |

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bits::BitString;
use crate::dense::{BitTuple, Carrier, DenseFamily, DenseSet};
use crate::error::{Error, Result};
use crate::plane::PlaneCondition;
use crate::symbolic::RunString;

fn is_zero(v: &u32) -> bool {
    *v == 0
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CohenEntry {
    MinLength {
        #[serde(default, skip_serializing_if = "is_zero")]
        jitter: u32,
    },
    Pattern {
        word: BitString,
        #[serde(default, skip_serializing_if = "is_zero")]
        jitter: u32,
    },
    Parity {
        bit: u8,
        #[serde(default, skip_serializing_if = "is_zero")]
        jitter: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ProductEntry {
    MinLength {
        #[serde(default, skip_serializing_if = "is_zero")]
        jitter: u32,
    },
    Coord {
        coord: usize,
        inner: CohenEntry,
    },
    Every {
        inner: CohenEntry,
    },
    Separate {
        a: usize,
        b: usize,
    },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fill {
    #[default]
    Zero,
    Random,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PlaneEntry {
    #[serde(alias = "min-length")]
    Square {
        #[serde(default, skip_serializing_if = "is_default_fill")]
        fill: Fill,
    },
    Cell {
        row: usize,
    },
    Rows {
        rows: Vec<usize>,
        inner: ProductEntry,
    },
}

fn is_default_fill(f: &Fill) -> bool {
    *f == Fill::Zero
}

impl PlaneEntry {
    /// Rows the set constrains; `None` when it constrains every row.
    pub fn rows(&self) -> Option<Vec<usize>> {
        match self {
            PlaneEntry::Square { .. } => None,
            PlaneEntry::Cell { row } => Some(vec![*row]),
            PlaneEntry::Rows { rows, .. } => Some(rows.clone()),
        }
    }
}

/// A family specification together with the poset it lives on; this is
/// what traces record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "carrier", rename_all = "kebab-case")]
pub enum FamilySpec {
    Cohen {
        sets: Vec<CohenEntry>,
    },
    Product {
        arity: usize,
        sets: Vec<ProductEntry>,
    },
    Plane {
        sets: Vec<PlaneEntry>,
    },
}

impl FamilySpec {
    pub fn len(&self) -> usize {
        match self {
            FamilySpec::Cohen { sets } => sets.len(),
            FamilySpec::Product { sets, .. } => sets.len(),
            FamilySpec::Plane { sets } => sets.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

// ---------------------------------------------------------------------------
// jitter

fn jitter_rng(seed: u64, id: usize, salt: &[u8], condition: &[u8]) -> ChaCha8Rng {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_be_bytes());
    hasher.update((id as u64).to_be_bytes());
    hasher.update(salt);
    hasher.update(condition);
    let digest: [u8; 32] = hasher.finalize().into();
    ChaCha8Rng::from_seed(digest)
}

fn jitter_bits(seed: u64, id: usize, salt: &[u8], condition: &[u8], max: u32) -> BitString {
    if max == 0 {
        return BitString::new();
    }
    let mut rng = jitter_rng(seed, id, salt, condition);
    let n = rng.gen_range(0..=max);
    BitString::from_bits((0..n).map(|_| rng.gen()).collect())
}

fn bit_bytes(s: &BitString) -> Vec<u8> {
    s.bits().iter().map(|b| u8::from(*b)).collect()
}

// ---------------------------------------------------------------------------
// Cohen sets

/// A catalog set on Cohen forcing. Also acts on symbolic strings.
#[derive(Debug, Clone)]
pub struct CohenSet {
    id: usize,
    entry: CohenEntry,
    seed: u64,
}

impl CohenSet {
    pub fn new(id: usize, entry: CohenEntry, seed: u64) -> Self {
        Self { id, entry, seed }
    }

    fn jitter(&self) -> u32 {
        match &self.entry {
            CohenEntry::MinLength { jitter }
            | CohenEntry::Pattern { jitter, .. }
            | CohenEntry::Parity { jitter, .. } => *jitter,
        }
    }

    fn member_bits(&self, s: &BitString) -> bool {
        let n = self.id;
        match &self.entry {
            CohenEntry::MinLength { .. } => s.len() > n,
            CohenEntry::Pattern { word, .. } => s.contains_from(word, n),
            CohenEntry::Parity { bit, .. } => {
                if s.len() <= n {
                    return false;
                }
                let head_odd = s.truncated(n + 1).count_ones() % 2 == 1;
                head_odd == (*bit != 0) || s.find_one(n + 1).is_some()
            }
        }
    }

    /// The bits the densifier appends to a non-member (before jitter).
    fn completion(&self, s: &BitString) -> BitString {
        let n = self.id;
        let mut tail = BitString::new();
        match &self.entry {
            CohenEntry::MinLength { .. } => {
                tail.pad_to((n + 1).saturating_sub(s.len()));
            }
            CohenEntry::Pattern { word, .. } => {
                tail.pad_to(n.saturating_sub(s.len()));
                tail.extend_from(word);
            }
            CohenEntry::Parity { .. } => {
                let mut padded = s.clone();
                padded.pad_to(n + 1);
                tail.pad_to(padded.len() - s.len());
                if !self.member_bits(&padded) {
                    tail.push(true);
                }
            }
        }
        tail
    }

    fn word_len(&self) -> usize {
        match &self.entry {
            CohenEntry::Pattern { word, .. } => word.len(),
            _ => 0,
        }
    }
}

impl DenseSet<BitString> for CohenSet {
    fn id(&self) -> usize {
        self.id
    }

    fn member(&self, s: &BitString) -> bool {
        self.member_bits(s)
    }

    fn densify(&self, s: &BitString) -> BitString {
        if self.member_bits(s) {
            return s.clone();
        }
        let mut out = s.clone();
        out.extend_from(&self.completion(s));
        out.extend_from(&jitter_bits(
            self.seed,
            self.id,
            b"cohen",
            &bit_bytes(s),
            self.jitter(),
        ));
        out
    }

    fn describe(&self) -> String {
        format!(
            "D_{} {}",
            self.id,
            serde_json::to_string(&self.entry).unwrap_or_default()
        )
    }
}

/// Strings short enough to be handled explicitly.
const EXPLICIT_LIMIT: usize = 1 << 12;

impl CohenSet {
    /// Run caps that preserve membership: the answer depends only on the
    /// first n+1 positions and on which bit patterns occur beyond them.
    fn cap(&self) -> u64 {
        (self.id + self.word_len() + 2) as u64
    }
}

impl DenseSet<RunString> for CohenSet {
    fn id(&self) -> usize {
        self.id
    }

    fn member(&self, s: &RunString) -> bool {
        match s.to_bits(EXPLICIT_LIMIT) {
            Some(bits) => self.member_bits(&bits),
            None => self.member_bits(&s.capped(self.cap())),
        }
    }

    fn densify(&self, s: &RunString) -> RunString {
        if let Some(bits) = s.to_bits(EXPLICIT_LIMIT) {
            return RunString::from_bits(&DenseSet::<BitString>::densify(self, &bits));
        }
        let capped = s.capped(self.cap());
        if self.member_bits(&capped) {
            return s.clone();
        }
        // a huge string is longer than any padding target
        let tail = self.completion(&capped);
        let extra = jitter_bits(
            self.seed,
            self.id,
            b"cohen-symbolic",
            &s.digest(),
            self.jitter(),
        );
        s.with_bits(&tail).with_bits(&extra)
    }

    fn describe(&self) -> String {
        DenseSet::<BitString>::describe(self)
    }
}

// ---------------------------------------------------------------------------
// product sets

#[derive(Debug, Clone)]
pub struct ProductSet {
    id: usize,
    arity: usize,
    entry: ProductEntry,
    seed: u64,
}

impl ProductSet {
    pub fn new(id: usize, arity: usize, entry: ProductEntry, seed: u64) -> Result<Self> {
        let check = |j: usize| {
            if j < arity {
                Ok(())
            } else {
                Err(Error::FamilySpec(format!(
                    "coordinate {j} out of range for arity {arity} in entry {id}"
                )))
            }
        };
        match &entry {
            ProductEntry::Coord { coord, .. } => check(*coord)?,
            ProductEntry::Separate { a, b } => {
                check(*a)?;
                check(*b)?;
                if a == b {
                    return Err(Error::FamilySpec(format!(
                        "separate needs two distinct coordinates (entry {id})"
                    )));
                }
            }
            _ => {}
        }
        Ok(Self {
            id,
            arity,
            entry,
            seed,
        })
    }

    fn inner(&self, entry: &CohenEntry, coord: usize) -> CohenSet {
        // distinct coordinates draw distinct jitter
        CohenSet::new(
            self.id,
            entry.clone(),
            self.seed ^ (coord as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
        )
    }
}

impl DenseSet<BitTuple> for ProductSet {
    fn id(&self) -> usize {
        self.id
    }

    fn member(&self, t: &BitTuple) -> bool {
        if t.arity() != self.arity {
            return false;
        }
        let n = self.id;
        match &self.entry {
            ProductEntry::MinLength { .. } => t.0.iter().all(|s| s.len() > n),
            ProductEntry::Coord { coord, inner } => {
                self.inner(inner, *coord).member_bits(&t.0[*coord])
            }
            ProductEntry::Every { inner } => {
                t.0.iter()
                    .enumerate()
                    .all(|(j, s)| self.inner(inner, j).member_bits(s))
            }
            ProductEntry::Separate { a, b } => {
                let (x, y) = (&t.0[*a], &t.0[*b]);
                x.bits().iter().zip(y.bits()).any(|(p, q)| p != q)
            }
        }
    }

    fn densify(&self, t: &BitTuple) -> BitTuple {
        if self.member(t) || t.arity() != self.arity {
            return t.clone();
        }
        let n = self.id;
        let mut out = t.clone();
        match &self.entry {
            ProductEntry::MinLength { jitter } => {
                for (j, s) in out.0.iter_mut().enumerate() {
                    if s.len() <= n {
                        let extra =
                            jitter_bits(self.seed, n, &[b'p', j as u8], &bit_bytes(s), *jitter);
                        s.pad_to(n + 1);
                        s.extend_from(&extra);
                    }
                }
            }
            ProductEntry::Coord { coord, inner } => {
                out.0[*coord] =
                    DenseSet::<BitString>::densify(&self.inner(inner, *coord), &t.0[*coord]);
            }
            ProductEntry::Every { inner } => {
                for (j, s) in out.0.iter_mut().enumerate() {
                    *s = DenseSet::<BitString>::densify(&self.inner(inner, j), s);
                }
            }
            ProductEntry::Separate { a, b } => {
                let len = out.0[*a].len().max(out.0[*b].len());
                out.0[*a].pad_to(len);
                out.0[*b].pad_to(len);
                out.0[*a].push(false);
                out.0[*b].push(true);
            }
        }
        out
    }

    fn describe(&self) -> String {
        format!(
            "D_{} {}",
            self.id,
            serde_json::to_string(&self.entry).unwrap_or_default()
        )
    }
}

// ---------------------------------------------------------------------------
// plane sets

#[derive(Debug, Clone)]
pub struct PlaneSet {
    id: usize,
    entry: PlaneEntry,
    inner: Option<ProductSet>,
    seed: u64,
}

impl PlaneSet {
    pub fn new(id: usize, entry: PlaneEntry, seed: u64) -> Result<Self> {
        let inner = match &entry {
            PlaneEntry::Rows { rows, inner } => {
                if rows.is_empty() {
                    return Err(Error::FamilySpec(format!("rows entry {id} lists no rows")));
                }
                let mut sorted = rows.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() != rows.len() {
                    return Err(Error::FamilySpec(format!("rows entry {id} repeats a row")));
                }
                Some(ProductSet::new(id, rows.len(), inner.clone(), seed)?)
            }
            _ => None,
        };
        Ok(Self {
            id,
            entry,
            inner,
            seed,
        })
    }

    pub fn rows(&self) -> Option<Vec<usize>> {
        self.entry.rows()
    }

    fn tuple(&self, p: &PlaneCondition, rows: &[usize]) -> BitTuple {
        BitTuple(rows.iter().map(|r| p.row_prefix(*r)).collect())
    }
}

impl DenseSet<PlaneCondition> for PlaneSet {
    fn id(&self) -> usize {
        self.id
    }

    fn member(&self, p: &PlaneCondition) -> bool {
        let n = self.id;
        match &self.entry {
            PlaneEntry::Square { .. } => (0..=n).all(|r| (0..=n).all(|c| p.get(r, c).is_some())),
            PlaneEntry::Cell { row } => (0..=n).all(|c| p.get(*row, c).is_some()),
            PlaneEntry::Rows { rows, .. } => {
                let inner = self.inner.as_ref().expect("rows entry has an inner set");
                inner.member(&self.tuple(p, rows))
            }
        }
    }

    fn densify(&self, p: &PlaneCondition) -> PlaneCondition {
        if self.member(p) {
            return p.clone();
        }
        let n = self.id;
        let mut out = p.clone();
        match &self.entry {
            PlaneEntry::Square { fill } => {
                let mut rng = match fill {
                    Fill::Zero => None,
                    Fill::Random => {
                        let bytes = serde_json::to_vec(p).unwrap_or_default();
                        Some(jitter_rng(self.seed, n, b"square", &bytes))
                    }
                };
                for r in 0..=n {
                    for c in 0..=n {
                        let bit = rng.as_mut().is_some_and(|g| g.gen());
                        out.fill(r, c, bit);
                    }
                }
            }
            PlaneEntry::Cell { row } => {
                for c in 0..=n {
                    out.fill(*row, c, false);
                }
            }
            PlaneEntry::Rows { rows, .. } => {
                for r in rows {
                    if let Some(max) = out.max_col_in_row(*r) {
                        for c in 0..=max {
                            out.fill(*r, c, false);
                        }
                    }
                }
                let inner = self.inner.as_ref().expect("rows entry has an inner set");
                let tuple = inner.densify(&self.tuple(&out, rows));
                for (r, bits) in rows.iter().zip(&tuple.0) {
                    out.write_row(*r, bits)
                        .expect("inner densifier extends the rows");
                }
            }
        }
        out
    }

    fn describe(&self) -> String {
        format!(
            "D_{} {}",
            self.id,
            serde_json::to_string(&self.entry).unwrap_or_default()
        )
    }
}

/// A plane set viewed on a tuple of selected rows; only valid for sets
/// whose row support lies inside the selection.
struct RowRestricted {
    set: PlaneSet,
    rows: Vec<usize>,
}

impl RowRestricted {
    fn embed(&self, t: &BitTuple) -> PlaneCondition {
        let mut p = PlaneCondition::new();
        for (r, bits) in self.rows.iter().zip(&t.0) {
            p.write_row(*r, bits).expect("fresh rows cannot clash");
        }
        p
    }
}

impl DenseSet<BitTuple> for RowRestricted {
    fn id(&self) -> usize {
        self.set.id
    }

    fn member(&self, t: &BitTuple) -> bool {
        t.arity() == self.rows.len() && self.set.member(&self.embed(t))
    }

    fn densify(&self, t: &BitTuple) -> BitTuple {
        if t.arity() != self.rows.len() {
            return t.clone();
        }
        let p = self.set.densify(&self.embed(t));
        BitTuple(self.rows.iter().map(|r| p.row_prefix(*r)).collect())
    }

    fn describe(&self) -> String {
        format!("{} on rows {:?}", self.set.describe(), self.rows)
    }
}

// ---------------------------------------------------------------------------
// family builders

pub fn cohen_family(entries: &[CohenEntry], seed: u64) -> DenseFamily<BitString> {
    let sets = entries
        .iter()
        .enumerate()
        .map(|(i, e)| Arc::new(CohenSet::new(i, e.clone(), seed)) as Arc<dyn DenseSet<BitString>>)
        .collect();
    DenseFamily::new(Carrier::Cohen, sets)
}

/// The same catalog sets acting on symbolic strings.
pub fn symbolic_cohen_family(entries: &[CohenEntry], seed: u64) -> DenseFamily<RunString> {
    let sets = entries
        .iter()
        .enumerate()
        .map(|(i, e)| Arc::new(CohenSet::new(i, e.clone(), seed)) as Arc<dyn DenseSet<RunString>>)
        .collect();
    DenseFamily::new(
        Carrier::Abstract {
            name: "cohen-length-lex".into(),
        },
        sets,
    )
}

pub fn product_family(
    entries: &[ProductEntry],
    arity: usize,
    seed: u64,
) -> Result<DenseFamily<BitTuple>> {
    let sets = entries
        .iter()
        .enumerate()
        .map(|(i, e)| {
            ProductSet::new(i, arity, e.clone(), seed)
                .map(|s| Arc::new(s) as Arc<dyn DenseSet<BitTuple>>)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DenseFamily::new(Carrier::Product { arity }, sets))
}

pub fn plane_family(entries: &[PlaneEntry], seed: u64) -> Result<DenseFamily<PlaneCondition>> {
    let sets = entries
        .iter()
        .enumerate()
        .map(|(i, e)| {
            PlaneSet::new(i, e.clone(), seed)
                .map(|s| Arc::new(s) as Arc<dyn DenseSet<PlaneCondition>>)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DenseFamily::new(Carrier::Plane, sets))
}

/// The sets of a plane family that only constrain rows in `rows`, viewed as
/// a family on the product of those rows (coordinate `i` is row `rows[i]`).
/// Set ids keep their position in the original family.
pub fn restrict_plane_family(
    entries: &[PlaneEntry],
    seed: u64,
    rows: &[usize],
) -> Result<DenseFamily<BitTuple>> {
    let mut sets: Vec<Arc<dyn DenseSet<BitTuple>>> = Vec::new();
    for (i, e) in entries.iter().enumerate() {
        let Some(support) = e.rows() else { continue };
        if support.iter().all(|r| rows.contains(r)) {
            sets.push(Arc::new(RowRestricted {
                set: PlaneSet::new(i, e.clone(), seed)?,
                rows: rows.to_vec(),
            }));
        }
    }
    Ok(DenseFamily::selection(
        Carrier::Product { arity: rows.len() },
        sets,
    ))
}

/// Builds the family a spec describes on its own carrier.
pub enum BuiltFamily {
    Cohen(DenseFamily<BitString>),
    Product(DenseFamily<BitTuple>),
    Plane(DenseFamily<PlaneCondition>),
}

pub fn build(spec: &FamilySpec, seed: u64) -> Result<BuiltFamily> {
    Ok(match spec {
        FamilySpec::Cohen { sets } => BuiltFamily::Cohen(cohen_family(sets, seed)),
        FamilySpec::Product { arity, sets } => {
            BuiltFamily::Product(product_family(sets, *arity, seed)?)
        }
        FamilySpec::Plane { sets } => BuiltFamily::Plane(plane_family(sets, seed)?),
    })
}

// ---------------------------------------------------------------------------
// ready-made specifications

/// `D_n` = strings of length ≥ n+1, padded with zeros.
pub fn len_spec(size: usize) -> Vec<CohenEntry> {
    vec![CohenEntry::MinLength { jitter: 0 }; size]
}

/// Cycles through min-length, pattern and parity sets, with jittered
/// densifiers when `jitter > 0`.
pub fn mixed_cohen_spec(size: usize, jitter: u32) -> Vec<CohenEntry> {
    const WORDS: [&str; 5] = ["1", "101", "0110", "111", "1001"];
    (0..size)
        .map(|i| match i % 4 {
            0 => CohenEntry::MinLength { jitter },
            1 => CohenEntry::Pattern {
                word: WORDS[(i / 4) % WORDS.len()].parse().expect("literal word"),
                jitter,
            },
            2 => CohenEntry::Parity {
                bit: ((i / 4) % 2) as u8,
                jitter,
            },
            _ => CohenEntry::Pattern {
                word: WORDS[(i / 4 + 2) % WORDS.len()]
                    .parse()
                    .expect("literal word"),
                jitter,
            },
        })
        .collect()
}

/// Every coordinate of length ≥ n+1.
pub fn product_len_spec(size: usize) -> Vec<ProductEntry> {
    vec![ProductEntry::MinLength { jitter: 0 }; size]
}

/// Cycles through length, per-coordinate pattern, separation and parity
/// sets on an `arity`-fold product.
pub fn mixed_product_spec(size: usize, arity: usize, jitter: u32) -> Vec<ProductEntry> {
    let cohen = mixed_cohen_spec(size, jitter);
    (0..size)
        .map(|i| match i % 4 {
            0 => ProductEntry::MinLength { jitter },
            1 => ProductEntry::Coord {
                coord: (i / 4) % arity.max(1),
                inner: cohen[i].clone(),
            },
            2 if arity >= 2 => ProductEntry::Separate {
                a: (i / 4) % arity,
                b: (i / 4 + 1) % arity,
            },
            _ => ProductEntry::Every {
                inner: cohen[i].clone(),
            },
        })
        .collect()
}

/// `D_n` = conditions defined on the (n+1)×(n+1) square, zero fill.
pub fn square_spec(size: usize) -> Vec<PlaneEntry> {
    vec![PlaneEntry::Square { fill: Fill::Zero }; size]
}

/// A plane family mixing squares, single-row lengths and lifted product
/// sets on pairs of rows below `rows`.
pub fn mixed_plane_spec(size: usize, rows: usize, jitter: u32) -> Vec<PlaneEntry> {
    let rows = rows.max(2);
    let cohen = mixed_cohen_spec(size, jitter);
    (0..size)
        .map(|i| match i % 4 {
            0 => PlaneEntry::Square { fill: Fill::Zero },
            1 => PlaneEntry::Cell {
                row: (i / 4) % rows,
            },
            2 => PlaneEntry::Rows {
                rows: vec![(i / 4) % rows, (i / 4 + 1) % rows],
                inner: ProductEntry::Separate { a: 0, b: 1 },
            },
            _ => PlaneEntry::Rows {
                rows: vec![(i / 4 + 1) % rows],
                inner: ProductEntry::Every {
                    inner: cohen[i].clone(),
                },
            },
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn json_catalog_parses() {
        let spec: Vec<CohenEntry> = serde_json::from_str(
            r#"[{"type":"min-length"},{"type":"pattern","word":"101"},{"type":"parity","bit":1,"jitter":3}]"#,
        )
        .unwrap();
        assert_eq!(spec[0], CohenEntry::MinLength { jitter: 0 });
        assert_eq!(
            spec[1],
            CohenEntry::Pattern {
                word: bs("101"),
                jitter: 0
            }
        );
        let plane: Vec<PlaneEntry> =
            serde_json::from_str(r#"[{"type":"min-length"},{"type":"cell","row":2}]"#).unwrap();
        assert_eq!(plane[0], PlaneEntry::Square { fill: Fill::Zero });
        assert!(serde_json::from_str::<Vec<CohenEntry>>(r#"[{"type":"nope"}]"#).is_err());
    }

    #[test]
    fn min_length_pads_with_zeros() {
        let fam = cohen_family(&len_spec(3), 0);
        let d2 = fam.get(2).unwrap();
        assert_eq!(d2.densify(&bs("1")), bs("100"));
        assert!(d2.member(&bs("100")) && !d2.member(&bs("10")));
    }

    #[test]
    fn pattern_beyond_position() {
        let set = CohenSet::new(
            2,
            CohenEntry::Pattern {
                word: bs("101"),
                jitter: 0,
            },
            0,
        );
        assert!(!set.member_bits(&bs("1010")));
        assert!(set.member_bits(&bs("10101")));
        assert_eq!(DenseSet::<BitString>::densify(&set, &bs("1")), bs("10101"));
    }

    #[test]
    fn parity_densifier() {
        let set = CohenSet::new(1, CohenEntry::Parity { bit: 1, jitter: 0 }, 0);
        assert_eq!(DenseSet::<BitString>::densify(&set, &bs("")), bs("001"));
        assert_eq!(DenseSet::<BitString>::densify(&set, &bs("1")), bs("10"));
        assert!(set.member_bits(&bs("0001")));
    }

    #[test]
    fn separate_needs_a_difference() {
        let set = ProductSet::new(0, 2, ProductEntry::Separate { a: 0, b: 1 }, 0).unwrap();
        let same = BitTuple(vec![bs("01"), bs("011")]);
        assert!(!set.member(&same));
        let d = set.densify(&same);
        assert!(set.member(&d) && d.leq(&same));
        assert!(ProductSet::new(0, 2, ProductEntry::Separate { a: 1, b: 1 }, 0).is_err());
        assert!(ProductSet::new(
            0,
            2,
            ProductEntry::Coord {
                coord: 2,
                inner: CohenEntry::MinLength { jitter: 0 }
            },
            0
        )
        .is_err());
    }

    #[test]
    fn square_fill_matches_worked_example() {
        let fam = plane_family(&square_spec(2), 0).unwrap();
        let p0 = fam.get(0).unwrap().densify(&PlaneCondition::new());
        assert_eq!(format!("{p0:?}"), "{(0,0)↦0}");
        let p1 = fam.get(1).unwrap().densify(&p0);
        assert_eq!(p1.len(), 4);
    }

    #[test]
    fn restriction_keeps_only_supported_sets() {
        let spec = mixed_plane_spec(16, 3, 0);
        let fam = restrict_plane_family(&spec, 0, &[0, 1]).unwrap();
        for set in fam.iter() {
            let rows = spec[set.id()].rows().unwrap();
            assert!(rows.iter().all(|r| *r < 2));
        }
        assert!(!fam.is_empty());
    }

    fn arb_bits(max: usize) -> impl Strategy<Value = BitString> {
        prop::collection::vec(any::<bool>(), 0..max).prop_map(BitString::from_bits)
    }

    proptest! {
        #[test]
        fn cohen_densifier_contract(s in arb_bits(24), seed in any::<u64>(), jitter in 0u32..5) {
            let fam = cohen_family(&mixed_cohen_spec(24, jitter), seed);
            for set in fam.iter() {
                let d = set.densify(&s);
                prop_assert!(d.leq(&s), "{} moved {:?} to {:?}", set.describe(), s, d);
                prop_assert!(set.member(&d));
                prop_assert_eq!(set.densify(&s), d.clone());
                // open: extensions of members stay members
                let mut longer = d.clone();
                longer.push(seed & 1 == 1);
                prop_assert!(set.member(&longer));
            }
        }

        #[test]
        fn symbolic_view_agrees_on_small_strings(s in arb_bits(24), seed in any::<u64>()) {
            let spec = mixed_cohen_spec(20, 2);
            let explicit = cohen_family(&spec, seed);
            let symbolic = symbolic_cohen_family(&spec, seed);
            let r = RunString::from_bits(&s);
            for (a, b) in explicit.iter().zip(symbolic.iter()) {
                prop_assert_eq!(a.member(&s), b.member(&r));
                prop_assert_eq!(RunString::from_bits(&a.densify(&s)), b.densify(&r));
            }
        }

        #[test]
        fn product_densifier_contract(a in arb_bits(10), b in arb_bits(10), c in arb_bits(10), seed in any::<u64>()) {
            let fam = product_family(&mixed_product_spec(24, 3, 2), 3, seed).unwrap();
            let t = BitTuple(vec![a, b, c]);
            for set in fam.iter() {
                let d = set.densify(&t);
                prop_assert!(d.leq(&t));
                prop_assert!(set.member(&d));
            }
        }

        #[test]
        fn plane_densifier_contract(cells in prop::collection::btree_map((0usize..4, 0usize..6), any::<bool>(), 0..10), seed in any::<u64>()) {
            let p = PlaneCondition::from_cells(cells).unwrap();
            let mut spec = mixed_plane_spec(24, 4, 2);
            spec.push(PlaneEntry::Square { fill: Fill::Random });
            let fam = plane_family(&spec, seed).unwrap();
            for set in fam.iter() {
                let d = set.densify(&p);
                prop_assert!(d.leq(&p));
                prop_assert!(set.member(&d), "{}", set.describe());
            }
        }
    }
}
