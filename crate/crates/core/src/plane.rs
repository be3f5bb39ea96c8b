//! Conditions of the forcing that adds ω Cohen reals: finite partial
//! functions from the plane ω×ω to {0, 1}.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bits::BitString;
use crate::error::{Error, Result};

/// A finite partial function `(row, col) → bit`. Larger is stronger.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct PlaneCondition {
    cells: BTreeMap<(usize, usize), bool>,
}

impl PlaneCondition {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_cells<I: IntoIterator<Item = ((usize, usize), bool)>>(cells: I) -> Result<Self> {
        let mut p = Self::new();
        for ((row, col), bit) in cells {
            p.assign(row, col, bit)?;
        }
        Ok(p)
    }

    pub fn get(&self, row: usize, col: usize) -> Option<bool> {
        self.cells.get(&(row, col)).copied()
    }

    /// Sets a cell, failing if it is already set to the other bit.
    pub fn assign(&mut self, row: usize, col: usize, bit: bool) -> Result<()> {
        match self.cells.insert((row, col), bit) {
            Some(old) if old != bit => {
                self.cells.insert((row, col), old);
                Err(Error::Incompatible { row, col })
            }
            _ => Ok(()),
        }
    }

    /// Sets a cell only if it is undefined.
    pub fn fill(&mut self, row: usize, col: usize, bit: bool) {
        self.cells.entry((row, col)).or_insert(bit);
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> impl Iterator<Item = ((usize, usize), bool)> + '_ {
        self.cells.iter().map(|(k, v)| (*k, *v))
    }

    pub fn row_cells(&self, row: usize) -> impl Iterator<Item = (usize, bool)> + '_ {
        self.cells
            .range((row, 0)..=(row, usize::MAX))
            .map(|((_, col), bit)| (*col, *bit))
    }

    pub fn max_row(&self) -> Option<usize> {
        self.cells.keys().map(|(r, _)| *r).max()
    }

    pub fn max_col_in_row(&self, row: usize) -> Option<usize> {
        self.row_cells(row).map(|(c, _)| c).last()
    }

    /// The longest run of defined cells `(row, 0), (row, 1), …` as a string.
    pub fn row_prefix(&self, row: usize) -> BitString {
        let mut out = BitString::new();
        for (col, bit) in self.row_cells(row) {
            if col != out.len() {
                break;
            }
            out.push(bit);
        }
        out
    }

    /// Writes `bits` onto `row` starting at column 0.
    pub fn write_row(&mut self, row: usize, bits: &BitString) -> Result<()> {
        for (col, bit) in bits.bits().iter().enumerate() {
            self.assign(row, col, *bit)?;
        }
        Ok(())
    }

    /// `self ≤ other`: self's cell map contains other's.
    pub fn leq(&self, other: &PlaneCondition) -> bool {
        other.cells().all(|((r, c), b)| self.get(r, c) == Some(b))
    }

    pub fn first_conflict(&self, other: &PlaneCondition) -> Option<(usize, usize)> {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .cells()
            .find(|((r, c), b)| large.get(*r, *c).is_some_and(|x| x != *b))
            .map(|(k, _)| k)
    }

    pub fn compatible(&self, other: &PlaneCondition) -> bool {
        self.first_conflict(other).is_none()
    }
}

/// Greatest lower bound of two plane conditions: the union of their cell
/// maps, provided they agree on shared cells.
pub fn merge_conditions(p: &PlaneCondition, q: &PlaneCondition) -> Result<PlaneCondition> {
    if let Some((row, col)) = p.first_conflict(q) {
        return Err(Error::Incompatible { row, col });
    }
    let mut out = p.clone();
    out.cells.extend(q.cells());
    Ok(out)
}

/// Splits `p` into its part on rows `< n` and its part on rows `≥ n`.
pub fn factor_plane(p: &PlaneCondition, n: usize) -> (PlaneCondition, PlaneCondition) {
    let mut low = PlaneCondition::new();
    let mut high = PlaneCondition::new();
    for ((r, c), b) in p.cells() {
        let side = if r < n { &mut low } else { &mut high };
        side.cells.insert((r, c), b);
    }
    (low, high)
}

impl fmt::Debug for PlaneCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, ((r, c), b)) in self.cells().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({r},{c})↦{}", u8::from(b))?;
        }
        f.write_str("}")
    }
}

impl Serialize for PlaneCondition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let triples: Vec<[usize; 3]> = self
            .cells()
            .map(|((r, c), b)| [r, c, usize::from(b)])
            .collect();
        triples.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PlaneCondition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let triples = Vec::<[usize; 3]>::deserialize(deserializer)?;
        PlaneCondition::from_cells(triples.into_iter().map(|[r, c, b]| ((r, c), b != 0)))
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cond(cells: &[(usize, usize, u8)]) -> PlaneCondition {
        PlaneCondition::from_cells(cells.iter().map(|&(r, c, b)| ((r, c), b != 0))).unwrap()
    }

    #[test]
    fn merge_with_empty_is_identity() {
        let p = cond(&[(0, 0, 1), (3, 2, 0)]);
        assert_eq!(merge_conditions(&p, &PlaneCondition::new()).unwrap(), p);
    }

    #[test]
    fn merge_single_cell_clash() {
        let err = merge_conditions(&cond(&[(0, 0, 1)]), &cond(&[(0, 0, 0)])).unwrap_err();
        assert_eq!(err, Error::Incompatible { row: 0, col: 0 });
    }

    #[test]
    fn merge_disjoint_supports() {
        let merged = merge_conditions(&cond(&[(0, 0, 1)]), &cond(&[(1, 0, 0)])).unwrap();
        assert_eq!(merged, cond(&[(0, 0, 1), (1, 0, 0)]));
    }

    #[test]
    fn factor_examples() {
        let p = cond(&[(0, 0, 1), (2, 3, 0)]);
        assert_eq!(
            factor_plane(&p, 1),
            (cond(&[(0, 0, 1)]), cond(&[(2, 3, 0)]))
        );
        assert_eq!(factor_plane(&p, 0), (PlaneCondition::new(), p.clone()));
        assert_eq!(factor_plane(&p, 3), (p.clone(), PlaneCondition::new()));
    }

    #[test]
    fn row_prefix_stops_at_gap() {
        let p = cond(&[(1, 0, 1), (1, 1, 0), (1, 3, 1), (0, 0, 1)]);
        assert_eq!(p.row_prefix(1).to_string(), "10");
        assert_eq!(p.row_prefix(2).to_string(), "");
    }

    #[test]
    fn serde_triples() {
        let p = cond(&[(0, 1, 1), (2, 0, 0)]);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, "[[0,1,1],[2,0,0]]");
        assert_eq!(serde_json::from_str::<PlaneCondition>(&json).unwrap(), p);
        assert!(serde_json::from_str::<PlaneCondition>("[[0,0,1],[0,0,0]]").is_err());
    }

    fn arb_condition() -> impl Strategy<Value = PlaneCondition> {
        prop::collection::btree_map((0usize..4, 0usize..4), any::<bool>(), 0..8)
            .prop_map(|cells| PlaneCondition { cells })
    }

    proptest! {
        #[test]
        fn merge_is_greatest_lower_bound(p in arb_condition(), q in arb_condition(), r in arb_condition()) {
            match merge_conditions(&p, &q) {
                Ok(m) => {
                    prop_assert!(m.leq(&p) && m.leq(&q));
                    // any common lower bound is below the merge
                    if r.leq(&p) && r.leq(&q) {
                        prop_assert!(r.leq(&m));
                    }
                }
                Err(_) => {
                    prop_assert!(!p.compatible(&q));
                    prop_assert!(!(r.leq(&p) && r.leq(&q)));
                }
            }
        }

        #[test]
        fn factor_partitions_support(p in arb_condition(), n in 0usize..5) {
            let (low, high) = factor_plane(&p, n);
            prop_assert!(low.cells().all(|((r, _), _)| r < n));
            prop_assert!(high.cells().all(|((r, _), _)| r >= n));
            prop_assert_eq!(low.len() + high.len(), p.len());
            prop_assert_eq!(merge_conditions(&low, &high).unwrap(), p);
        }

        #[test]
        fn leq_is_a_partial_order(p in arb_condition(), q in arb_condition(), r in arb_condition()) {
            prop_assert!(p.leq(&p));
            if p.leq(&q) && q.leq(&p) {
                prop_assert_eq!(&p, &q);
            }
            if p.leq(&q) && q.leq(&r) {
                prop_assert!(p.leq(&r));
            }
        }
    }
}
