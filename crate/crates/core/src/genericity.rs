//! Checking that concrete filters meet the sets of a dense family.
//!
//! Filters are always generated objects: a stream's prefixes, a tuple of
//! streams, the finite restrictions of a plane, or the upward closure of a
//! descending chain. Searches look at finitely many filter elements. They
//! find witnesses by bisection on prefix length, which is exact for open
//! sets (every catalog set is open); when the longest candidate is not a
//! member they fall back to an exhaustive scan, so a reported witness is
//! always genuine.

use serde::Serialize;

use crate::bits::{BitStream, BitString};
use crate::dense::{BitTuple, Carrier, DenseFamily, DenseSet};
use crate::error::{Error, Result};
use crate::plane::PlaneCondition;
use crate::poset::{ChainFilter, CountablePoset};

/// A representation of a filter that can be searched for members of a set.
pub trait Filter<C> {
    /// Some filter element in `set`, or `None` if none was found among the
    /// elements the representation examines.
    fn meet(&self, set: &dyn DenseSet<C>) -> Result<Option<C>>;
}

/// Least `t ∈ 0..=max` with `test(t)`, assuming `test(max)` and
/// monotonicity; returns some `t` with `test(t)` regardless.
fn bisect(max: usize, test: impl Fn(usize) -> bool) -> usize {
    let (mut lo, mut hi) = (0usize, max);
    if test(0) {
        return 0;
    }
    // invariant: !test(lo), test(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if test(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

fn search<C>(max: usize, candidate: impl Fn(usize) -> C, set: &dyn DenseSet<C>) -> Option<C> {
    if set.member(&candidate(max)) {
        let t = bisect(max, |t| set.member(&candidate(t)));
        return Some(candidate(t));
    }
    (0..max).map(&candidate).find(|c| set.member(c))
}

/// The prefix filter of a stream, examining prefixes of length `≤ scan`.
pub struct StreamFilter<'a> {
    pub stream: &'a BitStream,
    pub scan: usize,
}

impl<'a> StreamFilter<'a> {
    pub fn new(stream: &'a BitStream, scan: usize) -> Self {
        Self { stream, scan }
    }
}

impl Filter<BitString> for StreamFilter<'_> {
    fn meet(&self, set: &dyn DenseSet<BitString>) -> Result<Option<BitString>> {
        let full = self.stream.take(self.scan);
        Ok(search(self.scan, |t| full.truncated(t), set))
    }
}

/// The product filter of several streams, examining tuples of equal-length
/// prefixes up to `scan`.
pub struct ProductFilter<'a> {
    pub streams: &'a [BitStream],
    pub scan: usize,
}

impl<'a> ProductFilter<'a> {
    pub fn new(streams: &'a [BitStream], scan: usize) -> Self {
        Self { streams, scan }
    }
}

impl Filter<BitTuple> for ProductFilter<'_> {
    fn meet(&self, set: &dyn DenseSet<BitTuple>) -> Result<Option<BitTuple>> {
        let full: Vec<BitString> = self.streams.iter().map(|s| s.take(self.scan)).collect();
        let candidate = |t: usize| BitTuple(full.iter().map(|s| s.truncated(t)).collect());
        Ok(search(self.scan, candidate, set))
    }
}

/// Read access to a total function ω×ω → 2.
pub trait PlaneView {
    fn cell(&self, row: usize, col: usize) -> bool;

    /// The restriction to the square `[0, t) × [0, t)`.
    fn square(&self, t: usize) -> PlaneCondition {
        PlaneCondition::from_cells(
            (0..t).flat_map(|r| (0..t).map(move |c| ((r, c), self.cell(r, c)))),
        )
        .expect("a function restricts to a consistent condition")
    }
}

/// The filter of finite restrictions of a plane, examining square
/// restrictions of side `≤ scan`.
pub struct PlaneFilter<'a, V: PlaneView> {
    pub plane: &'a V,
    pub scan: usize,
}

impl<'a, V: PlaneView> PlaneFilter<'a, V> {
    pub fn new(plane: &'a V, scan: usize) -> Self {
        Self { plane, scan }
    }
}

impl<V: PlaneView> Filter<PlaneCondition> for PlaneFilter<'_, V> {
    fn meet(&self, set: &dyn DenseSet<PlaneCondition>) -> Result<Option<PlaneCondition>> {
        let full = self.plane.square(self.scan);
        let candidate = |t: usize| {
            PlaneCondition::from_cells(full.cells().filter(|((r, c), _)| *r < t && *c < t))
                .expect("restriction of a condition")
        };
        Ok(search(self.scan, candidate, set))
    }
}

/// Chain filters examine the chain elements themselves.
impl<P: CountablePoset> Filter<P::Elem> for ChainFilter<'_, P> {
    fn meet(&self, set: &dyn DenseSet<P::Elem>) -> Result<Option<P::Elem>> {
        match self.searched().iter().find(|c| set.member(c)) {
            Some(c) => Ok(Some(c.clone())),
            None if self.complete() => Ok(None),
            None => Err(Error::BudgetExceeded {
                index: set.id(),
                budget: self.budget,
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SetResult<C> {
    pub id: usize,
    pub met: bool,
    pub witness: Option<C>,
}

/// Per-set outcome of a genericity check up to a horizon.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenericityReport<C> {
    pub horizon: usize,
    pub results: Vec<SetResult<C>>,
}

impl<C> GenericityReport<C> {
    pub fn all_met(&self) -> bool {
        self.results.iter().all(|r| r.met)
    }

    pub fn unmet(&self) -> Vec<usize> {
        self.results
            .iter()
            .filter(|r| !r.met)
            .map(|r| r.id)
            .collect()
    }

    pub fn met(&self, id: usize) -> Option<bool> {
        self.results.iter().find(|r| r.id == id).map(|r| r.met)
    }
}

/// Reports, for every set `D_n` of the family with `n < horizon`, whether
/// the filter meets it, with a witness.
pub fn meets_family<C, F: Filter<C>>(
    filter: &F,
    family: &DenseFamily<C>,
    horizon: usize,
) -> Result<GenericityReport<C>> {
    if family.is_contiguous() && horizon > family.len() {
        return Err(Error::EmptyFamily {
            needed: horizon,
            available: family.len(),
        });
    }
    let results = family
        .iter()
        .filter(|set| set.id() < horizon)
        .map(|set| {
            let witness = filter.meet(set)?;
            debug_assert!(witness.as_ref().is_none_or(|w| set.member(w)));
            Ok(SetResult {
                id: set.id(),
                met: witness.is_some(),
                witness,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GenericityReport { horizon, results })
}

/// Checks that the product of the streams' filters meets every set of a
/// family on the matching finite product.
pub fn mutual_genericity_check(
    streams: &[BitStream],
    family: &DenseFamily<BitTuple>,
    horizon: usize,
    scan: usize,
) -> Result<GenericityReport<BitTuple>> {
    match family.carrier() {
        Carrier::Product { arity } if *arity == streams.len() => {}
        Carrier::Product { arity } => {
            return Err(Error::BadArity {
                expected: streams.len(),
                found: *arity,
            })
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "mutual genericity needs a product family, got {other:?}"
            )))
        }
    }
    meets_family(&ProductFilter::new(streams, scan), family, horizon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{cohen_family, len_spec, product_family, ProductEntry};
    use crate::dense::FnSet;
    use std::sync::Arc;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn all_zero_stream_misses_a_one() {
        let family = DenseFamily::new(
            Carrier::Cohen,
            vec![Arc::new(FnSet::new(
                0,
                |s: &BitString| s.find_one(0).is_some(),
                |s: &BitString| {
                    let mut t = s.clone();
                    t.push(true);
                    t
                },
            )) as Arc<dyn DenseSet<BitString>>],
        );
        let zeros = BitStream::constant(false);
        let report = meets_family(&StreamFilter::new(&zeros, 256), &family, 1).unwrap();
        assert_eq!(report.met(0), Some(false));
        assert_eq!(report.results[0].witness, None);
    }

    #[test]
    fn every_stream_meets_length_sets() {
        let family = cohen_family(&len_spec(16), 0);
        let stream = BitStream::seeded(99, 0);
        let report = meets_family(&StreamFilter::new(&stream, 64), &family, 16).unwrap();
        for r in &report.results {
            assert!(r.met);
            assert_eq!(r.witness.as_ref().unwrap(), &stream.take(r.id + 1));
        }
    }

    #[test]
    fn horizon_beyond_family_is_rejected() {
        let family = cohen_family(&len_spec(2), 0);
        let stream = BitStream::constant(true);
        assert!(matches!(
            meets_family(&StreamFilter::new(&stream, 8), &family, 3),
            Err(Error::EmptyFamily {
                needed: 3,
                available: 2
            })
        ));
    }

    #[test]
    fn non_open_sets_fall_back_to_scanning() {
        // exactly length 3: not open
        let family = DenseFamily::new(
            Carrier::Cohen,
            vec![Arc::new(FnSet::new(
                0,
                |s: &BitString| s.len() == 3,
                |s: &BitString| s.clone(),
            )) as Arc<dyn DenseSet<BitString>>],
        );
        let stream = BitStream::zero_tail(bs("101"));
        let report = meets_family(&StreamFilter::new(&stream, 10), &family, 1).unwrap();
        assert_eq!(report.results[0].witness, Some(bs("101")));
    }

    #[test]
    fn diagonal_pair_never_separates() {
        let family = product_family(&[ProductEntry::Separate { a: 0, b: 1 }], 2, 0).unwrap();
        let c = BitStream::seeded(3, 1);
        let report = mutual_genericity_check(&[c.clone(), c.clone()], &family, 1, 200).unwrap();
        assert_eq!(report.met(0), Some(false));
        let d = BitStream::seeded(4, 1);
        assert!(mutual_genericity_check(&[c, d], &family, 1, 200)
            .unwrap()
            .all_met());
    }

    #[test]
    fn empty_product_is_vacuous() {
        let family = product_family(&[], 0, 0).unwrap();
        let report = mutual_genericity_check(&[], &family, 0, 10).unwrap();
        assert!(report.all_met() && report.results.is_empty());
    }

    #[test]
    fn arity_mismatch() {
        let family = product_family(&[], 2, 0).unwrap();
        assert!(matches!(
            mutual_genericity_check(&[BitStream::constant(false)], &family, 0, 4),
            Err(Error::BadArity { .. })
        ));
    }

    #[test]
    fn larger_scan_never_loses_a_hit() {
        let family = cohen_family(&crate::catalog::mixed_cohen_spec(20, 0), 0);
        let stream = BitStream::seeded(5, 2);
        let mut previous = [false; 20];
        for scan in [0, 4, 16, 64, 256] {
            let report = meets_family(&StreamFilter::new(&stream, scan), &family, 20).unwrap();
            for r in &report.results {
                assert!(r.met || !previous[r.id]);
                previous[r.id] = r.met;
            }
        }
        assert!(previous.iter().all(|m| *m));
    }
}
