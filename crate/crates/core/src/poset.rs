//! Enumerated countable posets, indexed antichain witnesses of wideness,
//! and descending-chain filters.

use std::fmt::Debug;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::symbolic::{LexNat, RunString};

/// Natural numbers used as enumeration and antichain indices. Coding needs
/// `2α + b` and its inverse.
pub trait CodingIndex: Clone + Eq + Debug {
    fn from_u64(v: u64) -> Self;
    fn double_plus(&self, bit: bool) -> Self;
    fn halve(&self) -> (Self, bool);
}

impl CodingIndex for u64 {
    fn from_u64(v: u64) -> Self {
        v
    }

    fn double_plus(&self, bit: bool) -> Self {
        self.checked_mul(2)
            .and_then(|x| x.checked_add(u64::from(bit)))
            .expect("antichain index overflows u64")
    }

    fn halve(&self) -> (Self, bool) {
        (self / 2, self & 1 == 1)
    }
}

impl CodingIndex for LexNat {
    fn from_u64(v: u64) -> Self {
        LexNat::from_u64(v)
    }

    fn double_plus(&self, bit: bool) -> Self {
        LexNat::double_plus(self, bit)
    }

    fn halve(&self) -> (Self, bool) {
        LexNat::halve(self)
    }
}

/// A poset together with an enumeration of order type ω.
pub trait CountablePoset {
    type Elem: Clone + PartialEq + Debug;
    type Index: CodingIndex;

    fn index_of(&self, e: &Self::Elem) -> Self::Index;
    fn element_at(&self, index: &Self::Index) -> Self::Elem;
    /// `a ≤ b`: `a` is at least as strong as `b`.
    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    fn compatible(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    /// A pseudo-random condition below `q`.
    fn sample_below(&self, q: &Self::Elem, rng: &mut dyn RngCore) -> Self::Elem;
}

/// The filter generated by a descending chain: `a` belongs to it when some
/// chain element among the first `budget + 1` lies below `a`.
pub struct ChainFilter<'a, P: CountablePoset> {
    pub poset: &'a P,
    pub chain: &'a [P::Elem],
    pub budget: usize,
}

impl<'a, P: CountablePoset> ChainFilter<'a, P> {
    pub fn new(poset: &'a P, chain: &'a [P::Elem], budget: usize) -> Self {
        Self {
            poset,
            chain,
            budget,
        }
    }

    pub fn searched(&self) -> &'a [P::Elem] {
        &self.chain[..self.chain.len().min(self.budget + 1)]
    }

    /// Whether the whole chain lies within the budget.
    pub fn complete(&self) -> bool {
        self.budget + 1 >= self.chain.len()
    }

    pub fn contains(&self, a: &P::Elem) -> bool {
        self.searched().iter().any(|c| self.poset.leq(c, a))
    }
}

/// An indexed antichain `A_q` below every condition `q`.
///
/// Contract: `A_q(k) ≤ q`, members with distinct indices are incompatible,
/// and `k ↦ A_q(k)` is injective.
pub trait WidenessWitness<P: CountablePoset> {
    fn member(&self, poset: &P, q: &P::Elem, k: &P::Index) -> P::Elem;

    /// The index of the member of `A_q` that the filter contains, if any.
    /// The default scans `k = 0..=budget` and rejects a filter meeting two
    /// members.
    fn locate(
        &self,
        poset: &P,
        q: &P::Elem,
        filter: &ChainFilter<'_, P>,
        budget: usize,
    ) -> Result<Option<P::Index>> {
        let mut hit = None;
        for k in 0..=budget as u64 {
            let k = P::Index::from_u64(k);
            if filter.contains(&self.member(poset, q, &k)) {
                if let Some(prev) = hit {
                    return Err(Error::WitnessViolation(format!(
                        "filter meets two antichain members {prev:?} and {k:?}"
                    )));
                }
                hit = Some(k);
            }
        }
        Ok(hit)
    }
}

/// Outcome of a successful witness validation.
#[derive(Debug, Clone)]
pub struct WidenessReport<E> {
    pub members_checked: usize,
    /// Each sampled extension of `q` with the index of a compatible member.
    pub samples: Vec<(E, u64)>,
}

/// Checks `A_q(k) ≤ q`, injectivity and pairwise incompatibility for
/// `k < m`, then spot-checks maximality: each of `samples` pseudo-random
/// extensions of `q` must be compatible with some `A_q(k)`, `k < search_limit`.
pub fn validate_wideness_witness<P, W>(
    poset: &P,
    witness: &W,
    q: &P::Elem,
    m: usize,
    samples: usize,
    seed: u64,
    search_limit: usize,
) -> Result<WidenessReport<P::Elem>>
where
    P: CountablePoset,
    W: WidenessWitness<P>,
{
    if m == 0 || samples == 0 {
        return Err(Error::InvalidArgument(
            "m and samples must be at least 1".into(),
        ));
    }
    let members: Vec<P::Elem> = (0..m as u64)
        .map(|k| witness.member(poset, q, &P::Index::from_u64(k)))
        .collect();
    for (k, a) in members.iter().enumerate() {
        if !poset.leq(a, q) {
            return Err(Error::WitnessViolation(format!(
                "A_q({k}) = {a:?} is not below q"
            )));
        }
        for (j, b) in members[..k].iter().enumerate() {
            if a == b {
                return Err(Error::WitnessViolation(format!(
                    "injectivity: A_q({j}) = A_q({k}) = {a:?}"
                )));
            }
            if poset.compatible(a, b) {
                return Err(Error::WitnessViolation(format!(
                    "A_q({j}) and A_q({k}) are compatible"
                )));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found = Vec::with_capacity(samples);
    for s in 0..samples {
        let r = poset.sample_below(q, &mut rng);
        let hit = (0..search_limit as u64)
            .find(|k| poset.compatible(&r, &witness.member(poset, q, &P::Index::from_u64(*k))))
            .ok_or(Error::BudgetExceeded {
                index: s,
                budget: search_limit,
            })?;
        found.push((r, hit));
    }
    Ok(WidenessReport {
        members_checked: m,
        samples: found,
    })
}

/// Cohen forcing with the length-lexicographic enumeration
/// `index(s) = 2^|s| − 1 + value(s)`, on symbolic strings.
#[derive(Debug, Clone, Copy, Default)]
pub struct LengthLexCohen;

impl CountablePoset for LengthLexCohen {
    type Elem = RunString;
    type Index = LexNat;

    fn index_of(&self, e: &RunString) -> LexNat {
        e.lex_index()
    }

    fn element_at(&self, index: &LexNat) -> RunString {
        RunString::from_lex_index(index)
    }

    fn leq(&self, a: &RunString, b: &RunString) -> bool {
        a.leq(b)
    }

    fn compatible(&self, a: &RunString, b: &RunString) -> bool {
        a.compatible(b)
    }

    fn sample_below(&self, q: &RunString, rng: &mut dyn RngCore) -> RunString {
        let n = rng.gen_range(0..8);
        let bits = (0..n).map(|_| rng.gen::<bool>()).collect();
        q.with_bits(&crate::bits::BitString::from_bits(bits))
    }
}

/// `A_q(k) = q ⌢ 0^k ⌢ 1`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroRunAntichain;

impl WidenessWitness<LengthLexCohen> for ZeroRunAntichain {
    fn member(&self, _: &LengthLexCohen, q: &RunString, k: &LexNat) -> RunString {
        q.with_run(false, k.clone()).with_bit(true)
    }

    /// Reads the zero run following `q` in the chain, which works for
    /// indices far beyond any scan.
    fn locate(
        &self,
        poset: &LengthLexCohen,
        q: &RunString,
        filter: &ChainFilter<'_, LengthLexCohen>,
        _budget: usize,
    ) -> Result<Option<LexNat>> {
        for c in filter.searched() {
            if let Some(k) = c.zero_run_after(q) {
                debug_assert!(filter.contains(&self.member(poset, q, &k)));
                return Ok(Some(k));
            }
        }
        Ok(None)
    }
}

/// Forces the generic scanning `locate` of a wrapped witness.
#[derive(Debug, Clone, Copy, Default)]
pub struct ScanningWitness<W>(pub W);

impl<P: CountablePoset, W: WidenessWitness<P>> WidenessWitness<P> for ScanningWitness<W> {
    fn member(&self, poset: &P, q: &P::Elem, k: &P::Index) -> P::Elem {
        self.0.member(poset, q, k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(s: &str) -> RunString {
        RunString::from_bits(&s.parse().unwrap())
    }

    /// A deliberately broken witness: members 0 and 1 coincide.
    struct Duplicating;

    impl WidenessWitness<LengthLexCohen> for Duplicating {
        fn member(&self, p: &LengthLexCohen, q: &RunString, k: &LexNat) -> RunString {
            let k = if k.is_zero() {
                LexNat::Small(1)
            } else {
                k.clone()
            };
            ZeroRunAntichain.member(p, q, &k)
        }
    }

    #[test]
    fn canonical_witness_at_root() {
        let report =
            validate_wideness_witness(&LengthLexCohen, &ZeroRunAntichain, &rs(""), 4, 16, 7, 64)
                .unwrap();
        assert_eq!(report.members_checked, 4);
        let members: Vec<String> = (0..4)
            .map(|k| {
                format!(
                    "{:?}",
                    ZeroRunAntichain.member(&LengthLexCohen, &rs(""), &LexNat::Small(k))
                )
            })
            .collect();
        assert_eq!(members, ["\"1\"", "\"01\"", "\"001\"", "\"0001\""]);
    }

    #[test]
    fn duplicate_member_is_rejected() {
        let err = validate_wideness_witness(&LengthLexCohen, &Duplicating, &rs("1"), 3, 1, 0, 8)
            .unwrap_err();
        assert!(
            matches!(err, Error::WitnessViolation(ref s) if s.starts_with("injectivity")),
            "{err}"
        );
    }

    #[test]
    fn sample_compatibility_is_found() {
        let r = rs("0001");
        let hit = (0..16)
            .find(|k| {
                r.compatible(&ZeroRunAntichain.member(&LengthLexCohen, &rs(""), &LexNat::Small(*k)))
            })
            .unwrap();
        assert_eq!(hit, 3);
        // a string of zeros longer than the search limit is not decided
        let zeros = rs("000000000000");
        assert!((0..8).all(|k| !zeros.compatible(&ZeroRunAntichain.member(
            &LengthLexCohen,
            &rs(""),
            &LexNat::Small(k)
        ))));
    }

    #[test]
    fn scanning_and_direct_locate_agree() {
        let chain = vec![rs("0"), rs("00001"), rs("0000101")];
        let filter = ChainFilter::new(&LengthLexCohen, &chain, 8);
        let direct = ZeroRunAntichain
            .locate(&LengthLexCohen, &rs("0"), &filter, 8)
            .unwrap();
        let scanned = ScanningWitness(ZeroRunAntichain)
            .locate(&LengthLexCohen, &rs("0"), &filter, 8)
            .unwrap();
        assert_eq!(direct, Some(LexNat::Small(3)));
        assert_eq!(scanned, direct);
        let short = ScanningWitness(ZeroRunAntichain)
            .locate(&LengthLexCohen, &rs("0"), &filter, 2)
            .unwrap();
        assert_eq!(short, None);
    }

    #[test]
    fn chain_filter_budget() {
        let chain = vec![rs("0"), rs("01"), rs("011")];
        let f = ChainFilter::new(&LengthLexCohen, &chain, 0);
        assert!(f.contains(&rs("0")) && !f.contains(&rs("01")) && !f.complete());
        let f = ChainFilter::new(&LengthLexCohen, &chain, 5);
        assert!(f.contains(&rs("01")) && f.complete());
    }

    #[test]
    fn u64_coding_index() {
        assert_eq!(7u64.double_plus(true), 15);
        assert_eq!(15u64.halve(), (7, true));
    }
}
