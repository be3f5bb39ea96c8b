//! Two generics for a wide countable poset whose joint history codes a
//! payload.
//!
//! Round `n` picks the member of the antichain below `p_n` whose index
//! `2·index(q_n) + z_n` records the other side's position and a payload
//! bit, then picks the member below `q_n` indexed by the new `p_{n+1}`.
//! Each filter alone only sees antichain choices; the pair of them lets the
//! decoder replay the whole history.

use serde::{Deserialize, Serialize};

use crate::bits::{BitString, Payload, PayloadReader};
use crate::dense::DenseFamily;
use crate::error::{Error, Result, Side};
use crate::poset::{ChainFilter, CodingIndex, CountablePoset, WidenessWitness};
use crate::symbolic::{LexNat, RunString, RunTable};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WideStep<E, I> {
    pub round: usize,
    /// `index(q_n)`.
    pub alpha: I,
    pub z: bool,
    /// `2α + z`.
    pub j: I,
    /// `A_{p_n}(j)`.
    pub p_member: E,
    pub p_next: E,
    /// `index(p_{n+1})`.
    pub beta: I,
    /// `A_{q_n}(β)`.
    pub q_member: E,
    pub q_next: E,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WideTrace<E, I> {
    /// `p_0, …, p_N`.
    pub g: Vec<E>,
    /// `q_0, …, q_N`.
    pub h: Vec<E>,
    pub steps: Vec<WideStep<E, I>>,
    pub payload: BitString,
}

/// A decoded round: the conditions at its start and the recovered bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WideTriple<E> {
    pub p: E,
    pub q: E,
    pub z: bool,
}

impl<E: Clone, I> WideTrace<E, I> {
    pub fn triples(&self) -> Vec<WideTriple<E>> {
        self.steps
            .iter()
            .map(|s| WideTriple {
                p: self.g[s.round].clone(),
                q: self.h[s.round].clone(),
                z: s.z,
            })
            .collect()
    }
}

/// Checks the antichain contract at the members the construction uses:
/// `A_q(k) ≤ q`, and `A_q(k)` is incompatible with and distinct from
/// `A_q(other)`.
fn check_member<P: CountablePoset, W: WidenessWitness<P>>(
    poset: &P,
    witness: &W,
    q: &P::Elem,
    k: &P::Index,
    other: &P::Index,
) -> Result<P::Elem> {
    let a = witness.member(poset, q, k);
    if !poset.leq(&a, q) {
        return Err(Error::WitnessViolation(format!(
            "A_q({k:?}) is not below q = {q:?}"
        )));
    }
    let b = witness.member(poset, q, other);
    if a == b || poset.compatible(&a, &b) {
        return Err(Error::WitnessViolation(format!(
            "A_q({k:?}) and A_q({other:?}) are not incompatible"
        )));
    }
    Ok(a)
}

fn start<P: CountablePoset>(poset: &P, family: &DenseFamily<P::Elem>) -> P::Elem {
    let d0 = family.get(0).expect("family is non-empty");
    d0.densify(&poset.element_at(&P::Index::from_u64(0)))
}

pub fn entangle_wide<P, W>(
    poset: &P,
    witness: &W,
    family: &DenseFamily<P::Elem>,
    payload: &Payload,
    steps: usize,
) -> Result<WideTrace<P::Elem, P::Index>>
where
    P: CountablePoset,
    W: WidenessWitness<P>,
{
    if family.len() < steps + 1 {
        return Err(Error::EmptyFamily {
            needed: steps + 1,
            available: family.len(),
        });
    }
    let mut reader = PayloadReader::new(payload);
    let p0 = start(poset, family);
    let mut g = vec![p0.clone()];
    let mut h = vec![p0];
    let mut log = Vec::with_capacity(steps);
    for n in 0..steps {
        let set = family.get(n + 1).expect("checked length");
        let (p, q) = (&g[n], &h[n]);
        let alpha = poset.index_of(q);
        let z = reader.next_bit()?;
        let j = alpha.double_plus(z);
        let p_member = check_member(poset, witness, p, &j, &alpha.double_plus(!z))?;
        let p_next = set.densify(&p_member);
        let beta = poset.index_of(&p_next);
        let other = P::Index::from_u64(u64::from(beta == P::Index::from_u64(0)));
        let q_member = check_member(poset, witness, q, &beta, &other)?;
        let q_next = set.densify(&q_member);
        log.push(WideStep {
            round: n,
            alpha,
            z,
            j,
            p_member,
            p_next: p_next.clone(),
            beta,
            q_member,
            q_next: q_next.clone(),
        });
        g.push(p_next);
        h.push(q_next);
    }
    Ok(WideTrace {
        g,
        h,
        steps: log,
        payload: reader.into_consumed(),
    })
}

/// Replays `count` rounds from the two filters alone.
///
/// Every recovered value is checked against both filters: the `q_n` read
/// from `g` must lie in `h` below the previous `h`-side member, and the
/// `p_{n+1}` read from `h` must lie in `g` below the `g`-side member. Two
/// filters that were not built together fail these checks.
pub fn decode_wide<P, W>(
    poset: &P,
    witness: &W,
    family: &DenseFamily<P::Elem>,
    g: &ChainFilter<'_, P>,
    h: &ChainFilter<'_, P>,
    count: usize,
    budget: usize,
) -> Result<Vec<WideTriple<P::Elem>>>
where
    P: CountablePoset,
    W: WidenessWitness<P>,
{
    if family.is_empty() {
        return Err(Error::EmptyFamily {
            needed: 1,
            available: 0,
        });
    }
    let mut p = start(poset, family);
    let mut q = p.clone();
    let mut last_q_member: Option<P::Elem> = None;
    let mut out = Vec::with_capacity(count);
    for round in 0..count {
        let fail = |detail: String| Error::ConsistencyFailure { round, detail };
        let j = witness
            .locate(poset, &p, g, budget)?
            .ok_or(Error::NoAntichainHit {
                round,
                side: Side::G,
            })?;
        let (alpha, z) = j.halve();
        match &last_q_member {
            None => {
                if alpha != poset.index_of(&q) {
                    return Err(fail(format!(
                        "g codes {alpha:?}, not the index of the shared start"
                    )));
                }
            }
            Some(member) => {
                let recovered = poset.element_at(&alpha);
                if !poset.leq(&recovered, member) {
                    return Err(fail(
                        "q read from g does not extend the h-side antichain member".into(),
                    ));
                }
                if !h.contains(&recovered) {
                    return Err(fail("q read from g is not in h".into()));
                }
                q = recovered;
            }
        }
        out.push(WideTriple {
            p: p.clone(),
            q: q.clone(),
            z,
        });
        let m = witness
            .locate(poset, &q, h, budget)?
            .ok_or(Error::NoAntichainHit {
                round,
                side: Side::H,
            })?;
        let p_next = poset.element_at(&m);
        if !poset.leq(&p_next, &witness.member(poset, &p, &j)) {
            return Err(fail(
                "p read from h does not extend the g-side antichain member".into(),
            ));
        }
        if !g.contains(&p_next) {
            return Err(fail("p read from h is not in g".into()));
        }
        last_q_member = Some(witness.member(poset, &q, &m));
        p = p_next;
    }
    Ok(out)
}

/// A symbolic index: a decimal word or `#k`, the index of table node `k`.
fn nat_ref(table: &mut RunTable, n: &LexNat) -> String {
    match n {
        LexNat::Small(v) => v.to_string(),
        LexNat::Big(s) => format!("#{}", table.intern(s)),
    }
}

fn parse_nat(nodes: &[RunString], text: &str) -> Result<LexNat> {
    match text.strip_prefix('#') {
        Some(id) => id
            .parse::<usize>()
            .ok()
            .and_then(|id| nodes.get(id))
            .map(RunString::lex_index)
            .ok_or_else(|| Error::Parse(format!("bad node reference {text:?}"))),
        None => text
            .parse::<u64>()
            .map(LexNat::from_u64)
            .map_err(|_| Error::Parse(format!("bad index {text:?}"))),
    }
}

/// Serialized wide step; conditions are node numbers of the table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SerialWideStep {
    pub round: usize,
    pub alpha: String,
    pub z: u8,
    pub j: String,
    pub p_member: usize,
    pub p_next: usize,
    pub beta: String,
    pub q_member: usize,
    pub q_next: usize,
}

/// Wide trace on symbolic Cohen conditions, with every string stored once
/// in a shared run table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SerialWideTrace {
    pub nodes: Vec<String>,
    pub g: Vec<usize>,
    pub h: Vec<usize>,
    pub steps: Vec<SerialWideStep>,
    pub payload: BitString,
}

impl SerialWideTrace {
    pub fn encode(trace: &WideTrace<RunString, LexNat>) -> Self {
        let mut t = RunTable::new();
        let g = trace.g.iter().map(|s| t.intern(s)).collect();
        let h = trace.h.iter().map(|s| t.intern(s)).collect();
        let steps = trace
            .steps
            .iter()
            .map(|s| SerialWideStep {
                round: s.round,
                alpha: nat_ref(&mut t, &s.alpha),
                z: u8::from(s.z),
                j: nat_ref(&mut t, &s.j),
                p_member: t.intern(&s.p_member),
                p_next: t.intern(&s.p_next),
                beta: nat_ref(&mut t, &s.beta),
                q_member: t.intern(&s.q_member),
                q_next: t.intern(&s.q_next),
            })
            .collect();
        SerialWideTrace {
            nodes: t.into_nodes(),
            g,
            h,
            steps,
            payload: trace.payload.clone(),
        }
    }

    pub fn decode(&self) -> Result<WideTrace<RunString, LexNat>> {
        let nodes = RunTable::decode(&self.nodes)?;
        let node = |k: usize| {
            nodes
                .get(k)
                .cloned()
                .ok_or_else(|| Error::Parse(format!("node {k} out of range")))
        };
        let chain = |ids: &[usize]| ids.iter().map(|k| node(*k)).collect::<Result<Vec<_>>>();
        let steps = self
            .steps
            .iter()
            .map(|s| {
                Ok(WideStep {
                    round: s.round,
                    alpha: parse_nat(&nodes, &s.alpha)?,
                    z: s.z != 0,
                    j: parse_nat(&nodes, &s.j)?,
                    p_member: node(s.p_member)?,
                    p_next: node(s.p_next)?,
                    beta: parse_nat(&nodes, &s.beta)?,
                    q_member: node(s.q_member)?,
                    q_next: node(s.q_next)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(WideTrace {
            g: chain(&self.g)?,
            h: chain(&self.h)?,
            steps,
            payload: self.payload.clone(),
        })
    }
}
