//! Bounding a chain of Cohen extensions by a single generic plane.
//!
//! The input is a sequence of mutually generic rows `b_0, …, b_{m−1}`. Each
//! stage strengthens a finite plane condition into the next dense set while
//! staying compatible with the rows already finalized; row `n` is then
//! finalized as `b_n` with the finitely many cells the condition dictates.

mod builder;
mod chain;
mod verify;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bits::{BitStream, BitString, TailRule};
use crate::genericity::PlaneView;
use crate::plane::PlaneCondition;

pub use builder::build_mutually_generic_sequence;
pub use chain::{bound_chain, Attempt, BoundRun, ChainTrace, StageRecord};
pub use verify::{verify_bound, BoundReport, CheckResult};

/// Default bits for plane cells nothing else determines.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum PlaneFill {
    #[default]
    Zero,
    /// Row `r` is ChaCha8 stream `r` under `seed`.
    Seeded { seed: u64 },
}

impl PlaneFill {
    pub fn row(&self, row: usize) -> TailRule {
        match self {
            PlaneFill::Zero => TailRule::zero(),
            PlaneFill::Seeded { seed } => TailRule::seeded(*seed, row as u64),
        }
    }
}

/// Finitely many `column → bit` overrides of a row.
pub type Patch = BTreeMap<usize, bool>;

/// Patches serialize as `[[col, bit], …]` so they survive formats whose map
/// keys must be strings.
pub(crate) mod patch_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::Patch;

    fn pairs(p: &Patch) -> Vec<(usize, u8)> {
        p.iter().map(|(c, b)| (*c, u8::from(*b))).collect()
    }

    fn unpairs(v: Vec<(usize, u8)>) -> Patch {
        v.into_iter().map(|(c, b)| (c, b != 0)).collect()
    }

    pub fn serialize<S: Serializer>(p: &Patch, s: S) -> Result<S::Ok, S::Error> {
        pairs(p).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Patch, D::Error> {
        Vec::deserialize(d).map(unpairs)
    }

    pub mod list {
        use super::*;

        pub fn serialize<S: Serializer>(ps: &[Patch], s: S) -> Result<S::Ok, S::Error> {
            ps.iter().map(pairs).collect::<Vec<_>>().serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Patch>, D::Error> {
            Vec::<Vec<(usize, u8)>>::deserialize(d).map(|v| v.into_iter().map(unpairs).collect())
        }
    }
}

/// A stream equal to `base` except on the finitely many columns of `patch`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatchedStream {
    pub base: BitStream,
    #[serde(with = "patch_serde")]
    pub patch: Patch,
}

impl PatchedStream {
    pub fn new(base: BitStream, patch: Patch) -> Self {
        Self { base, patch }
    }

    pub fn bit(&self, i: usize) -> bool {
        self.patch
            .get(&i)
            .copied()
            .unwrap_or_else(|| self.base.bit(i))
    }

    pub fn take(&self, n: usize) -> BitString {
        let mut out = self.base.take(n);
        for (col, bit) in self.patch.range(..n) {
            out.set(*col, *bit);
        }
        out
    }

    /// Columns where the patch actually changes the base.
    pub fn changed(&self) -> Vec<usize> {
        self.patch
            .iter()
            .filter(|(c, b)| self.base.bit(**c) != **b)
            .map(|(c, _)| *c)
            .collect()
    }
}

/// The plane a chain bound produces: finalized rows `d_0, …, d_{m−1}`, and
/// above them the fill rule overridden by the last commitment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundPlane {
    pub rows: Vec<PatchedStream>,
    pub upper: PlaneCondition,
    pub fill: PlaneFill,
}

impl BoundPlane {
    fn row_bits(&self, row: usize, n: usize) -> BitString {
        match self.rows.get(row) {
            Some(d) => d.take(n),
            None => {
                let mut out = BitString::from_bits(self.fill.row(row).bits(0, n));
                for (col, bit) in self.upper.row_cells(row).take_while(|(c, _)| *c < n) {
                    out.set(col, bit);
                }
                out
            }
        }
    }
}

impl PlaneView for BoundPlane {
    fn cell(&self, row: usize, col: usize) -> bool {
        match self.rows.get(row) {
            Some(d) => d.bit(col),
            None => self
                .upper
                .get(row, col)
                .unwrap_or_else(|| self.fill.row(row).bit(col)),
        }
    }

    fn square(&self, t: usize) -> PlaneCondition {
        let cells = (0..t).flat_map(|r| {
            let bits = self.row_bits(r, t);
            (0..t).map(move |c| ((r, c), bits.get(c).expect("row has t bits")))
        });
        PlaneCondition::from_cells(cells).expect("a function restricts to a consistent condition")
    }
}
