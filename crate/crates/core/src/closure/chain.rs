use serde::{Deserialize, Serialize};

use crate::bits::BitStream;
use crate::dense::DenseFamily;
use crate::error::{Error, Result};
use crate::plane::{merge_conditions, PlaneCondition};

use super::{BoundPlane, Patch, PatchedStream, PlaneFill};

/// One densifier call of the reveal-and-retry search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attempt {
    /// Columns `< reveal` of the finalized rows were merged in.
    pub reveal: usize,
    pub revealed_cells: usize,
    /// First cell (by column, then row) where the output contradicted a
    /// finalized row.
    pub disagreement: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: usize,
    /// Number of rows finalized before the stage.
    pub finalized: usize,
    pub attempts: Vec<Attempt>,
    pub retries: usize,
    pub commitment: PlaneCondition,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainTrace {
    pub rows: usize,
    pub retry_budget: usize,
    pub fill: PlaneFill,
    pub stages: Vec<StageRecord>,
    /// Row `k` of the plane is `b_k` overridden by `patches[k]`.
    #[serde(with = "super::patch_serde::list")]
    pub patches: Vec<Patch>,
}

impl ChainTrace {
    pub fn commitments(&self) -> impl Iterator<Item = &PlaneCondition> {
        self.stages.iter().map(|s| &s.commitment)
    }

    pub fn max_retries(&self) -> usize {
        self.stages.iter().map(|s| s.retries).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone)]
pub struct BoundRun {
    pub plane: BoundPlane,
    pub trace: ChainTrace,
}

fn first_disagreement(p: &PlaneCondition, rows: &[PatchedStream]) -> Option<(usize, usize)> {
    p.cells()
        .filter(|((r, c), bit)| rows.get(*r).is_some_and(|d| d.bit(*c) != *bit))
        .map(|(k, _)| k)
        .min_by_key(|(r, c)| (*c, *r))
}

/// Runs one stage per set of the family. Stage `n` looks for an extension of
/// the previous commitment inside `D_n` that agrees with the finalized rows,
/// revealing more of them after every miss; for `n < b.len()` row `n` is
/// then finalized as `b_n` overridden by the commitment's row-`n` cells.
pub fn bound_chain(
    b: &[BitStream],
    family: &DenseFamily<PlaneCondition>,
    retry_budget: usize,
    fill: PlaneFill,
) -> Result<BoundRun> {
    let m = b.len();
    if family.len() < m {
        return Err(Error::EmptyFamily {
            needed: m,
            available: family.len(),
        });
    }
    let mut rows: Vec<PatchedStream> = Vec::with_capacity(m);
    let mut stages = Vec::with_capacity(family.len());
    let mut prev = PlaneCondition::new();
    for (n, set) in family.iter().enumerate() {
        let finalized = n.min(m);
        if let Some((row, col)) = first_disagreement(&prev, &rows) {
            return Err(Error::IncompatibleCommitment { stage: n, row, col });
        }
        let mut attempts = Vec::new();
        let mut reveal = 0;
        let p = loop {
            let revealed = PlaneCondition::from_cells(
                rows.iter()
                    .enumerate()
                    .flat_map(|(r, d)| (0..reveal).map(move |c| ((r, c), d.bit(c)))),
            )
            .expect("rows are functions");
            let base = merge_conditions(&prev, &revealed).map_err(|e| match e {
                Error::Incompatible { row, col } => {
                    Error::IncompatibleCommitment { stage: n, row, col }
                }
                other => other,
            })?;
            let out = set.densify(&base);
            let disagreement = first_disagreement(&out, &rows);
            attempts.push(Attempt {
                reveal,
                revealed_cells: revealed.len(),
                disagreement,
            });
            match disagreement {
                None => break out,
                Some(_) if attempts.len() > retry_budget => {
                    return Err(Error::RetryBudgetExceeded {
                        stage: n,
                        budget: retry_budget,
                    })
                }
                Some((_, col)) => reveal = reveal.max(col + 1),
            }
        };
        if n < m {
            rows.push(PatchedStream::new(b[n].clone(), p.row_cells(n).collect()));
        }
        stages.push(StageRecord {
            stage: n,
            finalized,
            retries: attempts.len() - 1,
            attempts,
            commitment: p.clone(),
        });
        prev = p;
    }
    let patches = rows.iter().map(|d| d.patch.clone()).collect();
    Ok(BoundRun {
        plane: BoundPlane {
            rows,
            upper: prev,
            fill,
        },
        trace: ChainTrace {
            rows: m,
            retry_budget,
            fill,
            stages,
            patches,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::{BitString, TailRule};
    use crate::catalog::{plane_family, square_spec};
    use crate::genericity::PlaneView;

    fn periodic(word: &str) -> BitStream {
        // long enough for every test here
        let bits: BitString = word.repeat(32).parse().unwrap();
        BitStream::new(bits, TailRule::zero())
    }

    fn cells(list: &[((usize, usize), u8)]) -> PlaneCondition {
        PlaneCondition::from_cells(list.iter().map(|(k, b)| (*k, *b == 1))).unwrap()
    }

    #[test]
    fn two_row_square_example() {
        let fam = plane_family(&square_spec(2), 0).unwrap();
        let b = [periodic("1"), periodic("10")];
        let run = bound_chain(&b, &fam, 4, PlaneFill::Zero).unwrap();
        let t = &run.trace;
        assert_eq!(t.stages[0].commitment, cells(&[((0, 0), 0)]));
        assert_eq!(
            t.stages[1].commitment,
            cells(&[((0, 0), 0), ((0, 1), 1), ((1, 0), 0), ((1, 1), 0)])
        );
        assert_eq!(run.plane.rows[0].take(4).to_string(), "0111");
        assert_eq!(run.plane.rows[1].take(4).to_string(), "0010");
        assert_eq!(t.patches[0].keys().copied().collect::<Vec<_>>(), [0]);
        assert_eq!(t.patches[1].keys().copied().collect::<Vec<_>>(), [0, 1]);
        assert_eq!(t.stages[1].attempts[1].reveal, 2);
        assert_eq!(t.max_retries(), 1);
    }

    #[test]
    fn no_rows_is_a_plain_fold() {
        let fam = plane_family(&square_spec(3), 0).unwrap();
        let run = bound_chain(&[], &fam, 1, PlaneFill::Zero).unwrap();
        assert!(run.trace.patches.is_empty());
        assert_eq!(run.trace.max_retries(), 0);
        assert_eq!(run.plane.upper.len(), 9);
        assert!(!run.plane.cell(2, 2));
    }

    #[test]
    fn retry_budget_is_enforced() {
        let fam = plane_family(&square_spec(2), 0).unwrap();
        let b = [periodic("1"), periodic("10")];
        assert_eq!(
            bound_chain(&b, &fam, 0, PlaneFill::Zero).unwrap_err(),
            Error::RetryBudgetExceeded {
                stage: 1,
                budget: 0
            }
        );
    }

    #[test]
    fn non_generic_row_exhausts_the_budget() {
        use crate::dense::{Carrier, DenseSet, FnSet};
        use std::sync::Arc;
        // D_1 wants a 0 on row 0 somewhere past column 0; row 0 is all ones
        let any = Arc::new(FnSet::new(
            0,
            |_: &PlaneCondition| true,
            |p: &PlaneCondition| p.clone(),
        ));
        let zero = Arc::new(FnSet::new(
            1,
            |p: &PlaneCondition| p.row_cells(0).any(|(c, b)| c > 0 && !b),
            |p: &PlaneCondition| {
                let mut q = p.clone();
                q.fill(0, p.max_col_in_row(0).map_or(1, |c| c + 1), false);
                q
            },
        ));
        let fam = DenseFamily::new(
            Carrier::Plane,
            vec![
                any as Arc<dyn DenseSet<PlaneCondition>>,
                zero as Arc<dyn DenseSet<PlaneCondition>>,
            ],
        );
        let b = [BitStream::constant(true)];
        assert_eq!(
            bound_chain(&b, &fam, 3, PlaneFill::Zero).unwrap_err(),
            Error::RetryBudgetExceeded {
                stage: 1,
                budget: 3
            }
        );
    }
}
