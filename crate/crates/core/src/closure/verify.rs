use serde::Serialize;

use crate::bits::BitStream;
use crate::dense::DenseFamily;
use crate::genericity::{meets_family, PlaneFilter, PlaneView};
use crate::plane::PlaneCondition;

use super::{BoundPlane, ChainTrace};

const MAX_LISTED: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub checks: Vec<CheckResult>,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn check(name: &'static str, failures: impl Iterator<Item = String>) -> CheckResult {
    let failures: Vec<String> = failures.take(MAX_LISTED).collect();
    CheckResult {
        name,
        passed: failures.is_empty(),
        failures,
    }
}

/// Re-checks a chain bound from its outputs: membership of every
/// commitment, the descending chain, agreement of the plane with every
/// commitment, rows equal to their bases outside the recorded patches, and
/// genericity of the plane up to `horizon` (squares of side `≤ scan`).
pub fn verify_bound(
    d: &BoundPlane,
    b: &[BitStream],
    trace: &ChainTrace,
    family: &DenseFamily<PlaneCondition>,
    horizon: usize,
    scan: usize,
) -> BoundReport {
    let stages = &trace.stages;
    let membership = check(
        "membership",
        stages.iter().filter_map(|s| match family.get(s.stage) {
            Some(set) if set.member(&s.commitment) => None,
            Some(_) => Some(format!("p_{} is not in D_{}", s.stage, s.stage)),
            None => Some(format!("family has no set {}", s.stage)),
        }),
    );
    let chain = check(
        "descending",
        stages
            .windows(2)
            .filter(|&w| !w[1].commitment.leq(&w[0].commitment))
            .map(|w| format!("p_{} does not extend p_{}", w[1].stage, w[0].stage)),
    );
    let agreement = check(
        "agreement",
        stages.iter().flat_map(|s| {
            s.commitment
                .cells()
                .filter(|((r, c), bit)| d.cell(*r, *c) != *bit)
                .map(move |((r, c), _)| {
                    format!("p_{} disagrees with the plane at ({r}, {c})", s.stage)
                })
        }),
    );

    let mut row_failures = Vec::new();
    if b.len() != d.rows.len() || trace.patches.len() != d.rows.len() {
        row_failures.push(format!(
            "{} base rows, {} recorded patches, {} plane rows",
            b.len(),
            trace.patches.len(),
            d.rows.len()
        ));
    }
    let committed = |k: usize| -> usize {
        stages
            .last()
            .map_or(0, |s| s.commitment.row_cells(k).count())
    };
    for (k, ((row, base), patch)) in d.rows.iter().zip(b).zip(&trace.patches).enumerate() {
        if patch.len() > committed(k) {
            row_failures.push(format!(
                "patch of row {k} exceeds its {} committed cells",
                committed(k)
            ));
        }
        let width = scan.max(patch.keys().last().map_or(0, |c| c + 1));
        let actual = row.take(width);
        let bases = base.take(width);
        for j in 0..width {
            let want = patch
                .get(&j)
                .copied()
                .unwrap_or_else(|| bases.get(j).expect("width bits"));
            if actual.get(j) != Some(want) {
                row_failures.push(format!(
                    "row {k} column {j} is {} but should be {}",
                    u8::from(!want),
                    u8::from(want)
                ));
            }
        }
    }
    let rows = check("row-preservation", row_failures.into_iter());

    let generic = check(
        "genericity",
        match meets_family(&PlaneFilter::new(d, scan), family, horizon) {
            Ok(report) => report
                .unmet()
                .into_iter()
                .map(|id| format!("plane misses D_{id} within squares of side {scan}"))
                .collect(),
            Err(e) => vec![e.to_string()],
        }
        .into_iter(),
    );
    BoundReport {
        checks: vec![membership, chain, agreement, rows, generic],
    }
}
