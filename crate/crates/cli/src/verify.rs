use std::path::Path;

use forcing_lab::bits::{BitStream, Payload};
use forcing_lab::catalog::{restrict_plane_family, FamilySpec};
use forcing_lab::closure::{self, verify_bound};
use forcing_lab::entangle::{self, many::omit};
use forcing_lab::genericity::{meets_family, mutual_genericity_check, StreamFilter};
use forcing_lab::poset::{LengthLexCohen, ZeroRunAntichain};
use forcing_lab::Error;

use crate::commands::{
    cohen_family, default_scan, plane_family, product_family, symbolic_family, wide_replay,
};
use crate::failure::{Failure, Outcome};
use crate::trace::{Body, Envelope};

struct Report {
    lines: Vec<(bool, String, String)>,
}

impl Report {
    fn new() -> Self {
        Self { lines: Vec::new() }
    }

    fn add(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.lines.push((passed, name.into(), detail.into()));
    }

    /// Records a check whose evaluation may itself fail.
    fn add_result(&mut self, name: impl Into<String>, result: Result<(bool, String), Error>) {
        match result {
            Ok((passed, detail)) => self.add(name, passed, detail),
            Err(e) => self.add(name, false, e.to_string()),
        }
    }

    fn finish(self, kind: &str) -> Outcome<()> {
        println!("verify {kind}");
        for (passed, name, detail) in &self.lines {
            let status = if *passed { "PASS" } else { "FAIL" };
            if detail.is_empty() {
                println!("  {status} {name}");
            } else {
                println!("  {status} {name}: {detail}");
            }
        }
        let failed = self.lines.iter().filter(|l| !l.0).count();
        if failed == 0 {
            println!("all {} checks passed", self.lines.len());
            Ok(())
        } else {
            Err(Failure::Check(format!(
                "{failed} of {} checks failed",
                self.lines.len()
            )))
        }
    }
}

fn unmet_detail(unmet: &[usize]) -> String {
    if unmet.is_empty() {
        String::new()
    } else {
        format!("misses sets {unmet:?}")
    }
}

fn scan_for(streams: &[BitStream]) -> usize {
    streams.iter().map(|s| s.prefix.len()).max().unwrap_or(0) + 64
}

pub fn run(path: &Path) -> Outcome<()> {
    let env = Envelope::read(path)?;
    let mut r = Report::new();
    match &env.body {
        Body::Pair { stage_count, trace } => {
            let fam = cohen_family(&env.family, env.seed)?;
            let [c, d] = trace.streams.as_slice() else {
                return Err(Failure::Usage("pair trace needs two streams".into()));
            };
            let scan = scan_for(&trace.streams);
            for (name, s) in [("c", c), ("d", d)] {
                r.add_result(
                    format!("genericity of {name}"),
                    meets_family(&StreamFilter::new(s, scan), &fam, *stage_count)
                        .map(|rep| (rep.all_met(), unmet_detail(&rep.unmet()))),
                );
            }
            r.add_result(
                "decode",
                entangle::decode_pair(c, d, trace.payload.len(), scan).map(|out| {
                    let ok = out.payload == trace.payload && out.boundaries == trace.boundaries;
                    (
                        ok,
                        if ok {
                            String::new()
                        } else {
                            format!("decoded {} at {:?}", out.payload, out.boundaries)
                        },
                    )
                }),
            );
            let bad = trace.boundaries.windows(2).position(|w| w[1] < w[0] + 2);
            r.add(
                "boundary growth",
                bad.is_none(),
                bad.map_or(String::new(), |k| format!("at step {}", k + 1)),
            );
            r.add_result(
                "replay",
                entangle::entangle_pair(
                    &fam,
                    &Payload::Finite(trace.payload.clone()),
                    *stage_count,
                )
                .map(|run| (run.trace == *trace, String::new())),
            );
        }
        Body::Many {
            k,
            stage_count,
            trace,
        } => {
            let fam = product_family(&env.family, env.seed)?;
            let v = trace.frontier_violations();
            r.add(
                "frontier",
                v.is_empty(),
                if v.is_empty() {
                    String::new()
                } else {
                    format!("(stage, excluded) {v:?}")
                },
            );
            let scan = scan_for(&trace.streams);
            for i in 0..*k {
                r.add_result(
                    format!("subtuple without {i}"),
                    mutual_genericity_check(&omit(&trace.streams, i), &fam, *stage_count, scan)
                        .map(|rep| (rep.all_met(), unmet_detail(&rep.unmet()))),
                );
            }
            r.add_result(
                "decode",
                entangle::decode_many(&trace.streams, *k, trace.payload.len(), scan).map(|out| {
                    let ok = out.payload == trace.payload && out.markers == trace.markers();
                    (
                        ok,
                        if ok {
                            String::new()
                        } else {
                            format!("decoded {} at {:?}", out.payload, out.markers)
                        },
                    )
                }),
            );
            r.add_result(
                "replay",
                entangle::entangle_many(
                    *k,
                    &fam,
                    &Payload::Finite(trace.payload.clone()),
                    *stage_count,
                )
                .map(|run| (run.trace == *trace, String::new())),
            );
        }
        Body::Wide { step_count, trace } => {
            let fam = symbolic_family(&env.family, env.seed)?;
            let t = trace.decode()?;
            let descending = |chain: &[forcing_lab::symbolic::RunString]| {
                chain
                    .windows(2)
                    .position(|w| !(w[1].leq(&w[0]) && w[1] != w[0]))
            };
            for (name, chain) in [("g", &t.g), ("h", &t.h)] {
                let bad = descending(chain);
                r.add(
                    format!("{name} strictly descending"),
                    bad.is_none() && chain.len() == step_count + 1,
                    bad.map_or(String::new(), |n| format!("at {}", n + 1)),
                );
                let outside: Vec<usize> = chain
                    .iter()
                    .enumerate()
                    .filter(|(n, p)| fam.get(*n).is_none_or(|set| !set.member(p)))
                    .map(|(n, _)| n)
                    .collect();
                r.add(
                    format!("{name} membership"),
                    outside.is_empty(),
                    unmet_detail(&outside),
                );
            }
            let multi: Vec<usize> = (0..*step_count)
                .filter(|n| {
                    let hits: Vec<_> =
                        t.g.iter()
                            .filter_map(|c| c.zero_run_after(&t.g[*n]))
                            .collect();
                    hits.is_empty() || hits.iter().any(|j| *j != hits[0])
                })
                .collect();
            r.add(
                "unique antichain hits",
                multi.is_empty(),
                unmet_detail(&multi),
            );
            match wide_replay(&env, None, 64) {
                Ok((_, ok)) => r.add("decode", ok, ""),
                Err(e) => r.add("decode", false, e.to_string()),
            }
            r.add_result(
                "replay",
                entangle::entangle_wide(
                    &LengthLexCohen,
                    &ZeroRunAntichain,
                    &fam,
                    &Payload::Finite(t.payload.clone()),
                    *step_count,
                )
                .map(|again| (again == t, String::new())),
            );
        }
        Body::Generics {
            rows,
            horizon,
            fill,
            streams,
        } => {
            let fam = plane_family(&env.family, env.seed)?;
            let FamilySpec::Plane { sets } = &env.family else {
                unreachable!("plane_family accepted the spec")
            };
            r.add_result(
                "replay",
                closure::build_mutually_generic_sequence(&fam, *rows, *horizon, *fill)
                    .map(|b| (b == *streams, String::new())),
            );
            let scan = default_scan(*horizon);
            let mut selections: Vec<Vec<usize>> = vec![(0..*rows).collect()];
            for a in 0..*rows {
                for b in a + 1..*rows {
                    selections.push(vec![a, b]);
                }
            }
            for sel in selections.iter().filter(|s| !s.is_empty()) {
                let picked: Vec<BitStream> = sel.iter().map(|i| streams[*i].clone()).collect();
                r.add_result(
                    format!("rows {sel:?} mutually generic"),
                    restrict_plane_family(sets, env.seed, sel)
                        .and_then(|f| mutual_genericity_check(&picked, &f, *horizon, scan))
                        .map(|rep| (rep.all_met(), unmet_detail(&rep.unmet()))),
                );
            }
        }
        Body::ChainBound {
            base,
            scan,
            plane,
            trace,
        } => {
            let fam = plane_family(&env.family, env.seed)?;
            let report = verify_bound(plane, base, trace, &fam, fam.len(), *scan);
            for c in &report.checks {
                r.add(c.name, c.passed, c.failures.join("; "));
            }
            r.add(
                "retries within budget",
                trace.max_retries() <= trace.retry_budget,
                format!("at most {} of {}", trace.max_retries(), trace.retry_budget),
            );
            r.add_result(
                "replay",
                closure::bound_chain(base, &fam, trace.retry_budget, trace.fill)
                    .map(|run| (run.trace == *trace && run.plane == *plane, String::new())),
            );
        }
    }
    r.finish(env.kind())
}
