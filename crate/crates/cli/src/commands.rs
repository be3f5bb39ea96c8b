use std::path::Path;

use forcing_lab::bits::{BitStream, BitString};
use forcing_lab::catalog::{self, BuiltFamily, FamilySpec};
use forcing_lab::closure::{self, PlaneFill};
use forcing_lab::dense::{BitTuple, DenseFamily};
use forcing_lab::entangle::{self, SerialWideTrace, WideTriple};
use forcing_lab::plane::PlaneCondition;
use forcing_lab::poset::{ChainFilter, LengthLexCohen, ZeroRunAntichain};
use forcing_lab::symbolic::RunString;

use crate::failure::{usage, Failure, Outcome};
use crate::input::{load_family, parse_payload, read_stream, Expect};
use crate::trace::{Body, Envelope};

pub fn cohen_family(spec: &FamilySpec, seed: u64) -> Outcome<DenseFamily<BitString>> {
    match catalog::build(spec, seed)? {
        BuiltFamily::Cohen(f) => Ok(f),
        _ => Err(usage("expected a Cohen family")),
    }
}

pub fn product_family(spec: &FamilySpec, seed: u64) -> Outcome<DenseFamily<BitTuple>> {
    match catalog::build(spec, seed)? {
        BuiltFamily::Product(f) => Ok(f),
        _ => Err(usage("expected a product family")),
    }
}

pub fn plane_family(spec: &FamilySpec, seed: u64) -> Outcome<DenseFamily<PlaneCondition>> {
    match catalog::build(spec, seed)? {
        BuiltFamily::Plane(f) => Ok(f),
        _ => Err(usage("expected a plane family")),
    }
}

pub fn symbolic_family(spec: &FamilySpec, seed: u64) -> Outcome<DenseFamily<RunString>> {
    match spec {
        FamilySpec::Cohen { sets } => Ok(catalog::symbolic_cohen_family(sets, seed)),
        _ => Err(usage("expected a Cohen family")),
    }
}

pub fn default_scan(family_len: usize) -> usize {
    2 * family_len + 32
}

pub fn entangle_pair(
    family: &str,
    payload: &str,
    stages: usize,
    seed: u64,
    out: Option<&Path>,
) -> Outcome<()> {
    let spec = load_family(family, Expect::Cohen)?;
    let fam = cohen_family(&spec, seed)?;
    let run = entangle::entangle_pair(&fam, &parse_payload(payload, seed)?, stages)?;
    eprintln!(
        "pair: {} payload bits, last boundary {}",
        run.trace.payload.len(),
        run.trace.boundaries.last().copied().unwrap_or(0)
    );
    let body = Body::Pair {
        stage_count: stages,
        trace: run.trace,
    };
    Envelope::new(seed, spec, Some(payload.to_string()), body).write(out)
}

fn print_decoded(payload: &BitString, markers: &[usize]) {
    println!("payload: {payload}");
    let markers: Vec<String> = markers.iter().map(usize::to_string).collect();
    println!("boundaries: {}", markers.join(" "));
}

pub fn decode_pair(c: &Path, d: &Path, count: usize, scan_budget: usize) -> Outcome<()> {
    let out = entangle::decode_pair(&read_stream(c)?, &read_stream(d)?, count, scan_budget)?;
    print_decoded(&out.payload, &out.boundaries);
    Ok(())
}

pub fn entangle_many(
    family: &str,
    k: usize,
    payload: &str,
    stages: usize,
    seed: u64,
    out: Option<&Path>,
) -> Outcome<()> {
    let spec = load_family(family, Expect::Product { arity: k - 1 })?;
    let fam = product_family(&spec, seed)?;
    let run = entangle::entangle_many(k, &fam, &parse_payload(payload, seed)?, stages)?;
    eprintln!("many: k = {k}, {} payload bits", run.trace.payload.len());
    let body = Body::Many {
        k,
        stage_count: stages,
        trace: run.trace,
    };
    Envelope::new(seed, spec, Some(payload.to_string()), body).write(out)
}

pub fn decode_many(paths: &[std::path::PathBuf], count: usize, scan_budget: usize) -> Outcome<()> {
    let streams = paths
        .iter()
        .map(|p| read_stream(p))
        .collect::<Outcome<Vec<BitStream>>>()?;
    let out = entangle::decode_many(&streams, streams.len(), count, scan_budget)?;
    print_decoded(&out.payload, &out.markers);
    Ok(())
}

pub fn entangle_wide(
    family: &str,
    payload: &str,
    steps: usize,
    seed: u64,
    out: Option<&Path>,
) -> Outcome<()> {
    let spec = load_family(family, Expect::Cohen)?;
    let fam = symbolic_family(&spec, seed)?;
    let trace = entangle::entangle_wide(
        &LengthLexCohen,
        &ZeroRunAntichain,
        &fam,
        &parse_payload(payload, seed)?,
        steps,
    )?;
    let serial = SerialWideTrace::encode(&trace);
    eprintln!("wide: {steps} steps, {} shared nodes", serial.nodes.len());
    let body = Body::Wide {
        step_count: steps,
        trace: serial,
    };
    Envelope::new(seed, spec, Some(payload.to_string()), body).write(out)
}

/// Decodes a wide trace's chains and compares with its recorded rounds.
pub fn wide_replay(
    env: &Envelope,
    count: Option<usize>,
    budget: usize,
) -> Outcome<(Vec<WideTriple<RunString>>, bool)> {
    let Body::Wide { step_count, trace } = &env.body else {
        return Err(usage(format!("expected a wide trace, got {}", env.kind())));
    };
    let trace = trace.decode()?;
    let fam = symbolic_family(&env.family, env.seed)?;
    let count = count.unwrap_or(*step_count);
    let g = ChainFilter::new(&LengthLexCohen, &trace.g, trace.g.len());
    let h = ChainFilter::new(&LengthLexCohen, &trace.h, trace.h.len());
    let out = entangle::decode_wide(
        &LengthLexCohen,
        &ZeroRunAntichain,
        &fam,
        &g,
        &h,
        count,
        budget,
    )?;
    let expected = trace.triples();
    let matches = out.len() <= expected.len() && out[..] == expected[..out.len()];
    Ok((out, matches))
}

pub fn decode_wide(path: &Path, count: Option<usize>, budget: usize) -> Outcome<()> {
    let env = Envelope::read(path)?;
    let (out, matches) = wide_replay(&env, count, budget)?;
    let bits: BitString = BitString::from_bits(out.iter().map(|t| t.z).collect());
    println!("rounds: {}", out.len());
    println!("payload: {bits}");
    if !matches {
        return Err(Failure::Check(
            "decoded rounds differ from the recorded ones".into(),
        ));
    }
    Ok(())
}

pub fn build_generics(
    family: &str,
    rows: usize,
    horizon: Option<usize>,
    fill: PlaneFill,
    seed: u64,
    out: Option<&Path>,
) -> Outcome<()> {
    let spec = load_family(family, Expect::Plane)?;
    let fam = plane_family(&spec, seed)?;
    let horizon = horizon.unwrap_or(fam.len());
    let streams = closure::build_mutually_generic_sequence(&fam, rows, horizon, fill)?;
    eprintln!("generics: {rows} rows through {horizon} sets");
    let body = Body::Generics {
        rows,
        horizon,
        fill,
        streams,
    };
    Envelope::new(seed, spec, None, body).write(out)
}

pub struct BoundArgs<'a> {
    pub family: &'a str,
    pub generics: Option<&'a Path>,
    pub rows: usize,
    pub retry_budget: usize,
    pub scan: Option<usize>,
    pub fill: PlaneFill,
    pub seed: u64,
    pub out: Option<&'a Path>,
}

pub fn bound_chain(args: BoundArgs<'_>) -> Outcome<()> {
    let spec = load_family(args.family, Expect::Plane)?;
    let fam = plane_family(&spec, args.seed)?;
    let base = match args.generics {
        Some(path) => match Envelope::read(path)?.body {
            Body::Generics { streams, .. } => streams,
            _ => return Err(usage(format!("{} is not a generics trace", path.display()))),
        },
        None => closure::build_mutually_generic_sequence(&fam, args.rows, fam.len(), args.fill)?,
    };
    let run = closure::bound_chain(&base, &fam, args.retry_budget, args.fill)?;
    eprintln!(
        "chain-bound: {} rows, {} stages, at most {} retries per stage",
        base.len(),
        run.trace.stages.len(),
        run.trace.max_retries()
    );
    let body = Body::ChainBound {
        base,
        scan: args.scan.unwrap_or_else(|| default_scan(fam.len())),
        plane: run.plane,
        trace: run.trace,
    };
    Envelope::new(args.seed, spec, None, body).write(args.out)
}
