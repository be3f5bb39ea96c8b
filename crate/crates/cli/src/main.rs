use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod failure;
mod input;
mod trace;
mod verify;

use failure::Outcome;

#[derive(Parser)]
#[command(
    name = "forcing-lab",
    version,
    about = "Entangled generic filters and chain bounds on explicit dense families"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Seed for jittered densifiers, seeded fills and `seed` payloads.
    #[arg(long, env = "FORCING_LAB_SEED", default_value_t = 0)]
    seed: u64,
    /// Trace output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FillArg {
    Zero,
    Seeded,
}

#[derive(Subcommand)]
enum Command {
    /// Build two Cohen generics that jointly code a payload.
    EntanglePair {
        /// Family JSON file, or inline JSON.
        #[arg(long)]
        family: String,
        /// hex:…, bits:…, file:PATH or seed[:N].
        #[arg(long)]
        payload: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        stages: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Recover payload bits from two streams stored as '0'/'1' text.
    DecodePair {
        #[arg(long)]
        c: PathBuf,
        #[arg(long)]
        d: PathBuf,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 1 << 16, value_parser = clap::value_parser!(u64).range(1..))]
        scan_budget: u64,
    },
    /// Build k Cohen generics, any k − 1 of them mutually generic.
    EntangleMany {
        #[arg(long)]
        family: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        k: u64,
        #[arg(long)]
        payload: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        stages: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Recover payload bits from k streams stored as '0'/'1' text.
    DecodeMany {
        /// One file per stream, in order.
        #[arg(long = "stream", required = true)]
        streams: Vec<PathBuf>,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 1 << 16, value_parser = clap::value_parser!(u64).range(1..))]
        scan_budget: u64,
    },
    /// Entangle two generics for Cohen forcing viewed as a wide poset.
    EntangleWide {
        #[arg(long)]
        family: String,
        #[arg(long)]
        payload: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        steps: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Replay a wide trace from its two chains alone.
    DecodeWide {
        #[arg(long)]
        trace: PathBuf,
        /// Rounds to decode; all of them by default.
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
    },
    /// Fold a plane family into rows that are mutually generic.
    BuildGenerics {
        #[arg(long)]
        family: String,
        #[arg(long)]
        rows: usize,
        /// Number of sets folded; the whole family by default.
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long, value_enum, default_value_t = FillArg::Seeded)]
        fill: FillArg,
        #[command(flatten)]
        common: Common,
    },
    /// Bound a sequence of generic rows by one generic plane.
    BoundChain {
        #[arg(long)]
        family: String,
        /// Rows from a `build-generics` trace; built in place otherwise.
        #[arg(long)]
        generics: Option<PathBuf>,
        /// Rows to build when no generics trace is given.
        #[arg(long, default_value_t = 8)]
        rows: usize,
        #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u64).range(1..))]
        retry_budget: u64,
        /// Side of the largest square searched when checking genericity.
        #[arg(long)]
        scan: Option<usize>,
        #[arg(long, value_enum, default_value_t = FillArg::Seeded)]
        fill: FillArg,
        #[command(flatten)]
        common: Common,
    },
    /// Re-run every check a trace supports and print an itemized report.
    Verify {
        #[arg(long)]
        trace: PathBuf,
    },
}

fn run(cli: Cli) -> Outcome<()> {
    match cli.command {
        Command::EntanglePair {
            family,
            payload,
            stages,
            common,
        } => commands::entangle_pair(
            &family,
            &payload,
            stages as usize,
            common.seed,
            common.out.as_deref(),
        ),
        Command::DecodePair {
            c,
            d,
            count,
            scan_budget,
        } => commands::decode_pair(&c, &d, count, scan_budget as usize),
        Command::EntangleMany {
            family,
            k,
            payload,
            stages,
            common,
        } => commands::entangle_many(
            &family,
            k as usize,
            &payload,
            stages as usize,
            common.seed,
            common.out.as_deref(),
        ),
        Command::DecodeMany {
            streams,
            count,
            scan_budget,
        } => commands::decode_many(&streams, count, scan_budget as usize),
        Command::EntangleWide {
            family,
            payload,
            steps,
            common,
        } => commands::entangle_wide(
            &family,
            &payload,
            steps as usize,
            common.seed,
            common.out.as_deref(),
        ),
        Command::DecodeWide {
            trace,
            count,
            budget,
        } => commands::decode_wide(&trace, count, budget as usize),
        Command::BuildGenerics {
            family,
            rows,
            horizon,
            fill,
            common,
        } => commands::build_generics(
            &family,
            rows,
            horizon,
            fill_rule(fill, common.seed),
            common.seed,
            common.out.as_deref(),
        ),
        Command::BoundChain {
            family,
            generics,
            rows,
            retry_budget,
            scan,
            fill,
            common,
        } => commands::bound_chain(commands::BoundArgs {
            family: &family,
            generics: generics.as_deref(),
            rows,
            retry_budget: retry_budget as usize,
            scan,
            fill: fill_rule(fill, common.seed),
            seed: common.seed,
            out: common.out.as_deref(),
        }),
        Command::Verify { trace } => verify::run(&trace),
    }
}

fn fill_rule(fill: FillArg, seed: u64) -> forcing_lab::closure::PlaneFill {
    match fill {
        FillArg::Zero => forcing_lab::closure::PlaneFill::Zero,
        FillArg::Seeded => forcing_lab::closure::PlaneFill::Seeded { seed },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{f}");
            f.exit_code()
        }
    }
}
