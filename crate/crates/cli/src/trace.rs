//! The JSON envelope every command writes and `verify` reads back.

use std::fs;
use std::path::Path;

use forcing_lab::bits::{BitStream, PRNG_ALGORITHM};
use forcing_lab::catalog::FamilySpec;
use forcing_lab::closure::{BoundPlane, ChainTrace, PlaneFill};
use forcing_lab::entangle::{ManyTrace, PairTrace, SerialWideTrace};
use serde::{Deserialize, Serialize};

use crate::failure::{usage, Outcome};

pub const FORMAT: &str = "forcing-lab-trace";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub format: String,
    pub version: u32,
    pub prng: String,
    pub seed: u64,
    pub family: FamilySpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub payload_source: Option<String>,
    #[serde(flatten)]
    pub body: Body,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Body {
    Pair {
        stage_count: usize,
        #[serde(flatten)]
        trace: PairTrace,
    },
    Many {
        k: usize,
        stage_count: usize,
        #[serde(flatten)]
        trace: ManyTrace,
    },
    Wide {
        step_count: usize,
        #[serde(flatten)]
        trace: SerialWideTrace,
    },
    Generics {
        rows: usize,
        horizon: usize,
        fill: PlaneFill,
        streams: Vec<BitStream>,
    },
    ChainBound {
        /// The input rows `b_k`.
        base: Vec<BitStream>,
        scan: usize,
        plane: BoundPlane,
        #[serde(flatten)]
        trace: ChainTrace,
    },
}

impl Envelope {
    pub fn new(seed: u64, family: FamilySpec, payload_source: Option<String>, body: Body) -> Self {
        Self {
            format: FORMAT.into(),
            version: VERSION,
            prng: PRNG_ALGORITHM.into(),
            seed,
            family,
            payload_source,
            body,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.body {
            Body::Pair { .. } => "pair",
            Body::Many { .. } => "many",
            Body::Wide { .. } => "wide",
            Body::Generics { .. } => "generics",
            Body::ChainBound { .. } => "chain-bound",
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("traces serialize");
        text.push('\n');
        text
    }

    /// Writes to `out`, or to stdout without a path.
    pub fn write(&self, out: Option<&Path>) -> Outcome<()> {
        match out {
            Some(path) => fs::write(path, self.to_json())
                .map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
            None => {
                print!("{}", self.to_json());
                Ok(())
            }
        }
    }

    pub fn read(path: &Path) -> Outcome<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
        let env: Envelope = serde_json::from_str(&text)
            .map_err(|e| usage(format!("bad trace {}: {e}", path.display())))?;
        if env.format != FORMAT || env.version != VERSION {
            return Err(usage(format!(
                "unsupported trace format {} v{}",
                env.format, env.version
            )));
        }
        if env.prng != PRNG_ALGORITHM {
            return Err(usage(format!(
                "trace uses PRNG {:?}, this build has {PRNG_ALGORITHM:?}",
                env.prng
            )));
        }
        Ok(env)
    }
}
