use std::fs;
use std::path::Path;

use forcing_lab::bits::{BitStream, BitString, Payload};
use forcing_lab::catalog::{CohenEntry, FamilySpec, PlaneEntry, ProductEntry};

use crate::failure::{usage, Outcome};

/// Keystream used for `seed:` payloads.
pub const PAYLOAD_STREAM: u64 = 0x7061_796c;

/// Carrier a command expects, used to read bare catalog lists.
#[derive(Debug, Clone, Copy)]
pub enum Expect {
    Cohen,
    Product { arity: usize },
    Plane,
}

fn read_text(path: &Path) -> Outcome<String> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn json_err(what: &str) -> impl Fn(serde_json::Error) -> crate::failure::Failure + '_ {
    move |e| usage(format!("bad {what}: {e}"))
}

/// Reads `--family`: a file path or inline JSON, holding either a tagged
/// family spec or a bare list of entries for the expected carrier.
pub fn load_family(arg: &str, expect: Expect) -> Outcome<FamilySpec> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('[') || trimmed.starts_with('{') {
        arg.to_string()
    } else {
        read_text(Path::new(arg))?
    };
    let value: serde_json::Value = serde_json::from_str(&text).map_err(json_err("family JSON"))?;
    let spec = if value.is_array() {
        match expect {
            Expect::Cohen => FamilySpec::Cohen {
                sets: serde_json::from_value::<Vec<CohenEntry>>(value)
                    .map_err(json_err("Cohen catalog"))?,
            },
            Expect::Product { arity } => FamilySpec::Product {
                arity,
                sets: serde_json::from_value::<Vec<ProductEntry>>(value)
                    .map_err(json_err("product catalog"))?,
            },
            Expect::Plane => FamilySpec::Plane {
                sets: serde_json::from_value::<Vec<PlaneEntry>>(value)
                    .map_err(json_err("plane catalog"))?,
            },
        }
    } else {
        serde_json::from_value(value).map_err(json_err("family spec"))?
    };
    let fits = matches!(
        (&spec, expect),
        (FamilySpec::Cohen { .. }, Expect::Cohen) | (FamilySpec::Plane { .. }, Expect::Plane)
    ) || matches!((&spec, expect), (FamilySpec::Product { arity: a, .. }, Expect::Product { arity }) if *a == arity);
    if !fits {
        return Err(usage(format!(
            "family does not fit this command (expected {expect:?})"
        )));
    }
    Ok(spec)
}

fn parse_bits(text: &str) -> Outcome<BitString> {
    text.parse()
        .map_err(|e| usage(format!("bad bit string: {e}")))
}

/// Reads `--payload`: `hex:…`, `bits:…`, `file:PATH` (raw bytes) or
/// `seed[:N]`. Finite sources continue with zeros.
pub fn parse_payload(arg: &str, default_seed: u64) -> Outcome<Payload> {
    let (kind, rest) = arg.split_once(':').unwrap_or((arg, ""));
    let finite = |bits: BitString| Payload::Stream(BitStream::zero_tail(bits));
    Ok(match kind {
        "hex" => {
            let bytes = hex::decode(rest).map_err(|e| usage(format!("bad hex payload: {e}")))?;
            finite(BitString::from_bytes(&bytes))
        }
        "bits" => finite(parse_bits(rest)?),
        "file" => {
            let bytes = fs::read(rest).map_err(|e| usage(format!("cannot read {rest}: {e}")))?;
            finite(BitString::from_bytes(&bytes))
        }
        "seed" => {
            let seed = if rest.is_empty() {
                default_seed
            } else {
                rest.parse()
                    .map_err(|_| usage(format!("bad payload seed {rest:?}")))?
            };
            Payload::Stream(BitStream::seeded(seed, PAYLOAD_STREAM))
        }
        _ => return Err(usage(format!("unknown payload source {arg:?}"))),
    })
}

/// An ASCII '0'/'1' file read as a stream with a zero tail.
pub fn read_stream(path: &Path) -> Outcome<BitStream> {
    Ok(BitStream::zero_tail(parse_bits(&read_text(path)?)?))
}
