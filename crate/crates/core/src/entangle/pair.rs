//! Two Cohen generics that jointly code a payload.
//!
//! The strings grow alternately. Each step pads the lagging string with
//! zeros to the other's length, writes a marker 1 and the next payload bit,
//! then densifies into the stage's set. Zero padding makes every marker the
//! first 1 at or after the previous boundary, which is what the decoder
//! exploits.

use serde::{Deserialize, Serialize};

use crate::bits::{BitStream, BitString, Payload, PayloadReader};
use crate::dense::{DenseFamily, DenseSet};
use crate::error::{Error, Result};

/// One half-stage: one of the two strings extended and densified.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfStage {
    /// `"c"` or `"d"`.
    pub stream: String,
    /// Index of the dense set densified into.
    pub set: usize,
    /// Marker position; absent for the initial `c_0`.
    pub marker: Option<usize>,
    pub payload_bit: Option<u8>,
    /// The string after padding and coding, before densification.
    pub coded: BitString,
    pub densified: BitString,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairTrace {
    pub stages: Vec<HalfStage>,
    pub payload: BitString,
    /// Marker positions `|c_0|, |d_0|, |c_1|, |d_1|, …`.
    pub boundaries: Vec<usize>,
    pub streams: Vec<BitStream>,
}

#[derive(Debug, Clone)]
pub struct PairRun {
    pub c: BitStream,
    pub d: BitStream,
    pub trace: PairTrace,
}

/// Pads `s` with zeros to `len`, then writes the marker and a payload bit.
fn code(s: &BitString, len: usize, bit: bool) -> BitString {
    let mut out = s.clone();
    out.pad_to(len);
    out.push(true);
    out.push(bit);
    out
}

pub fn entangle_pair(
    family: &DenseFamily<BitString>,
    payload: &Payload,
    stages: usize,
) -> Result<PairRun> {
    if stages == 0 || family.len() < stages {
        return Err(Error::EmptyFamily {
            needed: stages.max(1),
            available: family.len(),
        });
    }
    let mut reader = PayloadReader::new(payload);
    let mut log = Vec::with_capacity(2 * stages);
    let mut boundaries = Vec::with_capacity(2 * stages - 1);

    let d0_set = family.get(0).expect("checked length");
    let mut c = d0_set.densify(&BitString::new());
    if c.is_empty() {
        c = d0_set.densify(&BitString::zeros(1));
    }
    log.push(HalfStage {
        stream: "c".into(),
        set: 0,
        marker: None,
        payload_bit: None,
        coded: BitString::new(),
        densified: c.clone(),
    });
    let mut d = BitString::new();

    let mut step = |name: &str,
                    set: &dyn DenseSet<BitString>,
                    lagging: &BitString,
                    target: usize|
     -> Result<BitString> {
        let bit = reader.next_bit()?;
        let coded = code(lagging, target, bit);
        let densified = set.densify(&coded);
        boundaries.push(target);
        log.push(HalfStage {
            stream: name.into(),
            set: set.id(),
            marker: Some(target),
            payload_bit: Some(u8::from(bit)),
            coded,
            densified: densified.clone(),
        });
        Ok(densified)
    };

    d = step("d", d0_set, &d, c.len())?;
    for n in 1..stages {
        let set = family.get(n).expect("checked length");
        c = step("c", set, &c, d.len())?;
        d = step("d", set, &d, c.len())?;
    }

    let c = BitStream::zero_tail(c);
    let d = BitStream::zero_tail(d);
    let trace = PairTrace {
        stages: log,
        payload: reader.into_consumed(),
        boundaries,
        streams: vec![c.clone(), d.clone()],
    };
    Ok(PairRun { c, d, trace })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairDecoding {
    pub payload: BitString,
    pub boundaries: Vec<usize>,
}

/// Recovers `count` payload bits. Markers alternate d, c, d, c, …; marker
/// `k+1` is the first 1 at or after marker `k` in the other stream. Only
/// positions below `scan_budget` are searched.
pub fn decode_pair(
    c: &BitStream,
    d: &BitStream,
    count: usize,
    scan_budget: usize,
) -> Result<PairDecoding> {
    let c_bits = c.take(scan_budget + 1);
    let d_bits = d.take(scan_budget + 1);
    let mut payload = BitString::new();
    let mut boundaries = Vec::with_capacity(count);
    let mut from = 0;
    for k in 0..count {
        let bits = if k % 2 == 0 { &d_bits } else { &c_bits };
        let marker = bits
            .find_one(from)
            .filter(|m| *m < scan_budget)
            .ok_or(Error::NoMarker {
                step: k,
                budget: scan_budget,
            })?;
        payload.push(bits.get(marker + 1).expect("took one bit past the budget"));
        boundaries.push(marker);
        from = marker;
    }
    Ok(PairDecoding {
        payload,
        boundaries,
    })
}
