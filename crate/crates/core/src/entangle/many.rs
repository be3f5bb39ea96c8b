//! `k` Cohen generics any `k − 1` of which are mutually generic, while all
//! `k` together code a payload.
//!
//! Each stage runs `k` sub-rounds. Sub-round `i` densifies the tuple that
//! omits stream `i`, pads those streams to a common length `L`, and writes
//! zeros, a marker 1 and one payload bit onto stream `i` so that it ends at
//! `L + 2`.

use serde::{Deserialize, Serialize};

use crate::bits::{BitStream, BitString, Payload, PayloadReader};
use crate::dense::{BitTuple, Carrier, DenseFamily};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubRound {
    pub stage: usize,
    pub excluded: usize,
    /// The omitted-`i` tuple right after densification.
    pub densified: BitTuple,
    /// Common length of the other streams; the marker position.
    pub frontier: usize,
    pub payload_bit: u8,
    /// Lengths of all streams after the sub-round.
    pub lengths: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManyTrace {
    pub arity: usize,
    pub sub_rounds: Vec<SubRound>,
    pub payload: BitString,
    pub streams: Vec<BitStream>,
}

impl ManyTrace {
    /// Sub-rounds whose recorded lengths break "others at `L`, excluded at
    /// `L + 2`".
    pub fn frontier_violations(&self) -> Vec<(usize, usize)> {
        self.sub_rounds
            .iter()
            .filter(|r| {
                r.lengths.iter().enumerate().any(|(j, len)| {
                    let want = if j == r.excluded {
                        r.frontier + 2
                    } else {
                        r.frontier
                    };
                    *len != want
                })
            })
            .map(|r| (r.stage, r.excluded))
            .collect()
    }

    pub fn markers(&self) -> Vec<usize> {
        self.sub_rounds.iter().map(|r| r.frontier).collect()
    }
}

#[derive(Debug, Clone)]
pub struct ManyRun {
    pub streams: Vec<BitStream>,
    pub trace: ManyTrace,
}

/// Elements of `items` with index `i` removed.
pub fn omit<T: Clone>(items: &[T], i: usize) -> Vec<T> {
    items
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != i)
        .map(|(_, x)| x.clone())
        .collect()
}

pub fn entangle_many(
    k: usize,
    family: &DenseFamily<BitTuple>,
    payload: &Payload,
    stages: usize,
) -> Result<ManyRun> {
    if k < 2 {
        return Err(Error::BadArity {
            expected: 2,
            found: k,
        });
    }
    match family.carrier() {
        Carrier::Product { arity } if *arity == k - 1 => {}
        Carrier::Product { arity } => {
            return Err(Error::BadArity {
                expected: k - 1,
                found: *arity,
            })
        }
        _ => {
            return Err(Error::BadArity {
                expected: k - 1,
                found: 0,
            })
        }
    }
    if stages == 0 || family.len() < stages {
        return Err(Error::EmptyFamily {
            needed: stages.max(1),
            available: family.len(),
        });
    }

    let mut reader = PayloadReader::new(payload);
    let mut strings = vec![BitString::new(); k];
    let mut rounds = Vec::with_capacity(stages * k);
    for stage in 0..stages {
        let set = family.get(stage).expect("checked length");
        for i in 0..k {
            let densified = set.densify(&BitTuple(omit(&strings, i)));
            let frontier = densified.0.iter().map(BitString::len).max().unwrap_or(0);
            let mut others = densified.0.clone().into_iter();
            for (j, s) in strings.iter_mut().enumerate() {
                if j != i {
                    *s = others.next().expect("tuple has k − 1 coordinates");
                    s.pad_to(frontier);
                }
            }
            let bit = reader.next_bit()?;
            let excluded = &mut strings[i];
            debug_assert!(excluded.len() <= frontier);
            excluded.pad_to(frontier);
            excluded.push(true);
            excluded.push(bit);
            rounds.push(SubRound {
                stage,
                excluded: i,
                densified,
                frontier,
                payload_bit: u8::from(bit),
                lengths: strings.iter().map(BitString::len).collect(),
            });
        }
    }
    let streams: Vec<BitStream> = strings.into_iter().map(BitStream::zero_tail).collect();
    Ok(ManyRun {
        streams: streams.clone(),
        trace: ManyTrace {
            arity: k,
            sub_rounds: rounds,
            payload: reader.into_consumed(),
            streams,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManyDecoding {
    pub payload: BitString,
    pub markers: Vec<usize>,
}

/// Replays the sub-round order, tracking each stream's frontier: the marker
/// of sub-round `i` is the first 1 of stream `i` at or after its frontier.
pub fn decode_many(
    streams: &[BitStream],
    k: usize,
    count: usize,
    scan_budget: usize,
) -> Result<ManyDecoding> {
    if k < 2 || streams.len() != k {
        return Err(Error::BadArity {
            expected: k,
            found: streams.len(),
        });
    }
    let bits: Vec<BitString> = streams.iter().map(|s| s.take(scan_budget + 1)).collect();
    let mut frontier = vec![0usize; k];
    let mut payload = BitString::new();
    let mut markers = Vec::with_capacity(count);
    for r in 0..count {
        let (stage, i) = (r / k, r % k);
        let marker = bits[i]
            .find_one(frontier[i])
            .filter(|m| *m < scan_budget)
            .ok_or(Error::NoSubRoundMarker {
                stage,
                round: i,
                budget: scan_budget,
            })?;
        payload.push(
            bits[i]
                .get(marker + 1)
                .expect("took one bit past the budget"),
        );
        markers.push(marker);
        for (j, f) in frontier.iter_mut().enumerate() {
            *f = if j == i { marker + 2 } else { marker };
        }
    }
    Ok(ManyDecoding { payload, markers })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{product_family, product_len_spec};

    fn ones() -> Payload {
        Payload::Stream(BitStream::constant(true))
    }

    #[test]
    fn first_sub_round_frontier() {
        let fam = product_family(&product_len_spec(4), 2, 0).unwrap();
        let run = entangle_many(3, &fam, &ones(), 4).unwrap();
        let r0 = &run.trace.sub_rounds[0];
        assert_eq!((r0.stage, r0.excluded), (0, 0));
        let l = r0.frontier;
        assert_eq!(r0.lengths, [l + 2, l, l]);
        assert!(run.streams[0].bit(l));
        assert!(run.trace.frontier_violations().is_empty());
    }

    #[test]
    fn round_trip_thirty_stages() {
        let fam = product_family(&product_len_spec(30), 2, 0).unwrap();
        let payload = Payload::Stream(BitStream::seeded(8, 0));
        let run = entangle_many(3, &fam, &payload, 30).unwrap();
        let out = decode_many(&run.streams, 3, 90, 4096).unwrap();
        assert_eq!(out.payload, run.trace.payload);
        assert_eq!(out.markers, run.trace.markers());
    }

    #[test]
    fn zero_payload_decodes_to_zeros() {
        let fam = product_family(&product_len_spec(5), 1, 0).unwrap();
        let zeros = Payload::Stream(BitStream::constant(false));
        let run = entangle_many(2, &fam, &zeros, 5).unwrap();
        let out = decode_many(&run.streams, 2, 10, 1024).unwrap();
        assert_eq!(out.payload, BitString::zeros(10));
    }

    #[test]
    fn arity_guards() {
        let fam = product_family(&product_len_spec(2), 0, 0).unwrap();
        assert!(matches!(
            entangle_many(1, &fam, &ones(), 1),
            Err(Error::BadArity { .. })
        ));
        let fam = product_family(&product_len_spec(2), 3, 0).unwrap();
        assert_eq!(
            entangle_many(3, &fam, &ones(), 1).unwrap_err(),
            Error::BadArity {
                expected: 2,
                found: 3
            }
        );
    }

    #[test]
    fn padding_flip_misparses() {
        let fam = product_family(&product_len_spec(6), 2, 0).unwrap();
        let run = entangle_many(3, &fam, &ones(), 6).unwrap();
        // stream 1's padding in stage 1: between its frontier and its marker
        let r = &run.trace.sub_rounds[3 + 1];
        let prev = &run.trace.sub_rounds[3];
        let start = prev.frontier;
        assert!(r.frontier > start);
        let mut streams = run.streams.clone();
        streams[1].prefix.set(start, true);
        let out = decode_many(&streams, 3, 18, 4096);
        assert!(out.map_or(true, |o| o.markers != run.trace.markers()));
    }
}
