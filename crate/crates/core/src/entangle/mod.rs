//! Entangled generics: tuples of filters that are individually (or
//! partially) generic but jointly code an arbitrary payload.

pub mod many;
pub mod pair;
pub mod wide;

pub use many::{decode_many, entangle_many, ManyDecoding, ManyRun, ManyTrace, SubRound};
pub use pair::{decode_pair, entangle_pair, HalfStage, PairDecoding, PairRun, PairTrace};
pub use wide::{decode_wide, entangle_wide, SerialWideTrace, WideStep, WideTrace, WideTriple};
