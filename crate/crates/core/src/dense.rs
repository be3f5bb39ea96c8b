//! Dense-set oracles and countable families of them.
//!
//! A dense set is given effectively: a membership predicate together with a
//! densifier that moves any condition into the set. The family enumerates
//! the dense sets the constructions must meet; it is the only trace of the
//! ground model the code ever sees.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bits::BitString;

/// A dense set of conditions of type `C`.
///
/// Contract: `densify(p) ≤ p` and `member(densify(p))` for every `p`, and
/// both methods are pure.
pub trait DenseSet<C>: Send + Sync {
    /// Position of this set in the enumeration of its family.
    fn id(&self) -> usize;
    fn member(&self, condition: &C) -> bool;
    fn densify(&self, condition: &C) -> C;
    fn describe(&self) -> String {
        format!("D_{}", self.id())
    }
}

/// Which poset a family's conditions live in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "poset", rename_all = "kebab-case")]
pub enum Carrier {
    Cohen,
    Product { arity: usize },
    Plane,
    Abstract { name: String },
}

/// An indexed sequence of dense sets on one carrier.
pub struct DenseFamily<C> {
    carrier: Carrier,
    sets: Vec<Arc<dyn DenseSet<C>>>,
    /// A selection from a larger family; ids need not be `0..len`.
    selection: bool,
}

impl<C> Clone for DenseFamily<C> {
    fn clone(&self) -> Self {
        Self {
            carrier: self.carrier.clone(),
            sets: self.sets.clone(),
            selection: self.selection,
        }
    }
}

impl<C> DenseFamily<C> {
    pub fn new(carrier: Carrier, sets: Vec<Arc<dyn DenseSet<C>>>) -> Self {
        Self {
            carrier,
            sets,
            selection: false,
        }
    }

    /// Some of the sets of a larger family, keeping their ids. A horizon
    /// past the end of a selection is not an error: the missing sets are
    /// outside the selection, not missing from the family.
    pub fn selection(carrier: Carrier, sets: Vec<Arc<dyn DenseSet<C>>>) -> Self {
        Self {
            carrier,
            sets,
            selection: true,
        }
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// The set at position `n` of the sequence.
    pub fn get(&self, n: usize) -> Option<&dyn DenseSet<C>> {
        self.sets.get(n).map(|s| s.as_ref())
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn DenseSet<C>> {
        self.sets.iter().map(|s| s.as_ref())
    }

    /// Whether set ids are exactly `0, 1, …, len − 1` of a whole family.
    pub fn is_contiguous(&self) -> bool {
        !self.selection && self.sets.iter().enumerate().all(|(i, s)| s.id() == i)
    }
}

impl<C> fmt::Debug for DenseFamily<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DenseFamily")
            .field("carrier", &self.carrier)
            .field(
                "sets",
                &self.sets.iter().map(|s| s.describe()).collect::<Vec<_>>(),
            )
            .finish()
    }
}

/// A dense set given by two closures.
pub struct FnSet<C> {
    id: usize,
    member: Box<dyn Fn(&C) -> bool + Send + Sync>,
    densify: Box<dyn Fn(&C) -> C + Send + Sync>,
}

impl<C> FnSet<C> {
    pub fn new(
        id: usize,
        member: impl Fn(&C) -> bool + Send + Sync + 'static,
        densify: impl Fn(&C) -> C + Send + Sync + 'static,
    ) -> Self {
        Self {
            id,
            member: Box::new(member),
            densify: Box::new(densify),
        }
    }
}

impl<C> DenseSet<C> for FnSet<C> {
    fn id(&self) -> usize {
        self.id
    }

    fn member(&self, condition: &C) -> bool {
        (self.member)(condition)
    }

    fn densify(&self, condition: &C) -> C {
        (self.densify)(condition)
    }
}

/// A condition in the finite product of Cohen forcing: one string per
/// coordinate, ordered coordinatewise.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BitTuple(pub Vec<BitString>);

impl BitTuple {
    pub fn empty(arity: usize) -> Self {
        Self(vec![BitString::new(); arity])
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn leq(&self, other: &BitTuple) -> bool {
        self.arity() == other.arity() && self.0.iter().zip(&other.0).all(|(a, b)| a.leq(b))
    }

    pub fn compatible(&self, other: &BitTuple) -> bool {
        self.arity() == other.arity() && self.0.iter().zip(&other.0).all(|(a, b)| a.compatible(b))
    }
}

impl fmt::Debug for BitTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("").field(&self.0).finish()
    }
}
