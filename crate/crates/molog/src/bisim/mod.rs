//! Bisimulations synthesized from connective declarations: clause
//! generation, greatest-fixpoint computation of the maximal family,
//! verification of candidate families, and bounded preservation oracles.

mod check;
mod clauses;
mod fixpoint;
mod preserve;

pub use check::{verify_family, Violation};
pub use clauses::{generate_clauses, render_clause, Clause, ClauseSet, RelRef};
pub use fixpoint::{
    bisimilar, full_family, maximal_bisimulation, maximal_bisimulation_with_mode, refine_family,
    RefineStats, ScanMode,
};
pub use preserve::{preserves, PreservationOracle, PreserveOutcome, VertexOracle};

use std::collections::BTreeMap;
use std::fmt;

use crate::connective::{ConnectiveSet, TreeNode, VertexAddr};

/// Orientation of a directed pair: `Forward` relates a tuple of the first
/// model to one of the second, `Backward` the other way around.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Forward,
    Backward,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Forward => Side::Backward,
            Side::Backward => Side::Forward,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Forward => "forward",
            Side::Backward => "backward",
        })
    }
}

/// One directed pair of equal-length tuples; `left` lives in the side's
/// source model, `right` in its target.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirectedPair {
    pub side: Side,
    pub left: Vec<u32>,
    pub right: Vec<u32>,
}

impl DirectedPair {
    pub fn new(side: Side, left: Vec<u32>, right: Vec<u32>) -> Self {
        DirectedPair { side, left, right }
    }

    pub fn ty(&self) -> u32 {
        self.left.len() as u32
    }
}

/// An ordered set of directed pairs. Iteration order is deterministic:
/// forward pairs before backward ones, then lexicographic.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PairSet {
    pairs: std::collections::BTreeSet<DirectedPair>,
}

impl PairSet {
    pub fn new() -> Self {
        PairSet::default()
    }

    pub fn insert(&mut self, pair: DirectedPair) {
        self.pairs.insert(pair);
    }

    pub fn remove(&mut self, pair: &DirectedPair) -> bool {
        self.pairs.remove(pair)
    }

    pub fn contains(&self, side: Side, left: &[u32], right: &[u32]) -> bool {
        // Membership probe without allocation on the happy path is not worth
        // the complexity at these sizes.
        self.pairs.contains(&DirectedPair {
            side,
            left: left.to_vec(),
            right: right.to_vec(),
        })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &DirectedPair> {
        self.pairs.iter()
    }

    pub fn is_subset(&self, other: &PairSet) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    pub fn side_pairs(&self, side: Side) -> impl Iterator<Item = &DirectedPair> {
        self.pairs.iter().filter(move |p| p.side == side)
    }
}

impl FromIterator<DirectedPair> for PairSet {
    fn from_iter<T: IntoIterator<Item = DirectedPair>>(iter: T) -> Self {
        PairSet {
            pairs: iter.into_iter().collect(),
        }
    }
}

/// Key of a proper decomposition-tree vertex: the molecular connective's name
/// and the vertex path address.
pub type VertexKey = (String, VertexAddr);

/// A directed relation family: the global relation `Z` plus one relation per
/// proper decomposition-tree vertex. Root vertices and `id` leaves are
/// identified with `Z`; the family invariant keeps `Z` inside every vertex
/// relation at the vertex's type.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BisimFamily {
    pub z: PairSet,
    pub per_vertex: BTreeMap<VertexKey, PairSet>,
}

impl BisimFamily {
    pub fn relation(&self, rel: &RelRef) -> Option<&PairSet> {
        match rel {
            RelRef::Z => Some(&self.z),
            RelRef::Vertex { mol, addr } => self.per_vertex.get(&(mol.clone(), addr.clone())),
        }
    }

    pub fn total_pairs(&self) -> usize {
        self.z.len() + self.per_vertex.values().map(PairSet::len).sum::<usize>()
    }
}

/// The vertex keys a family over this connective set must provide: every
/// non-root vertex of every decomposition tree that is not an `id` leaf.
pub fn required_vertex_keys(set: &ConnectiveSet) -> Vec<VertexKey> {
    let mut keys = Vec::new();
    for m in set.moleculars() {
        for (addr, node) in m.vertices() {
            if addr.is_root() || matches!(node, TreeNode::Id { .. }) {
                continue;
            }
            keys.push((m.name.clone(), addr));
        }
    }
    keys
}
