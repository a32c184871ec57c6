use std::collections::{BTreeSet, HashMap, HashSet};

use crate::graph::{Edge, NodeId};

/// The sampled subgraph `g`: accepted stream edges with per-node incidence.
///
/// Neighbor lists keep insertion order so that candidate enumeration, and
/// therefore the sequence of random draws, is reproducible.
#[derive(Debug, Clone, Default)]
pub struct SampledSubgraph {
    edges: HashSet<Edge>,
    incidence: HashMap<NodeId, Vec<NodeId>>,
}

impl SampledSubgraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns `false` if the edge was already present.
    pub fn insert(&mut self, e: Edge) -> bool {
        if !self.edges.insert(e) {
            return false;
        }
        let (u, v) = e.endpoints();
        self.incidence.entry(u).or_default().push(v);
        self.incidence.entry(v).or_default().push(u);
        true
    }

    pub fn contains(&self, e: &Edge) -> bool {
        self.edges.contains(e)
    }

    pub fn contains_pair(&self, a: NodeId, b: NodeId) -> bool {
        Edge::new(a, b).is_some_and(|e| self.edges.contains(&e))
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        self.incidence.get(&v).map_or(&[], Vec::as_slice)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

/// Sampled-edge neighbors of `v`; empty if `v` has not been seen.
pub fn neighbors_in_subgraph(g: &SampledSubgraph, v: NodeId) -> BTreeSet<NodeId> {
    g.neighbors(v).iter().copied().collect()
}
