//! Fixtures and brute-force counters for integration tests.
#![allow(dead_code)]

use pes_core::graph::EdgeList;

/// The toy graph used throughout the worked PES example.
pub fn toy_graph() -> EdgeList {
    EdgeList::from_pairs([
        (1u64, 2u64),
        (1, 3),
        (1, 4),
        (1, 5),
        (2, 3),
        (1, 6),
        (6, 7),
        (6, 8),
        (6, 9),
        (8, 9),
        (6, 10),
        (9, 10),
        (6, 11),
    ])
}

/// The worked example's stream order.
pub fn toy_stream() -> EdgeList {
    EdgeList::from_pairs([
        (1u64, 4u64),
        (6, 8),
        (6, 7),
        (1, 6),
        (6, 11),
        (2, 3),
        (9, 10),
        (1, 2),
        (6, 10),
        (1, 5),
        (6, 9),
        (1, 3),
        (8, 9),
    ])
}

pub fn star(leaves: u64) -> EdgeList {
    EdgeList::from_pairs((1..=leaves).map(|v| (0u64, v)))
}

pub fn complete(n: u64) -> EdgeList {
    EdgeList::from_pairs((0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))))
}

pub mod brute {
    use std::collections::{BTreeSet, HashSet};

    use pes_core::graph::{EdgeList, NodeId};

    fn sets(list: &EdgeList) -> (Vec<NodeId>, HashSet<(NodeId, NodeId)>) {
        let nodes: BTreeSet<NodeId> = list.iter().flat_map(|e| [e.u(), e.v()]).collect();
        let edges = list.iter().map(|e| (e.u(), e.v())).collect();
        (nodes.into_iter().collect(), edges)
    }

    /// All node triples, then all triangle pairs.
    pub fn triangles_and_shared(list: &EdgeList) -> (u64, u64) {
        let (nodes, edges) = sets(list);
        let adj = |a: NodeId, b: NodeId| edges.contains(&(a.min(b), a.max(b)));
        let mut tris = Vec::new();
        for i in 0..nodes.len() {
            for j in i + 1..nodes.len() {
                for k in j + 1..nodes.len() {
                    let (a, b, c) = (nodes[i], nodes[j], nodes[k]);
                    if adj(a, b) && adj(a, c) && adj(b, c) {
                        tris.push([a, b, c]);
                    }
                }
            }
        }
        let mut shared = 0;
        for x in 0..tris.len() {
            for y in x + 1..tris.len() {
                let common = tris[x].iter().filter(|v| tris[y].contains(v)).count();
                if common == 2 {
                    shared += 1;
                }
            }
        }
        (tris.len() as u64, shared)
    }

    /// Paths of length two, enumerated by center and unordered endpoint pair.
    pub fn wedges(list: &EdgeList) -> u64 {
        let (nodes, edges) = sets(list);
        let adj = |a: NodeId, b: NodeId| edges.contains(&(a.min(b), a.max(b)));
        let mut count = 0;
        for &c in &nodes {
            for i in 0..nodes.len() {
                for j in i + 1..nodes.len() {
                    if nodes[i] != c && nodes[j] != c && adj(c, nodes[i]) && adj(c, nodes[j]) {
                        count += 1;
                    }
                }
            }
        }
        count
    }
}
