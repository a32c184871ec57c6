//! Exact in-memory ground truth: triangles, wedges, shared-triangle pairs and
//! global clustering.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::graph::{Edge, EdgeList, NodeId};

/// Symmetric adjacency over a normalized edge list.
#[derive(Debug, Clone, Default)]
pub struct AdjacencyGraph {
    adjacency: HashMap<NodeId, BTreeSet<NodeId>>,
    edge_count: usize,
}

impl AdjacencyGraph {
    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Neighbors of `v` in ascending order; `None` if `v` is not in the graph.
    pub fn neighbors(&self, v: NodeId) -> Option<&BTreeSet<NodeId>> {
        self.adjacency.get(&v)
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency.get(&v).map_or(0, BTreeSet::len)
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.adjacency.keys().copied()
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        self.adjacency.get(&a).is_some_and(|n| n.contains(&b))
    }
}

pub fn build_adjacency(list: &EdgeList) -> AdjacencyGraph {
    let mut adjacency: HashMap<NodeId, BTreeSet<NodeId>> = HashMap::new();
    for e in list {
        let (u, v) = e.endpoints();
        adjacency.entry(u).or_default().insert(v);
        adjacency.entry(v).or_default().insert(u);
    }
    AdjacencyGraph {
        adjacency,
        edge_count: list.edge_count(),
    }
}

/// Ground-truth statistics of a graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphStats {
    pub nodes: u64,
    pub edges: u64,
    pub triangles: u64,
    pub wedges: u64,
    pub shared_pairs: u64,
    pub clustering: f64,
}

impl GraphStats {
    pub const CSV_HEADER: &'static str = "N,M,triangles,wedges,shared_pairs,clustering";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.nodes, self.edges, self.triangles, self.wedges, self.shared_pairs, self.clustering
        )
    }
}

/// Degree-ordered forward enumeration. Calls `visit` once per triangle.
fn for_each_triangle(graph: &AdjacencyGraph, mut visit: impl FnMut(NodeId, NodeId, NodeId)) {
    let mut order: Vec<NodeId> = graph.nodes().collect();
    order.sort_unstable_by_key(|&v| (graph.degree(v), v));
    let rank: HashMap<NodeId, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();

    // Out-neighbors point to higher rank, kept sorted by rank for merging.
    let forward: Vec<Vec<usize>> = order
        .iter()
        .map(|v| {
            let mut out: Vec<usize> = graph.adjacency[v]
                .iter()
                .map(|w| rank[w])
                .filter(|&r| r > rank[v])
                .collect();
            out.sort_unstable();
            out
        })
        .collect();

    for (a, outs) in forward.iter().enumerate() {
        for &b in outs {
            let (mut i, mut j) = (0, 0);
            let (x, y) = (outs, &forward[b]);
            while i < x.len() && j < y.len() {
                match x[i].cmp(&y[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        visit(order[a], order[b], order[x[i]]);
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
    }
}

pub fn count_triangles(graph: &AdjacencyGraph) -> u64 {
    let mut count = 0;
    for_each_triangle(graph, |_, _, _| count += 1);
    count
}

pub fn count_wedges(graph: &AdjacencyGraph) -> u64 {
    graph
        .adjacency
        .values()
        .map(|n| {
            let d = n.len() as u64;
            d * d.saturating_sub(1) / 2
        })
        .sum()
}

/// Number of unordered triangle pairs sharing an edge: sum over edges of C(t_e, 2).
pub fn count_shared_pairs(graph: &AdjacencyGraph) -> u64 {
    triangles_and_shared_pairs(graph).1
}

fn triangles_and_shared_pairs(graph: &AdjacencyGraph) -> (u64, u64) {
    let mut per_edge: HashMap<Edge, u64> = HashMap::new();
    let mut triangles = 0;
    for_each_triangle(graph, |a, b, c| {
        triangles += 1;
        for (x, y) in [(a, b), (a, c), (b, c)] {
            *per_edge.entry(Edge::new(x, y).expect("distinct")).or_default() += 1;
        }
    });
    let shared = per_edge.values().map(|&t| t * (t - 1) / 2).sum();
    (triangles, shared)
}

pub fn stats(graph: &AdjacencyGraph) -> GraphStats {
    let (triangles, shared_pairs) = triangles_and_shared_pairs(graph);
    let wedges = count_wedges(graph);
    let clustering = if wedges > 0 {
        3.0 * triangles as f64 / wedges as f64
    } else {
        0.0
    };
    GraphStats {
        nodes: graph.node_count() as u64,
        edges: graph.edge_count() as u64,
        triangles,
        wedges,
        shared_pairs,
        clustering,
    }
}

/// Convenience: adjacency and statistics in one call.
pub fn stats_of(list: &EdgeList) -> GraphStats {
    stats(&build_adjacency(list))
}
