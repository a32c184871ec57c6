//! Seeded random graph generators for desk-scale experiments and fixtures.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::EdgeList;

/// G(n, p): each of the C(n, 2) node pairs is an edge independently with probability `p`.
/// Nodes are labelled `0..n`; isolated nodes do not appear in the edge list.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> EdgeList {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for a in 0..n as u64 {
        for b in (a + 1)..n as u64 {
            if rng.gen::<f64>() < p {
                pairs.push((a, b));
            }
        }
    }
    EdgeList::from_pairs(pairs)
}

/// Preferential attachment: starts from a star on `m + 1` nodes, then every new
/// node links to `m` distinct existing nodes chosen with probability
/// proportional to degree.
pub fn barabasi_albert(n: usize, m: usize, seed: u64) -> EdgeList {
    assert!(m >= 1 && m < n, "barabasi_albert needs 1 <= m < n");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<(u64, u64)> = (1..=m as u64).map(|v| (0, v)).collect();
    // One entry per edge endpoint: uniform picks are degree-proportional.
    let mut endpoints: Vec<u64> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    for v in (m + 1) as u64..n as u64 {
        let mut targets = BTreeSet::new();
        while targets.len() < m {
            targets.insert(endpoints[rng.gen_range(0..endpoints.len())]);
        }
        for t in targets {
            pairs.push((t, v));
            endpoints.push(t);
            endpoints.push(v);
        }
    }
    EdgeList::from_pairs(pairs)
}
