use super::random::RandomSource;
use super::subgraph::SampledSubgraph;
use super::{check_probability, EstimateResult, Method};
use crate::analysis::nes_rse_simple;
use crate::error::Result;
use crate::graph::{Edge, EdgeList};

/// Naive edge sampling over a stream.
#[derive(Debug, Clone)]
pub struct NesEstimator<R> {
    p: f64,
    g: SampledSubgraph,
    closed: u64,
    rng: R,
}

impl<R: RandomSource> NesEstimator<R> {
    pub fn new(p: f64, rng: R) -> Result<Self> {
        check_probability(p)?;
        Ok(NesEstimator {
            p,
            g: SampledSubgraph::new(),
            closed: 0,
            rng,
        })
    }

    /// Samples `e` into `g`, then counts wedges of `g` that `e` closes.
    /// Returns the number closed by this edge.
    pub fn process(&mut self, e: Edge) -> u64 {
        if self.rng.chance(self.p) {
            self.g.insert(e);
        }
        let (x, y) = e.endpoints();
        let (nx, ny) = (self.g.neighbors(x), self.g.neighbors(y));
        let (scan, anchor) = if nx.len() <= ny.len() { (nx, y) } else { (ny, x) };
        let closed = scan
            .iter()
            .filter(|&&c| c != x && c != y && self.g.contains_pair(c, anchor))
            .count() as u64;
        self.closed += closed;
        closed
    }

    pub fn subgraph(&self) -> &SampledSubgraph {
        &self.g
    }

    pub fn triangles_observed(&self) -> u64 {
        self.closed
    }

    pub fn result(&self) -> EstimateResult {
        let g = self.g.edge_count() as u64;
        EstimateResult {
            method: Method::Nes,
            estimate: self.closed as f64 / (self.p * self.p),
            p: self.p,
            q: None,
            triangles_observed: self.closed,
            candidate_wedges: None,
            subgraph_edges: g,
            pool_size: None,
            sample_size: g,
            estimated_rse: nes_rse_simple(self.closed),
        }
    }
}

/// One NES pass over `stream`.
pub fn nes_run<R: RandomSource>(stream: &EdgeList, p: f64, rng: R) -> Result<EstimateResult> {
    let mut est = NesEstimator::new(p, rng)?;
    for &e in stream {
        est.process(e);
    }
    Ok(est.result())
}
