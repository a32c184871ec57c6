use super::pool::{Wedge, WedgePool};
use super::random::RandomSource;
use super::subgraph::SampledSubgraph;
use super::{check_pool, check_probability, EstimateResult, Method};
use crate::analysis::pes_rse_simple;
use crate::error::Result;
use crate::graph::{Edge, EdgeList};

/// Priority edge sampling over a stream.
///
/// Per edge `e`, in order: `e` joins `g` with probability `p`; pool wedges
/// closed by `e` are labelled closed; every wedge formed by `e` and an edge
/// of `g` sharing one endpoint is offered to the pool. Candidate formation
/// consults `g` whether or not `e` itself was accepted.
#[derive(Debug, Clone)]
pub struct PesEstimator<R> {
    p: f64,
    g: SampledSubgraph,
    pool: WedgePool,
    rng: R,
}

impl<R: RandomSource> PesEstimator<R> {
    pub fn new(p: f64, pool_size: usize, rng: R) -> Result<Self> {
        check_probability(p)?;
        check_pool(pool_size)?;
        Ok(PesEstimator {
            p,
            g: SampledSubgraph::new(),
            pool: WedgePool::new(pool_size),
            rng,
        })
    }

    /// Returns the number of pool wedges newly closed by `e`.
    pub fn process(&mut self, e: Edge) -> u64 {
        let PesEstimator { p, g, pool, rng } = self;
        if rng.chance(*p) {
            g.insert(e);
        }
        let closed = pool.close_by(e);
        let (x, y) = e.endpoints();
        for (center, outer) in [(x, y), (y, x)] {
            for &c in g.neighbors(center) {
                if c == outer {
                    continue;
                }
                let w = Wedge::new(outer, center, c).expect("distinct nodes in a simple graph");
                pool.offer(w, rng);
            }
        }
        closed
    }

    pub fn subgraph(&self) -> &SampledSubgraph {
        &self.g
    }

    pub fn pool(&self) -> &WedgePool {
        &self.pool
    }

    /// Current retention probability `min(1, n / candidates)`.
    pub fn q(&self) -> f64 {
        self.pool.retention()
    }

    pub fn result(&self) -> EstimateResult {
        let q = self.pool.retention();
        let closed = self.pool.closed();
        let g = self.g.edge_count() as u64;
        let pool = self.pool.len() as u64;
        EstimateResult {
            method: Method::Pes,
            estimate: closed as f64 / (self.p * q),
            p: self.p,
            q: Some(q),
            triangles_observed: closed,
            candidate_wedges: Some(self.pool.candidates()),
            subgraph_edges: g,
            pool_size: Some(pool),
            sample_size: g + pool,
            estimated_rse: pes_rse_simple(closed),
        }
    }

    pub fn into_parts(self) -> (SampledSubgraph, WedgePool, R) {
        (self.g, self.pool, self.rng)
    }
}

/// One PES pass over `stream` with sampling probability `p` and pool size `n`.
pub fn pes_run<R: RandomSource>(
    stream: &EdgeList,
    p: f64,
    n: usize,
    rng: R,
) -> Result<EstimateResult> {
    let mut est = PesEstimator::new(p, n, rng)?;
    for &e in stream {
        est.process(e);
    }
    Ok(est.result())
}
