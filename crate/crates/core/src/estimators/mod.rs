//! Single-pass streaming triangle estimators.
//!
//! [`NesEstimator`] keeps each edge with probability `p` and counts wedges of
//! the sample closed by later edges. [`PesEstimator`] samples the first edge
//! of a wedge the same way but keeps the wedge itself in a reservoir, which
//! raises the chance of observing a triangle from `p^2` to `p*q`.
//!
//! All randomness is drawn from an explicit [`RandomSource`].

mod nes;
mod pes;
pub mod pool;
pub mod random;
pub mod subgraph;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use nes::{nes_run, NesEstimator};
pub use pes::{pes_run, PesEstimator};
pub use pool::{Offer, Wedge, WedgePool};
pub use random::{Draw, RandomSource, ScriptedRandom, SeededRandom};
pub use subgraph::{neighbors_in_subgraph, SampledSubgraph};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Nes,
    Pes,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Nes => "nes",
            Method::Pes => "pes",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nes" => Ok(Method::Nes),
            "pes" => Ok(Method::Pes),
            other => Err(Error::invalid(format!("unknown method {other:?}"))),
        }
    }
}

/// Outputs of one estimator pass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateResult {
    pub method: Method,
    pub estimate: f64,
    pub p: f64,
    /// Final retention probability `min(1, n / candidates)`; PES only.
    pub q: Option<f64>,
    /// Triangles seen during the pass: closed wedges of `g` (NES) or closed pool wedges (PES).
    pub triangles_observed: u64,
    /// PES only.
    pub candidate_wedges: Option<u64>,
    pub subgraph_edges: u64,
    /// Final pool occupancy; PES only.
    pub pool_size: Option<u64>,
    /// `|g|` for NES, `|g| + |pool|` for PES.
    pub sample_size: u64,
    /// `triangles_observed^(-1/2)`, absent when nothing was observed.
    pub estimated_rse: Option<f64>,
}

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if p > 0.0 && p <= 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("p must lie in (0, 1], got {p}")))
    }
}

pub(crate) fn check_pool(n: usize) -> Result<()> {
    if n >= 1 {
        Ok(())
    } else {
        Err(Error::invalid(format!("pool size n must be at least 1, got {n}")))
    }
}
