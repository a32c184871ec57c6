//! Streaming triangle estimation under a bounded memory window.
//!
//! The crate provides the naive and priority edge sampling estimators, exact
//! oracles for ground truth, the analytic variance and RSE predictors, and an
//! experiment harness that checks them against each other.

pub mod analysis;
pub mod error;
pub mod estimators;
pub mod generate;
pub mod graph;
pub mod harness;
pub mod oracle;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use estimators::{EstimateResult, Method};
pub use graph::{Edge, EdgeList, NodeId, StreamSeed};
pub use oracle::GraphStats;
