//! CSV artifacts. Every file has a header row, is UTF-8 and newline
//! terminated. Floats use the shortest representation that parses back to
//! the same value; absent values are empty fields.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{RatioReport, RunSummary, ShuffleMode, SweepReport};
use crate::error::Result;
use crate::estimators::Method;

pub const RUNS_HEADER: &str = "run,seed,method,p,q,estimate,triangles_observed,candidate_wedges,subgraph_edges,pool_size,sample_size,estimated_rse";
pub const SUMMARY_HEADER: &str = "method,p,pool,runs,base_seed,shuffle,N,M,triangles,wedges,shared_pairs,clustering,mean_estimate,sd_estimate,observed_rse,predicted_rse,predicted_variance,mean_triangles_observed,mean_sample_size";
pub const RATIO_HEADER: &str = "N,M,triangles,wedges,clustering,size_times_clustering,target_rse,p_nes,p_pes,pool,saturated,nes_observed_rse,pes_observed_rse,p_nes_observed,p_pes_observed,observed_p_ratio,predicted_p_ratio,nes_mean_sample_size,pes_mean_sample_size,observed_sample_ratio";
pub const SWEEP_HEADER: &str = "target_rse,observed_rse,predicted_rse,mean_triangles_observed,mean_sample_size,p,pool";

#[derive(Debug, Serialize)]
struct RunRecord {
    run: usize,
    seed: u64,
    method: Method,
    p: f64,
    q: Option<f64>,
    estimate: f64,
    triangles_observed: u64,
    candidate_wedges: Option<u64>,
    subgraph_edges: u64,
    pool_size: Option<u64>,
    sample_size: u64,
    estimated_rse: Option<f64>,
}

/// One row of the summary CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRecord {
    pub method: Method,
    pub p: f64,
    pub pool: Option<usize>,
    pub runs: usize,
    pub base_seed: u64,
    pub shuffle: String,
    #[serde(rename = "N")]
    pub nodes: u64,
    #[serde(rename = "M")]
    pub edges: u64,
    pub triangles: u64,
    pub wedges: u64,
    pub shared_pairs: u64,
    pub clustering: f64,
    pub mean_estimate: f64,
    pub sd_estimate: f64,
    pub observed_rse: f64,
    pub predicted_rse: Option<f64>,
    pub predicted_variance: Option<f64>,
    pub mean_triangles_observed: f64,
    pub mean_sample_size: f64,
}

impl From<&RunSummary> for SummaryRecord {
    fn from(s: &RunSummary) -> Self {
        SummaryRecord {
            method: s.config.method,
            p: s.config.p,
            pool: s.config.pool,
            runs: s.runs.len(),
            base_seed: s.config.base_seed,
            shuffle: s.config.shuffle.to_string(),
            nodes: s.oracle.nodes,
            edges: s.oracle.edges,
            triangles: s.oracle.triangles,
            wedges: s.oracle.wedges,
            shared_pairs: s.oracle.shared_pairs,
            clustering: s.oracle.clustering,
            mean_estimate: s.mean_estimate,
            sd_estimate: s.sd_estimate,
            observed_rse: s.observed_rse,
            predicted_rse: s.predicted_rse,
            predicted_variance: s.predicted_variance,
            mean_triangles_observed: s.mean_triangles_observed,
            mean_sample_size: s.mean_sample_size,
        }
    }
}

impl SummaryRecord {
    pub fn shuffle_mode(&self) -> Result<ShuffleMode> {
        self.shuffle.parse()
    }
}

#[derive(Debug, Serialize)]
struct RatioRecord {
    #[serde(rename = "N")]
    nodes: u64,
    #[serde(rename = "M")]
    edges: u64,
    triangles: u64,
    wedges: u64,
    clustering: f64,
    size_times_clustering: f64,
    target_rse: f64,
    p_nes: f64,
    p_pes: f64,
    pool: usize,
    saturated: bool,
    nes_observed_rse: f64,
    pes_observed_rse: f64,
    p_nes_observed: f64,
    p_pes_observed: f64,
    observed_p_ratio: f64,
    predicted_p_ratio: f64,
    nes_mean_sample_size: f64,
    pes_mean_sample_size: f64,
    observed_sample_ratio: f64,
}

#[derive(Debug, Serialize)]
struct SweepRecord {
    target_rse: f64,
    observed_rse: f64,
    predicted_rse: Option<f64>,
    mean_triangles_observed: f64,
    mean_sample_size: f64,
    p: f64,
    pool: Option<usize>,
}

fn write_records<W: Write, T: Serialize>(
    out: W,
    header: &str,
    records: impl IntoIterator<Item = T>,
) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(header.split(','))?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_runs_csv<W: Write>(summary: &RunSummary, out: W) -> Result<()> {
    let records = summary.runs.iter().enumerate().map(|(i, r)| RunRecord {
        run: i,
        seed: summary.config.seed_for_run(i),
        method: r.method,
        p: r.p,
        q: r.q,
        estimate: r.estimate,
        triangles_observed: r.triangles_observed,
        candidate_wedges: r.candidate_wedges,
        subgraph_edges: r.subgraph_edges,
        pool_size: r.pool_size,
        sample_size: r.sample_size,
        estimated_rse: r.estimated_rse,
    });
    write_records(out, RUNS_HEADER, records)
}

pub fn write_summary_csv<'a, W: Write>(
    summaries: impl IntoIterator<Item = &'a RunSummary>,
    out: W,
) -> Result<()> {
    write_records(out, SUMMARY_HEADER, summaries.into_iter().map(SummaryRecord::from))
}

pub fn read_summary_csv<R: Read>(source: R) -> Result<Vec<SummaryRecord>> {
    let mut r = csv::Reader::from_reader(source);
    Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
}

pub fn write_ratio_csv<'a, W: Write>(
    reports: impl IntoIterator<Item = &'a RatioReport>,
    out: W,
) -> Result<()> {
    let records = reports.into_iter().map(|r| RatioRecord {
        nodes: r.oracle.nodes,
        edges: r.oracle.edges,
        triangles: r.oracle.triangles,
        wedges: r.oracle.wedges,
        clustering: r.oracle.clustering,
        size_times_clustering: r.size_times_clustering,
        target_rse: r.target_rse,
        p_nes: r.p_nes,
        p_pes: r.p_pes,
        pool: r.pool,
        saturated: r.saturated,
        nes_observed_rse: r.nes.observed_rse,
        pes_observed_rse: r.pes.observed_rse,
        p_nes_observed: r.p_nes_observed,
        p_pes_observed: r.p_pes_observed,
        observed_p_ratio: r.observed_p_ratio,
        predicted_p_ratio: r.predicted_p_ratio,
        nes_mean_sample_size: r.nes.mean_sample_size,
        pes_mean_sample_size: r.pes.mean_sample_size,
        observed_sample_ratio: r.observed_sample_ratio,
    });
    write_records(out, RATIO_HEADER, records)
}

pub fn write_sweep_csv<W: Write>(report: &SweepReport, out: W) -> Result<()> {
    let records = report.rows.iter().map(|r| SweepRecord {
        target_rse: r.target_rse,
        observed_rse: r.observed_rse,
        predicted_rse: r.predicted_rse,
        mean_triangles_observed: r.mean_triangles_observed,
        mean_sample_size: r.mean_sample_size,
        p: r.p,
        pool: r.pool,
    });
    write_records(out, SWEEP_HEADER, records)
}
