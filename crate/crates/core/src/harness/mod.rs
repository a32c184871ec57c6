//! Repeated-run experiments: k independent estimator passes, observed versus
//! predicted RSE, sample-size accounting and NES/PES ratio studies.
//!
//! Run `i` uses seed `base_seed + i`. Results are ordered by run index, so a
//! parallel experiment reproduces the serial one exactly.

mod report;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use report::{
    read_summary_csv, write_ratio_csv, write_runs_csv, write_summary_csv, write_sweep_csv,
    SummaryRecord, RATIO_HEADER, RUNS_HEADER, SUMMARY_HEADER, SWEEP_HEADER,
};

use crate::analysis::{
    calibrate_nes, calibrate_pes, nes_pes_ratio, observed_rse, pes_variance, PesParams,
};
use crate::error::{Error, Result};
use crate::estimators::{
    check_pool, check_probability, nes_run, pes_run, EstimateResult, Method, SeededRandom,
};
use crate::graph::{read_edge_list_file, shuffle_stream, EdgeList, ParseOptions, StreamSeed};
use crate::oracle::{stats_of, GraphStats};

/// A parsed graph together with its exact statistics.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub edges: EdgeList,
    pub stats: GraphStats,
}

impl Dataset {
    pub fn new(edges: EdgeList) -> Self {
        let stats = stats_of(&edges);
        Dataset { edges, stats }
    }

    /// Parses `path` and runs the oracle. `options.max_edges` bounds the
    /// work the oracle may be asked to do.
    pub fn load(path: impl AsRef<Path>, options: &ParseOptions) -> Result<Self> {
        Ok(Dataset::new(read_edge_list_file(path, options)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ShuffleMode {
    /// Every run streams its own permutation.
    #[default]
    PerRun,
    /// One permutation, derived from the base seed, shared by all runs.
    Fixed,
    /// The input order as parsed.
    None,
}

impl fmt::Display for ShuffleMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ShuffleMode::PerRun => "per-run",
            ShuffleMode::Fixed => "fixed",
            ShuffleMode::None => "none",
        })
    }
}

impl FromStr for ShuffleMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "per-run" => Ok(ShuffleMode::PerRun),
            "fixed" => Ok(ShuffleMode::Fixed),
            "none" => Ok(ShuffleMode::None),
            other => Err(Error::invalid(format!("unknown shuffle mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub method: Method,
    pub p: f64,
    /// Pool size; required for PES.
    pub pool: Option<usize>,
    pub runs: usize,
    pub base_seed: u64,
    pub shuffle: ShuffleMode,
    /// Upper bound on concurrent runs; 0 uses every available core.
    pub jobs: usize,
}

impl ExperimentConfig {
    pub fn nes(p: f64, runs: usize, base_seed: u64) -> Self {
        ExperimentConfig {
            method: Method::Nes,
            p,
            pool: None,
            runs,
            base_seed,
            shuffle: ShuffleMode::PerRun,
            jobs: 0,
        }
    }

    pub fn pes(p: f64, pool: usize, runs: usize, base_seed: u64) -> Self {
        ExperimentConfig {
            method: Method::Pes,
            pool: Some(pool),
            ..ExperimentConfig::nes(p, runs, base_seed)
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_probability(self.p)?;
        if self.method == Method::Pes {
            check_pool(self.pool.ok_or_else(|| Error::invalid("PES needs a pool size"))?)?;
        }
        if self.runs < 2 {
            return Err(Error::InsufficientRuns(self.runs));
        }
        Ok(())
    }

    pub fn seed_for_run(&self, index: usize) -> u64 {
        self.base_seed.wrapping_add(index as u64)
    }
}

/// Decorrelates the stream permutation from the estimator's own draws,
/// which are seeded with the raw run seed.
fn stream_seed(seed: u64) -> StreamSeed {
    let mut z = seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    StreamSeed(z ^ (z >> 31))
}

/// One estimator pass, shuffled according to `shuffle`.
pub fn single_run(
    edges: &EdgeList,
    method: Method,
    p: f64,
    pool: Option<usize>,
    seed: u64,
    shuffle: ShuffleMode,
) -> Result<EstimateResult> {
    let shuffled;
    let stream = match shuffle {
        ShuffleMode::None => edges,
        ShuffleMode::PerRun | ShuffleMode::Fixed => {
            shuffled = shuffle_stream(edges, stream_seed(seed));
            &shuffled
        }
    };
    run_on_stream(stream, method, p, pool, seed)
}

fn run_on_stream(
    stream: &EdgeList,
    method: Method,
    p: f64,
    pool: Option<usize>,
    seed: u64,
) -> Result<EstimateResult> {
    let rng = SeededRandom::new(seed);
    match method {
        Method::Nes => nes_run(stream, p, rng),
        Method::Pes => pes_run(
            stream,
            p,
            pool.ok_or_else(|| Error::invalid("PES needs a pool size"))?,
            rng,
        ),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub config: ExperimentConfig,
    pub oracle: GraphStats,
    /// Ordered by run index.
    pub runs: Vec<EstimateResult>,
    pub mean_estimate: f64,
    /// Sample standard deviation of the estimates (divides by `k - 1`).
    pub sd_estimate: f64,
    pub observed_rse: f64,
    pub mean_triangles_observed: f64,
    pub mean_sample_size: f64,
    /// `(mean triangles observed)^(-1/2)`.
    pub predicted_rse: Option<f64>,
    /// Analytic PES variance at `(p, n)` when the saturated-pool theory applies.
    pub predicted_variance: Option<f64>,
}

impl RunSummary {
    pub fn standard_error(&self) -> f64 {
        self.sd_estimate / (self.runs.len() as f64).sqrt()
    }

    /// Sample variance of the estimates (divides by `k - 1`).
    pub fn variance(&self) -> f64 {
        self.sd_estimate * self.sd_estimate
    }
}

fn thread_pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Infeasible(format!("cannot start worker threads: {e}")))
}

pub fn run_experiment(data: &Dataset, config: &ExperimentConfig) -> Result<RunSummary> {
    config.validate()?;
    let truth = data.stats.triangles;
    if truth == 0 {
        return Err(Error::TriangleFree);
    }

    let fixed = match config.shuffle {
        ShuffleMode::Fixed => Some(shuffle_stream(&data.edges, stream_seed(config.base_seed))),
        ShuffleMode::None => Some(data.edges.clone()),
        ShuffleMode::PerRun => None,
    };
    let run = |i: usize| -> Result<EstimateResult> {
        let seed = config.seed_for_run(i);
        let result = match &fixed {
            Some(stream) => run_on_stream(stream, config.method, config.p, config.pool, seed),
            None => single_run(
                &data.edges,
                config.method,
                config.p,
                config.pool,
                seed,
                ShuffleMode::PerRun,
            ),
        };
        result.map_err(|e| Error::Run {
            index: i,
            source: Box::new(e),
        })
    };
    let runs: Vec<EstimateResult> = thread_pool(config.jobs)?
        .install(|| (0..config.runs).into_par_iter().map(run).collect::<Result<_>>())?;

    summarize(config.clone(), data.stats, runs)
}

fn summarize(
    config: ExperimentConfig,
    oracle: GraphStats,
    runs: Vec<EstimateResult>,
) -> Result<RunSummary> {
    let k = runs.len() as f64;
    let estimates: Vec<f64> = runs.iter().map(|r| r.estimate).collect();
    let mean_estimate = estimates.iter().sum::<f64>() / k;
    let sd_estimate = (estimates
        .iter()
        .map(|x| (x - mean_estimate) * (x - mean_estimate))
        .sum::<f64>()
        / (k - 1.0))
        .sqrt();
    let observed = observed_rse(&estimates, oracle.triangles as f64)?;
    let mean_triangles_observed = runs.iter().map(|r| r.triangles_observed as f64).sum::<f64>() / k;
    let mean_sample_size = runs.iter().map(|r| r.sample_size as f64).sum::<f64>() / k;
    let predicted_rse = (mean_triangles_observed > 0.0).then(|| mean_triangles_observed.powf(-0.5));
    let predicted_variance = match (config.method, config.pool) {
        (Method::Pes, Some(n)) => PesParams::new(config.p, n)
            .and_then(|params| pes_variance(&oracle, params))
            .ok()
            .map(|v| v.total),
        _ => None,
    };
    Ok(RunSummary {
        config,
        oracle,
        runs,
        mean_estimate,
        sd_estimate,
        observed_rse: observed,
        mean_triangles_observed,
        mean_sample_size,
        predicted_rse,
        predicted_variance,
    })
}

/// NES against PES at a common accuracy target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub oracle: GraphStats,
    pub target_rse: f64,
    /// Calibrated NES probability.
    pub p_nes: f64,
    /// Calibrated PES probability and pool size.
    pub p_pes: f64,
    pub pool: usize,
    /// Some calibration hit a bound (`p = 1` or `n = Λ`); the ratio is not meaningful.
    pub saturated: bool,
    pub nes: RunSummary,
    pub pes: RunSummary,
    /// NES probability rescaled to hit the target exactly, using the
    /// observed RSE and `RSE ∝ 1/p`.
    pub p_nes_observed: f64,
    /// PES probability rescaled with `RSE ∝ 1/√p` (pool tied to `pM`).
    pub p_pes_observed: f64,
    /// `p_nes_observed / p_pes_observed`.
    pub observed_p_ratio: f64,
    /// `M / (p_nes_observed · Λ)`.
    pub predicted_p_ratio: f64,
    /// NES mean sample size over PES mean sample size.
    pub observed_sample_ratio: f64,
    /// `N · C`, the size axis of the comparison plots.
    pub size_times_clustering: f64,
}

pub fn ratio_experiment(
    data: &Dataset,
    target_rse: f64,
    runs: usize,
    base_seed: u64,
    jobs: usize,
) -> Result<RatioReport> {
    let stats = data.stats;
    if stats.triangles == 0 {
        return Err(Error::TriangleFree);
    }
    let nes_cal = calibrate_nes(target_rse, stats.triangles)?;
    let pes_cal = calibrate_pes(&stats, target_rse)?;

    let mut nes_cfg = ExperimentConfig::nes(nes_cal.p, runs, base_seed);
    nes_cfg.jobs = jobs;
    let mut pes_cfg = ExperimentConfig::pes(pes_cal.p, pes_cal.n, runs, base_seed);
    pes_cfg.jobs = jobs;
    let nes = run_experiment(data, &nes_cfg)?;
    let pes = run_experiment(data, &pes_cfg)?;

    let p_nes_observed = nes_cal.p * nes.observed_rse / target_rse;
    let p_pes_observed = pes_cal.p * (pes.observed_rse / target_rse).powi(2);
    let predicted_p_ratio = nes_pes_ratio(stats.edges, stats.wedges, p_nes_observed.min(1.0))?;
    Ok(RatioReport {
        oracle: stats,
        target_rse,
        p_nes: nes_cal.p,
        p_pes: pes_cal.p,
        pool: pes_cal.n,
        saturated: nes_cal.clamped || pes_cal.clamped_p || pes_cal.capped_n,
        p_nes_observed,
        p_pes_observed,
        observed_p_ratio: p_nes_observed / p_pes_observed,
        predicted_p_ratio,
        observed_sample_ratio: nes.mean_sample_size / pes.mean_sample_size,
        size_times_clustering: stats.nodes as f64 * stats.clustering,
        nes,
        pes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub target_rse: f64,
    pub p: f64,
    pub pool: Option<usize>,
    pub observed_rse: f64,
    pub predicted_rse: Option<f64>,
    pub mean_triangles_observed: f64,
    pub mean_sample_size: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
}

/// Calibrates `method` to each target from the oracle and runs it `runs` times.
pub fn rse_sweep(
    data: &Dataset,
    targets: &[f64],
    method: Method,
    runs: usize,
    base_seed: u64,
    jobs: usize,
) -> Result<SweepReport> {
    let mut rows = Vec::with_capacity(targets.len());
    for &target in targets {
        let mut cfg = match method {
            Method::Nes => ExperimentConfig::nes(calibrate_nes(target, data.stats.triangles)?.p, runs, base_seed),
            Method::Pes => {
                let cal = calibrate_pes(&data.stats, target)?;
                ExperimentConfig::pes(cal.p, cal.n, runs, base_seed)
            }
        };
        cfg.jobs = jobs;
        let summary = run_experiment(data, &cfg)?;
        rows.push(SweepRow {
            target_rse: target,
            p: cfg.p,
            pool: cfg.pool,
            observed_rse: summary.observed_rse,
            predicted_rse: summary.predicted_rse,
            mean_triangles_observed: summary.mean_triangles_observed,
            mean_sample_size: summary.mean_sample_size,
        });
    }
    Ok(SweepReport { rows })
}
