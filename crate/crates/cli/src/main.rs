use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use pes_core::analysis::{
    calibrate_nes, calibrate_pes, calibrate_pes_pool, pes_rse_full, pes_variance, PesParams,
};
use pes_core::graph::{read_edge_list_file, ParseOptions};
use pes_core::harness::{
    ratio_experiment, rse_sweep, run_experiment, single_run, write_ratio_csv, write_runs_csv,
    write_summary_csv, write_sweep_csv, Dataset, ExperimentConfig, ShuffleMode,
};
use pes_core::oracle::GraphStats;
use pes_core::{Error, Method};

/// Streaming triangle estimation with neighborhood and priority edge sampling.
///
/// Results go to stdout; diagnostics go to stderr. All randomness derives
/// from --seed.
#[derive(Debug, Parser)]
#[command(name = "pes", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact node, edge, triangle, wedge and shared-pair counts.
    Stats {
        #[command(flatten)]
        input: InputArgs,
        /// Print a CSV header and row instead of key=value text.
        #[arg(long)]
        csv: bool,
    },
    /// A single estimator pass over the stream.
    Estimate {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        method: MethodArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Stream order: a seeded permutation, or the file order.
        #[arg(long, default_value = "per-run", value_parser = ["per-run", "none"])]
        shuffle: String,
        #[arg(long)]
        csv: bool,
    },
    /// Repeated runs at fixed parameters; prints the summary CSV.
    Evaluate {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        method: MethodArgs,
        #[command(flatten)]
        runs: RunArgs,
        /// Stream order across runs.
        #[arg(long, default_value = "per-run")]
        shuffle: ShuffleMode,
        /// Also write one row per run to this file.
        #[arg(long, value_name = "PATH")]
        runs_csv: Option<PathBuf>,
    },
    /// NES against PES calibrated to the same target RSE; prints the ratio CSV.
    Compare {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        runs: RunArgs,
        #[arg(long, default_value_t = 0.2)]
        target_rse: f64,
    },
    /// Observed against predicted RSE over a list of targets; prints the sweep CSV.
    Sweep {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        runs: RunArgs,
        #[arg(long)]
        method: Method,
        /// Comma-separated target RSEs.
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.2,0.3,0.4")]
        targets: Vec<f64>,
    },
    /// Parameters for a target RSE and the predicted PES variance at them.
    Calibrate {
        #[command(flatten)]
        input: InputArgs,
        /// Comma-separated target RSEs.
        #[arg(long, value_delimiter = ',', default_value = "0.2")]
        target_rse: Vec<f64>,
    },
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Edge list, one "u v" pair per line; gzip is detected automatically.
    #[arg(long, short)]
    input: PathBuf,
    /// Refuse inputs with more edges than this.
    #[arg(long)]
    max_edges: Option<usize>,
}

impl InputArgs {
    fn load(&self) -> Result<Dataset, Error> {
        let options = ParseOptions { max_edges: self.max_edges };
        let data = Dataset::new(read_edge_list_file(&self.input, &options)?);
        eprintln!("{}: {}", self.input.display(), describe(&data.stats));
        Ok(data)
    }
}

#[derive(Debug, Args)]
struct MethodArgs {
    #[arg(long)]
    method: Method,
    /// Edge sampling probability in (0, 1].
    #[arg(long)]
    p: f64,
    /// Wedge pool size; required for PES.
    #[arg(long)]
    pool: Option<usize>,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Number of independent runs.
    #[arg(long, default_value_t = 1000)]
    runs: usize,
    /// Run i uses seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 0 picks one per core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

fn describe(s: &GraphStats) -> String {
    format!(
        "N={} M={} triangles={} wedges={} shared_pairs={} clustering={}",
        s.nodes, s.edges, s.triangles, s.wedges, s.shared_pairs, s.clustering
    )
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Run { source, .. } => exit_code(source),
        Error::InvalidParameter(_) | Error::Domain(_) | Error::InsufficientRuns(_) => 1,
        Error::Parse { .. } | Error::Io(_) | Error::Csv(_) => 2,
        Error::TriangleFree | Error::Infeasible(_) => 3,
    }
}

#[derive(Serialize)]
struct CalibrationRecord {
    target_rse: f64,
    #[serde(rename = "N")]
    nodes: u64,
    #[serde(rename = "M")]
    edges: u64,
    triangles: u64,
    wedges: u64,
    shared_pairs: u64,
    clustering: f64,
    nes_p: f64,
    nes_clamped: bool,
    pes_p: f64,
    pes_pool: usize,
    pes_expected_triangles: f64,
    pes_clamped_p: bool,
    pes_capped_pool: bool,
    rule_of_thumb_pool: usize,
    term_unit: Option<f64>,
    term_shared: Option<f64>,
    term_indep: Option<f64>,
    predicted_variance: Option<f64>,
    predicted_rse: Option<f64>,
}

fn calibration_record(stats: &GraphStats, target: f64) -> Result<CalibrationRecord, Error> {
    let nes = calibrate_nes(target, stats.triangles)?;
    let pes = calibrate_pes(stats, target)?;
    let params = PesParams::new(pes.p, pes.n)?;
    let variance = pes_variance(stats, params).ok();
    Ok(CalibrationRecord {
        target_rse: target,
        nodes: stats.nodes,
        edges: stats.edges,
        triangles: stats.triangles,
        wedges: stats.wedges,
        shared_pairs: stats.shared_pairs,
        clustering: stats.clustering,
        nes_p: nes.p,
        nes_clamped: nes.clamped,
        pes_p: pes.p,
        pes_pool: pes.n,
        pes_expected_triangles: pes.expected_triangles,
        pes_clamped_p: pes.clamped_p,
        pes_capped_pool: pes.capped_n,
        rule_of_thumb_pool: calibrate_pes_pool(target, stats.clustering)?,
        term_unit: variance.map(|v| v.term_unit),
        term_shared: variance.map(|v| v.term_shared),
        term_indep: variance.map(|v| v.term_indep),
        predicted_variance: variance.map(|v| v.total),
        predicted_rse: pes_rse_full(stats, params).ok(),
    })
}

fn write_csv<T: Serialize>(out: impl Write, records: impl IntoIterator<Item = T>) -> Result<(), Error> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn run(cli: Cli, out: &mut impl Write) -> Result<(), Error> {
    match cli.command {
        Command::Stats { input, csv } => {
            let s = input.load()?.stats;
            if csv {
                writeln!(out, "{}\n{}", GraphStats::CSV_HEADER, s.csv_row())?;
            } else {
                writeln!(out, "{}", describe(&s))?;
            }
        }
        Command::Estimate { input, method, seed, shuffle, csv } => {
            let data = input.load()?;
            let shuffle = if shuffle == "none" { ShuffleMode::None } else { ShuffleMode::PerRun };
            let r = single_run(&data.edges, method.method, method.p, method.pool, seed, shuffle)?;
            if csv {
                write_csv(&mut *out, [&r])?;
            } else {
                let opt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |x| x.to_string());
                writeln!(out, "estimate={}", r.estimate)?;
                writeln!(out, "method={} p={} q={}", r.method, r.p, opt(r.q))?;
                writeln!(
                    out,
                    "triangles_observed={} candidate_wedges={} estimated_rse={}",
                    r.triangles_observed,
                    r.candidate_wedges.map_or_else(|| "-".to_string(), |c| c.to_string()),
                    opt(r.estimated_rse)
                )?;
                writeln!(out, "subgraph_edges={} sample_size={}", r.subgraph_edges, r.sample_size)?;
            }
        }
        Command::Evaluate { input, method, runs, shuffle, runs_csv } => {
            let data = input.load()?;
            let config = ExperimentConfig {
                method: method.method,
                p: method.p,
                pool: method.pool,
                runs: runs.runs,
                base_seed: runs.seed,
                shuffle,
                jobs: runs.jobs,
            };
            let summary = run_experiment(&data, &config)?;
            if let Some(path) = runs_csv {
                write_runs_csv(&summary, std::fs::File::create(&path)?)?;
                eprintln!("wrote {} runs to {}", summary.runs.len(), path.display());
            }
            write_summary_csv([&summary], &mut *out)?;
        }
        Command::Compare { input, runs, target_rse } => {
            let data = input.load()?;
            let report = ratio_experiment(&data, target_rse, runs.runs, runs.seed, runs.jobs)?;
            if report.saturated {
                eprintln!("warning: calibration saturated (p clamped to 1 or pool capped at the wedge count)");
            }
            write_ratio_csv([&report], &mut *out)?;
        }
        Command::Sweep { input, runs, method, targets } => {
            let data = input.load()?;
            if data.stats.triangles == 0 {
                return Err(Error::TriangleFree);
            }
            let report = rse_sweep(&data, &targets, method, runs.runs, runs.seed, runs.jobs)?;
            write_sweep_csv(&report, &mut *out)?;
        }
        Command::Calibrate { input, target_rse } => {
            let stats = input.load()?.stats;
            if stats.triangles == 0 {
                return Err(Error::TriangleFree);
            }
            let records = target_rse
                .iter()
                .map(|&t| calibration_record(&stats, t))
                .collect::<Result<Vec<_>, _>>()?;
            write_csv(&mut *out, records)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = run(cli, &mut out).and_then(|()| Ok(out.flush()?));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
