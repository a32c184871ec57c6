//! Python bindings: graphs and their exact statistics, the two streaming
//! estimators, repeated-run experiments and the analytic predictors.

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use pes_core::analysis::{self, PesParams};
use pes_core::estimators::{self, SeededRandom};
use pes_core::graph::{self, ParseOptions};
use pes_core::harness::{self, Dataset, ExperimentConfig, RunSummary, ShuffleMode};
use pes_core::{Edge, EdgeList, Error, Method};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io(io) => PyIOError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

trait OrRaise<T> {
    fn or_raise(self) -> PyResult<T>;
}

impl<T> OrRaise<T> for pes_core::Result<T> {
    fn or_raise(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> PyResult<T> {
    s.parse().or_raise()
}

fn edge(u: u64, v: u64) -> PyResult<Edge> {
    Edge::new(u, v).ok_or_else(|| PyValueError::new_err(format!("self-loop on node {u}")))
}

/// Exact statistics of a graph.
#[pyclass(frozen, get_all, from_py_object, module = "pestri")]
#[derive(Clone, Copy)]
struct Stats {
    nodes: u64,
    edges: u64,
    triangles: u64,
    wedges: u64,
    shared_pairs: u64,
    clustering: f64,
}

impl From<pes_core::GraphStats> for Stats {
    fn from(s: pes_core::GraphStats) -> Self {
        Stats {
            nodes: s.nodes,
            edges: s.edges,
            triangles: s.triangles,
            wedges: s.wedges,
            shared_pairs: s.shared_pairs,
            clustering: s.clustering,
        }
    }
}

impl From<Stats> for pes_core::GraphStats {
    fn from(s: Stats) -> Self {
        pes_core::GraphStats {
            nodes: s.nodes,
            edges: s.edges,
            triangles: s.triangles,
            wedges: s.wedges,
            shared_pairs: s.shared_pairs,
            clustering: s.clustering,
        }
    }
}

#[pymethods]
impl Stats {
    fn __repr__(&self) -> String {
        format!(
            "Stats(N={}, M={}, triangles={}, wedges={}, shared_pairs={}, clustering={})",
            self.nodes, self.edges, self.triangles, self.wedges, self.shared_pairs, self.clustering
        )
    }
}

/// A simple undirected graph held as a canonical edge list, with its oracle statistics.
#[pyclass(frozen, module = "pestri")]
struct Graph {
    inner: Dataset,
}

#[pymethods]
impl Graph {
    /// Builds a graph from (u, v) pairs. Self-loops and duplicates are dropped.
    #[new]
    fn new(edges: Vec<(u64, u64)>) -> Self {
        Graph { inner: Dataset::new(EdgeList::from_pairs(edges)) }
    }

    /// Reads a whitespace-separated edge list, plain or gzip.
    #[staticmethod]
    #[pyo3(signature = (path, max_edges=None))]
    fn load(path: std::path::PathBuf, max_edges: Option<usize>) -> PyResult<Self> {
        let inner = Dataset::load(path, &ParseOptions { max_edges }).or_raise()?;
        Ok(Graph { inner })
    }

    /// Parses edge-list text.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        let edges = graph::parse_edge_list(text.as_bytes(), &ParseOptions::default()).or_raise()?;
        Ok(Graph { inner: Dataset::new(edges) })
    }

    #[getter]
    fn stats(&self) -> Stats {
        self.inner.stats.into()
    }

    fn edges(&self) -> Vec<(u64, u64)> {
        self.inner.edges.iter().map(|e| (e.u().0, e.v().0)).collect()
    }

    /// The edges in a seeded uniformly random order.
    fn shuffled(&self, seed: u64) -> Vec<(u64, u64)> {
        graph::shuffle_stream(&self.inner.edges, pes_core::StreamSeed(seed))
            .iter()
            .map(|e| (e.u().0, e.v().0))
            .collect()
    }

    fn __len__(&self) -> usize {
        self.inner.edges.edge_count()
    }

    fn __repr__(&self) -> String {
        format!("Graph(N={}, M={})", self.inner.stats.nodes, self.inner.stats.edges)
    }
}

/// Outputs of one estimator pass.
#[pyclass(frozen, get_all, module = "pestri")]
struct EstimateResult {
    method: String,
    estimate: f64,
    p: f64,
    q: Option<f64>,
    triangles_observed: u64,
    candidate_wedges: Option<u64>,
    subgraph_edges: u64,
    pool_size: Option<u64>,
    sample_size: u64,
    estimated_rse: Option<f64>,
}

impl From<pes_core::EstimateResult> for EstimateResult {
    fn from(r: pes_core::EstimateResult) -> Self {
        EstimateResult {
            method: r.method.to_string(),
            estimate: r.estimate,
            p: r.p,
            q: r.q,
            triangles_observed: r.triangles_observed,
            candidate_wedges: r.candidate_wedges,
            subgraph_edges: r.subgraph_edges,
            pool_size: r.pool_size,
            sample_size: r.sample_size,
            estimated_rse: r.estimated_rse,
        }
    }
}

#[pymethods]
impl EstimateResult {
    fn __repr__(&self) -> String {
        format!(
            "EstimateResult(method={:?}, estimate={}, triangles_observed={}, sample_size={})",
            self.method, self.estimate, self.triangles_observed, self.sample_size
        )
    }
}

/// Neighborhood edge sampling, fed one edge at a time.
#[pyclass(module = "pestri")]
struct NesEstimator {
    inner: estimators::NesEstimator<SeededRandom>,
}

#[pymethods]
impl NesEstimator {
    #[new]
    #[pyo3(signature = (p, seed=0))]
    fn new(p: f64, seed: u64) -> PyResult<Self> {
        let inner = estimators::NesEstimator::new(p, SeededRandom::new(seed)).or_raise()?;
        Ok(NesEstimator { inner })
    }

    /// Feeds one edge; returns the number of triangles it closed in the sample.
    fn process(&mut self, u: u64, v: u64) -> PyResult<u64> {
        Ok(self.inner.process(edge(u, v)?))
    }

    fn result(&self) -> EstimateResult {
        self.inner.result().into()
    }
}

/// Priority edge sampling with a fixed-size wedge pool, fed one edge at a time.
#[pyclass(module = "pestri")]
struct PesEstimator {
    inner: estimators::PesEstimator<SeededRandom>,
}

#[pymethods]
impl PesEstimator {
    #[new]
    #[pyo3(signature = (p, pool, seed=0))]
    fn new(p: f64, pool: usize, seed: u64) -> PyResult<Self> {
        let inner = estimators::PesEstimator::new(p, pool, SeededRandom::new(seed)).or_raise()?;
        Ok(PesEstimator { inner })
    }

    /// Feeds one edge; returns the number of pool wedges it closed.
    fn process(&mut self, u: u64, v: u64) -> PyResult<u64> {
        Ok(self.inner.process(edge(u, v)?))
    }

    /// Current retention probability of a candidate wedge.
    #[getter]
    fn q(&self) -> f64 {
        self.inner.q()
    }

    /// Pool contents as (a, center, b, closed) tuples.
    fn pool(&self) -> Vec<(u64, u64, u64, bool)> {
        self.inner
            .pool()
            .slots()
            .iter()
            .map(|w| {
                let (a, b) = w.endpoints();
                (a.0, w.center().0, b.0, w.is_closed())
            })
            .collect()
    }

    fn result(&self) -> EstimateResult {
        self.inner.result().into()
    }
}

/// One estimator pass over `graph`.
#[pyfunction]
#[pyo3(signature = (graph, method, p, pool=None, seed=0, shuffle="per-run"))]
fn estimate(
    graph: &Graph,
    method: &str,
    p: f64,
    pool: Option<usize>,
    seed: u64,
    shuffle: &str,
) -> PyResult<EstimateResult> {
    let r = harness::single_run(&graph.inner.edges, parse(method)?, p, pool, seed, parse(shuffle)?)
        .or_raise()?;
    Ok(r.into())
}

fn summary_dict<'py>(py: Python<'py>, s: &RunSummary) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("method", s.config.method.to_string())?;
    d.set_item("p", s.config.p)?;
    d.set_item("pool", s.config.pool)?;
    d.set_item("runs", s.runs.len())?;
    d.set_item("base_seed", s.config.base_seed)?;
    d.set_item("mean_estimate", s.mean_estimate)?;
    d.set_item("sd_estimate", s.sd_estimate)?;
    d.set_item("observed_rse", s.observed_rse)?;
    d.set_item("predicted_rse", s.predicted_rse)?;
    d.set_item("predicted_variance", s.predicted_variance)?;
    d.set_item("mean_triangles_observed", s.mean_triangles_observed)?;
    d.set_item("mean_sample_size", s.mean_sample_size)?;
    d.set_item("estimates", s.runs.iter().map(|r| r.estimate).collect::<Vec<_>>())?;
    Ok(d)
}

/// `runs` independent passes; run i uses seed `seed + i`.
#[pyfunction]
#[pyo3(signature = (graph, method, p, pool=None, runs=1000, seed=0, shuffle="per-run", jobs=0))]
#[allow(clippy::too_many_arguments)]
fn evaluate<'py>(
    py: Python<'py>,
    graph: &Graph,
    method: &str,
    p: f64,
    pool: Option<usize>,
    runs: usize,
    seed: u64,
    shuffle: &str,
    jobs: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let config = ExperimentConfig {
        method: parse(method)?,
        p,
        pool,
        runs,
        base_seed: seed,
        shuffle: parse::<ShuffleMode>(shuffle)?,
        jobs,
    };
    let data = &graph.inner;
    let summary = py.detach(|| harness::run_experiment(data, &config)).or_raise()?;
    summary_dict(py, &summary)
}

/// NES and PES calibrated to the same target RSE, with the observed and predicted probability ratios.
#[pyfunction]
#[pyo3(signature = (graph, target_rse=0.2, runs=1000, seed=0, jobs=0))]
fn compare<'py>(
    py: Python<'py>,
    graph: &Graph,
    target_rse: f64,
    runs: usize,
    seed: u64,
    jobs: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let data = &graph.inner;
    let r = py
        .detach(|| harness::ratio_experiment(data, target_rse, runs, seed, jobs))
        .or_raise()?;
    let d = PyDict::new(py);
    d.set_item("target_rse", r.target_rse)?;
    d.set_item("p_nes", r.p_nes)?;
    d.set_item("p_pes", r.p_pes)?;
    d.set_item("pool", r.pool)?;
    d.set_item("saturated", r.saturated)?;
    d.set_item("p_nes_observed", r.p_nes_observed)?;
    d.set_item("p_pes_observed", r.p_pes_observed)?;
    d.set_item("observed_p_ratio", r.observed_p_ratio)?;
    d.set_item("predicted_p_ratio", r.predicted_p_ratio)?;
    d.set_item("observed_sample_ratio", r.observed_sample_ratio)?;
    d.set_item("nes", summary_dict(py, &r.nes)?)?;
    d.set_item("pes", summary_dict(py, &r.pes)?)?;
    Ok(d)
}

/// Observed against predicted RSE for each target, one dict per target.
#[pyfunction]
#[pyo3(signature = (graph, method, targets, runs=1000, seed=0, jobs=0))]
fn sweep<'py>(
    py: Python<'py>,
    graph: &Graph,
    method: &str,
    targets: Vec<f64>,
    runs: usize,
    seed: u64,
    jobs: usize,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let method: Method = parse(method)?;
    let data = &graph.inner;
    let report = py
        .detach(|| harness::rse_sweep(data, &targets, method, runs, seed, jobs))
        .or_raise()?;
    report
        .rows
        .iter()
        .map(|row| {
            let d = PyDict::new(py);
            d.set_item("target_rse", row.target_rse)?;
            d.set_item("p", row.p)?;
            d.set_item("pool", row.pool)?;
            d.set_item("observed_rse", row.observed_rse)?;
            d.set_item("predicted_rse", row.predicted_rse)?;
            d.set_item("mean_triangles_observed", row.mean_triangles_observed)?;
            d.set_item("mean_sample_size", row.mean_sample_size)?;
            Ok(d)
        })
        .collect()
}

/// Predicted PES variance split into its three terms.
#[pyfunction]
fn pes_variance<'py>(py: Python<'py>, stats: Stats, p: f64, pool: usize) -> PyResult<Bound<'py, PyDict>> {
    let params = PesParams::new(p, pool).or_raise()?;
    let v = analysis::pes_variance(&stats.into(), params).or_raise()?;
    let d = PyDict::new(py);
    d.set_item("term_unit", v.term_unit)?;
    d.set_item("term_shared", v.term_shared)?;
    d.set_item("term_indep", v.term_indep)?;
    d.set_item("total", v.total)?;
    d.set_item("q", v.q)?;
    d.set_item("q_prime_sq", v.q_prime_sq)?;
    d.set_item("phi_prime", v.phi_prime)?;
    Ok(d)
}

#[pyfunction]
fn pes_rse_full(stats: Stats, p: f64, pool: usize) -> PyResult<f64> {
    analysis::pes_rse_full(&stats.into(), PesParams::new(p, pool).or_raise()?).or_raise()
}

#[pyfunction]
fn pes_rse_simple(triangles_observed: u64) -> Option<f64> {
    analysis::pes_rse_simple(triangles_observed)
}

#[pyfunction]
fn nes_rse_simple(triangles_observed: u64) -> Option<f64> {
    analysis::nes_rse_simple(triangles_observed)
}

#[pyfunction]
fn observed_rse(estimates: Vec<f64>, truth: f64) -> PyResult<f64> {
    analysis::observed_rse(&estimates, truth).or_raise()
}

/// Returns `(p, clamped)`.
#[pyfunction]
fn calibrate_nes(target_rse: f64, triangles: u64) -> PyResult<(f64, bool)> {
    let c = analysis::calibrate_nes(target_rse, triangles).or_raise()?;
    Ok((c.p, c.clamped))
}

#[pyfunction]
fn calibrate_pes_pool(target_rse: f64, clustering: f64) -> PyResult<usize> {
    analysis::calibrate_pes_pool(target_rse, clustering).or_raise()
}

/// Returns `(p, pool)` for `target_rse` from exact statistics.
#[pyfunction]
fn calibrate_pes(stats: Stats, target_rse: f64) -> PyResult<(f64, usize)> {
    let c = analysis::calibrate_pes(&stats.into(), target_rse).or_raise()?;
    Ok((c.p, c.n))
}

#[pyfunction]
fn nes_pes_ratio(edges: u64, wedges: u64, p_nes: f64) -> PyResult<f64> {
    analysis::nes_pes_ratio(edges, wedges, p_nes).or_raise()
}

#[pymodule]
fn pestri(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Graph>()?;
    m.add_class::<Stats>()?;
    m.add_class::<EstimateResult>()?;
    m.add_class::<NesEstimator>()?;
    m.add_class::<PesEstimator>()?;
    m.add_function(wrap_pyfunction!(estimate, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(pes_variance, m)?)?;
    m.add_function(wrap_pyfunction!(pes_rse_full, m)?)?;
    m.add_function(wrap_pyfunction!(pes_rse_simple, m)?)?;
    m.add_function(wrap_pyfunction!(nes_rse_simple, m)?)?;
    m.add_function(wrap_pyfunction!(observed_rse, m)?)?;
    m.add_function(wrap_pyfunction!(calibrate_nes, m)?)?;
    m.add_function(wrap_pyfunction!(calibrate_pes_pool, m)?)?;
    m.add_function(wrap_pyfunction!(calibrate_pes, m)?)?;
    m.add_function(wrap_pyfunction!(nes_pes_ratio, m)?)?;
    Ok(())
}
