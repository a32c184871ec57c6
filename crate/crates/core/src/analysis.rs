//! Analytic predictors: PES variance, RSE approximations, parameter
//! calibration and the NES/PES sampling-probability ratio.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{check_pool, check_probability};
use crate::oracle::GraphStats;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PesParams {
    pub p: f64,
    pub n: usize,
}

impl PesParams {
    pub fn new(p: f64, n: usize) -> Result<Self> {
        check_probability(p)?;
        check_pool(n)?;
        Ok(PesParams { p, n })
    }
}

/// Variance of the PES estimator split into its three terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceBreakdown {
    /// `Δ(1 − pq) / pq`
    pub term_unit: f64,
    /// `2Φ(q'² − pq²) / (5pq²)`
    pub term_shared: f64,
    /// `Φ'(q'² − q²) / q²`
    pub term_indep: f64,
    pub total: f64,
    pub q: f64,
    pub q_prime_sq: f64,
    pub phi_prime: f64,
}

struct Retention {
    q: f64,
    q_prime_sq: f64,
}

/// `q = n/(pΛ)` and `q'² = (n² − n)/(p²Λ² − pΛ)`, the single and pairwise
/// retention probabilities of a saturated pool.
fn retention(stats: &GraphStats, params: PesParams) -> Result<Retention> {
    check_probability(params.p)?;
    check_pool(params.n)?;
    let expected = params.p * stats.wedges as f64;
    if expected <= 1.0 {
        return Err(Error::domain(format!(
            "pool theory undefined for sub-unit expected candidates (p\u{b7}\u{39b} = {expected})"
        )));
    }
    let n = params.n as f64;
    let q = n / expected;
    if q > 1.0 {
        return Err(Error::domain(format!(
            "pool larger than the expected candidate count (q = {q} > 1)"
        )));
    }
    Ok(Retention {
        q,
        q_prime_sq: (n * n - n) / (expected * expected - expected),
    })
}

pub fn pes_variance(stats: &GraphStats, params: PesParams) -> Result<VarianceBreakdown> {
    let Retention { q, q_prime_sq } = retention(stats, params)?;
    let p = params.p;
    let delta = stats.triangles as f64;
    let phi = stats.shared_pairs as f64;
    let phi_prime = delta * delta - 2.0 * phi - delta;
    let pq = p * q;
    let q_sq = q * q;

    let term_unit = delta * (1.0 - pq) / pq;
    let term_shared = 2.0 * phi * (q_prime_sq - p * q_sq) / (5.0 * p * q_sq);
    let term_indep = phi_prime * (q_prime_sq - q_sq) / q_sq;
    Ok(VarianceBreakdown {
        term_unit,
        term_shared,
        term_indep,
        total: term_unit + term_shared + term_indep,
        q,
        q_prime_sq,
        phi_prime,
    })
}

/// RSE of PES before the small-`p`, small-`q` simplification:
/// `[(1 − pq + 2Φ/(5Δ)(q − pq)) / (Δpq)]^½`.
pub fn pes_rse_full(stats: &GraphStats, params: PesParams) -> Result<f64> {
    if stats.triangles == 0 {
        return Err(Error::domain("relative error undefined for \u{394} = 0"));
    }
    let Retention { q, .. } = retention(stats, params)?;
    let p = params.p;
    let delta = stats.triangles as f64;
    let phi = stats.shared_pairs as f64;
    let pq = p * q;
    let inner = 1.0 - pq + 2.0 * phi / (5.0 * delta) * (q - pq);
    Ok((inner / (delta * pq)).sqrt())
}

/// `Δ_σ^(−1/2)`, or `None` when no triangle was observed.
pub fn pes_rse_simple(triangles_observed: u64) -> Option<f64> {
    (triangles_observed > 0).then(|| (triangles_observed as f64).powf(-0.5))
}

/// `Δ_g^(−1/2)`, or `None` when no triangle was observed.
pub fn nes_rse_simple(triangles_observed: u64) -> Option<f64> {
    pes_rse_simple(triangles_observed)
}

/// `(1/Δ) · sqrt((1/k) Σ (Δ_i − μ)²)` with `μ` the mean of the estimates.
/// Population normalization (divide by `k`).
pub fn observed_rse(estimates: &[f64], truth: f64) -> Result<f64> {
    let k = estimates.len();
    if k < 2 {
        return Err(Error::InsufficientRuns(k));
    }
    if truth.is_nan() || truth <= 0.0 {
        return Err(Error::domain(format!("truth must be positive, got {truth}")));
    }
    let mean = estimates.iter().sum::<f64>() / k as f64;
    let ss: f64 = estimates.iter().map(|x| (x - mean) * (x - mean)).sum();
    Ok((ss / k as f64).sqrt() / truth)
}

/// `target^(−2)`: triangles that must be observed for a given RSE.
pub fn required_triangles(target_rse: f64) -> Result<f64> {
    if !target_rse.is_finite() || target_rse <= 0.0 {
        return Err(Error::invalid(format!("target RSE must be positive, got {target_rse}")));
    }
    Ok(1.0 / (target_rse * target_rse))
}

/// Ceiling that ignores representation noise in the last few bits, so that
/// `25 / 0.05` is 500 and not 501.
fn ceil_tolerant(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r
    } else {
        x.ceil()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NesCalibration {
    pub p: f64,
    /// The unclamped value exceeded 1.
    pub clamped: bool,
}

/// Sampling probability making the expected `Δ_g = p²Δ` equal `target^(−2)`.
pub fn calibrate_nes(target_rse: f64, truth_triangles: u64) -> Result<NesCalibration> {
    required_triangles(target_rse)?;
    if truth_triangles == 0 {
        return Err(Error::TriangleFree);
    }
    let p = 1.0 / (target_rse * (truth_triangles as f64).sqrt());
    Ok(NesCalibration {
        p: p.min(1.0),
        clamped: p > 1.0,
    })
}

/// Pool-size rule of thumb `n = ceil(target^(−2) / C)`.
pub fn calibrate_pes_pool(target_rse: f64, clustering: f64) -> Result<usize> {
    let need = required_triangles(target_rse)?;
    if clustering <= 0.0 {
        return Err(Error::domain("pool size unbounded for triangle-free graphs"));
    }
    if clustering > 1.0 {
        return Err(Error::domain(format!("clustering must be at most 1, got {clustering}")));
    }
    Ok(ceil_tolerant(need / clustering) as usize)
}

/// PES parameters chosen from exact graph statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PesCalibration {
    pub p: f64,
    pub n: usize,
    /// `p·q·Δ` at these parameters.
    pub expected_triangles: f64,
    /// `p = n/M` exceeded 1 and was clamped.
    pub clamped_p: bool,
    /// The required pool exceeded `Λ` and was capped.
    pub capped_n: bool,
}

/// Pool size so that the expected number of closed pool wedges
/// `pqΔ = nΔ/Λ` reaches `target^(−2)`, with the pool matched to the
/// expected subgraph size (`n = pM`). The required `n` is capped at `Λ`.
pub fn calibrate_pes(stats: &GraphStats, target_rse: f64) -> Result<PesCalibration> {
    let need = required_triangles(target_rse)?;
    if stats.triangles == 0 {
        return Err(Error::TriangleFree);
    }
    let (m, wedges, delta) = (stats.edges as f64, stats.wedges as f64, stats.triangles as f64);
    let raw_n = ceil_tolerant(need * wedges / delta);
    let capped_n = raw_n > wedges;
    let n = raw_n.min(wedges).max(1.0);
    let raw_p = n / m;
    let p = raw_p.min(1.0);
    let q = (n / (p * wedges)).min(1.0);
    Ok(PesCalibration {
        p,
        n: n as usize,
        expected_triangles: p * q * delta,
        clamped_p: raw_p > 1.0,
        capped_n,
    })
}

/// Predicted ratio `p_N / p_D ≈ M / (p_N Λ)` between NES and PES sampling
/// probabilities at equal accuracy and `|σ| = |g|`.
pub fn nes_pes_ratio(edges: u64, wedges: u64, p_nes: f64) -> Result<f64> {
    check_probability(p_nes)?;
    if edges == 0 || wedges == 0 {
        return Err(Error::domain("ratio needs M >= 1 and \u{39b} >= 1"));
    }
    Ok(edges as f64 / (p_nes * wedges as f64))
}
