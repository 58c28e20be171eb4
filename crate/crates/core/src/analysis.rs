//! Convergence of the Cesàro sequence against a reference entropy.
//!
//! For each `m ≥ 2` the error `|c_m - h|` is normalized by `ln m / m`.
//! If the sequence approaches `h` at rate `C ln m / m`, the normalized
//! errors stay bounded and their supremum estimates `C` for that braid.

use serde::{Deserialize, Serialize};

use crate::entropy::{estimate, EstimateParams, Estimator, Mode, OrbitTrace};
use crate::error::{Error, Result};
use crate::word::BraidWord;

pub const MIN_TRACE_LEN: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorPoint {
    pub m: usize,
    pub error: f64,
    /// `error · m / ln m`; absent at `m = 1`.
    pub normalized: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceFit {
    pub braid: BraidWord,
    pub h_ref: f64,
    pub c_sup: f64,
    pub per_m_errors: Vec<ErrorPoint>,
}

impl ConvergenceFit {
    fn normalized_in(&self, lo: usize, hi: usize) -> impl Iterator<Item = f64> + '_ {
        self.per_m_errors
            .iter()
            .filter(move |p| p.m >= lo && p.m <= hi)
            .filter_map(|p| p.normalized)
    }

    /// Supremum of the normalized errors over `lo ≤ m ≤ hi`.
    pub fn sup_over(&self, lo: usize, hi: usize) -> Option<f64> {
        self.normalized_in(lo, hi).reduce(f64::max)
    }

    /// Ratio of the largest to the smallest normalized error over
    /// `lo ≤ m ≤ hi`. Infinite if some error in range is exactly zero.
    pub fn spread_ratio(&self, lo: usize, hi: usize) -> Option<f64> {
        let max = self.sup_over(lo, hi)?;
        let min = self.normalized_in(lo, hi).reduce(f64::min)?;
        Some(if max == 0.0 { 1.0 } else { max / min })
    }
}

/// Normalized Cesàro errors of `trace` against `h_ref`.
///
/// A stationary trace has estimate zero at every `m`, so its errors are
/// `h_ref` throughout.
pub fn fit_envelope(trace: &OrbitTrace, h_ref: f64) -> Result<ConvergenceFit> {
    if trace.len() < MIN_TRACE_LEN {
        return Err(Error::InsufficientData(format!(
            "need at least {MIN_TRACE_LEN} trace entries, got {}",
            trace.len()
        )));
    }
    if !(h_ref >= 0.0 && h_ref.is_finite()) {
        return Err(Error::InvalidParameter(format!("reference entropy must be >= 0, got {h_ref}")));
    }
    let per_m_errors: Vec<ErrorPoint> = trace
        .entries
        .iter()
        .map(|e| {
            let c = if trace.stationary { 0.0 } else { e.cesaro };
            let error = (c - h_ref).abs();
            let normalized = (e.m >= 2).then(|| {
                let m = e.m as f64;
                error * m / m.ln()
            });
            ErrorPoint { m: e.m, error, normalized }
        })
        .collect();
    let c_sup = per_m_errors.iter().filter_map(|p| p.normalized).fold(0.0, f64::max);
    Ok(ConvergenceFit { braid: trace.braid.clone(), h_ref, c_sup, per_m_errors })
}

/// Tight ratio-estimator value used as `h_ref`.
pub fn reference_entropy(w: &BraidWord) -> Result<f64> {
    let params = EstimateParams { eps: 1e-9, m_max: 5000, mode: Mode::Exact, ..Default::default() };
    let est = estimate(w, Estimator::Ratio, &params)?;
    if !est.converged {
        return Err(Error::NotConverged { iterations: est.iterations_used });
    }
    Ok(est.value)
}
