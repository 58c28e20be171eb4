//! Entropy estimation from orbit growth.
//!
//! Starting from the reference lamination `(0,1,…,0,1)`, the braid is
//! applied `m = 1, 2, …` times and the log of the reduced intersection
//! count is recorded. Two estimators read the limit off that sequence:
//!
//! * Cesàro: `c_m = log_count(m) / m`, stopped once `|c_{m+1} - c_m| < ε`.
//! * ratio: `r_m = log_count(m) - log_count(m-1)`, stopped once the last
//!   `window` values spread by less than `ε`; reports their mean.
//!
//! Entropy is in natural-log units.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::dynnikov::{l0, ln_bigint, reduced_intersection_count, LaminationCoords};
use crate::error::{Error, Result};
use crate::float_orbit::ScaledCoords;
use crate::word::BraidWord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Estimator {
    Cesaro,
    Ratio,
}

pub const DEFAULT_EPS: f64 = 1e-4;
pub const DEFAULT_M_MAX: usize = 10_000;
pub const DEFAULT_WINDOW: usize = 5;
pub const DEFAULT_DIGIT_CAP: u64 = 1_000_000;

/// Knobs shared by the estimators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateParams {
    pub eps: f64,
    pub m_max: usize,
    pub window: usize,
    pub mode: Mode,
    /// Exact mode aborts once an entry has more decimal digits than this.
    pub digit_cap: u64,
}

impl Default for EstimateParams {
    fn default() -> Self {
        EstimateParams {
            eps: DEFAULT_EPS,
            m_max: DEFAULT_M_MAX,
            window: DEFAULT_WINDOW,
            mode: Mode::Exact,
            digit_cap: DEFAULT_DIGIT_CAP,
        }
    }
}

impl EstimateParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(Error::InvalidParameter(format!("eps must be positive, got {}", self.eps)));
        }
        if self.m_max == 0 {
            return Err(Error::InvalidParameter("m_max must be at least 1".into()));
        }
        if self.window == 0 {
            return Err(Error::InvalidParameter("window must be at least 1".into()));
        }
        if self.digit_cap == 0 {
            return Err(Error::InvalidParameter("digit cap must be at least 1".into()));
        }
        Ok(())
    }
}

enum State {
    Exact { coords: LaminationCoords, cap_bits: u64, cap_digits: u64 },
    Float(ScaledCoords),
}

/// Step-by-step orbit of the reference lamination under a braid.
pub struct Orbit {
    word: BraidWord,
    state: State,
    m: usize,
    log_count0: f64,
    last_log_count: f64,
    fixed: Option<bool>,
}

impl Orbit {
    pub fn new(word: &BraidWord, mode: Mode) -> Result<Self> {
        Orbit::with_digit_cap(word, mode, DEFAULT_DIGIT_CAP)
    }

    pub fn with_digit_cap(word: &BraidWord, mode: Mode, digit_cap: u64) -> Result<Self> {
        let word = word.free_reduce();
        let start = l0(word.strands())?;
        let state = match mode {
            Mode::Exact => State::Exact {
                coords: start,
                cap_bits: (digit_cap as f64 * std::f64::consts::LOG2_10).ceil() as u64,
                cap_digits: digit_cap,
            },
            Mode::Float => State::Float(ScaledCoords::from_exact(&start)),
        };
        let log_count0 = (word.strands() as f64).ln();
        Ok(Orbit { word, state, m: 0, log_count0, last_log_count: log_count0, fixed: None })
    }

    pub fn word(&self) -> &BraidWord {
        &self.word
    }

    /// Number of applications performed so far.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn log_count0(&self) -> f64 {
        self.log_count0
    }

    pub fn exact_coords(&self) -> Option<&LaminationCoords> {
        match &self.state {
            State::Exact { coords, .. } => Some(coords),
            State::Float(_) => None,
        }
    }

    /// Whether the first application left the start point unchanged, in
    /// which case the whole orbit is constant. `None` before the first step.
    pub fn is_stationary(&self) -> Option<bool> {
        self.fixed
    }

    fn current_log_count(&self) -> Result<f64> {
        match &self.state {
            State::Exact { coords, .. } => {
                let count = reduced_intersection_count(coords);
                if count.bits() == 0 {
                    return Err(Error::EmptyLamination);
                }
                Ok(ln_bigint(&count))
            }
            State::Float(s) => s.log_reduced_count(),
        }
    }

    /// Applies the braid once more and returns the new entry.
    pub fn step(&mut self) -> Result<TraceEntry> {
        let before_first = self.m == 0;
        match &mut self.state {
            State::Exact { coords, cap_bits, cap_digits } => {
                let prev = before_first.then(|| coords.clone());
                coords.apply_word_mut(&self.word)?;
                if coords.max_bits() > *cap_bits {
                    return Err(Error::ResourceLimit { cap_digits: *cap_digits });
                }
                if let Some(prev) = prev {
                    self.fixed = Some(prev == *coords);
                }
            }
            State::Float(s) => {
                let prev = before_first.then(|| s.clone());
                s.apply_word_mut(&self.word)?;
                if let Some(prev) = prev {
                    self.fixed = Some(prev == *s);
                }
            }
        }
        self.m += 1;
        let log_count = self.current_log_count()?;
        let entry = TraceEntry {
            m: self.m,
            log_count,
            cesaro: log_count / self.m as f64,
            ratio: log_count - self.last_log_count,
        };
        self.last_log_count = log_count;
        Ok(entry)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub m: usize,
    pub log_count: f64,
    pub cesaro: f64,
    pub ratio: f64,
}

/// Log counts and both estimator sequences for `m = 1..=m_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitTrace {
    pub braid: BraidWord,
    pub mode: Mode,
    pub log_count0: f64,
    /// The first application returned the start point, so every later
    /// point equals it too and the estimates are identically zero.
    pub stationary: bool,
    pub entries: Vec<TraceEntry>,
}

impl OrbitTrace {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry for iteration `m` (1-based).
    pub fn at(&self, m: usize) -> Option<&TraceEntry> {
        m.checked_sub(1).and_then(|k| self.entries.get(k))
    }
}

pub fn orbit(w: &BraidWord, m_max: usize, mode: Mode) -> Result<OrbitTrace> {
    orbit_with_cap(w, m_max, mode, DEFAULT_DIGIT_CAP)
}

pub fn orbit_with_cap(w: &BraidWord, m_max: usize, mode: Mode, digit_cap: u64) -> Result<OrbitTrace> {
    if m_max == 0 {
        return Err(Error::InvalidParameter("m_max must be at least 1".into()));
    }
    let mut orbit = Orbit::with_digit_cap(w, mode, digit_cap)?;
    let entries = (0..m_max).map(|_| orbit.step()).collect::<Result<Vec<_>>>()?;
    Ok(OrbitTrace {
        braid: orbit.word.clone(),
        mode,
        log_count0: orbit.log_count0,
        stationary: orbit.fixed == Some(true),
        entries,
    })
}

/// Exact orbit that also keeps every coordinate vector (index `m - 1`).
pub fn orbit_with_coords(
    w: &BraidWord,
    m_max: usize,
    digit_cap: u64,
) -> Result<(OrbitTrace, Vec<LaminationCoords>)> {
    if m_max == 0 {
        return Err(Error::InvalidParameter("m_max must be at least 1".into()));
    }
    let mut orbit = Orbit::with_digit_cap(w, Mode::Exact, digit_cap)?;
    let mut entries = Vec::with_capacity(m_max);
    let mut coords = Vec::with_capacity(m_max);
    for _ in 0..m_max {
        entries.push(orbit.step()?);
        coords.push(orbit.exact_coords().expect("exact mode").clone());
    }
    let trace = OrbitTrace {
        braid: orbit.word.clone(),
        mode: Mode::Exact,
        log_count0: orbit.log_count0,
        stationary: orbit.fixed == Some(true),
        entries,
    };
    Ok((trace, coords))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyEstimate {
    pub value: f64,
    pub iterations_used: usize,
    pub converged: bool,
    pub estimator: Estimator,
    pub epsilon: f64,
    /// The growth seen is too slow to tell zero entropy from small entropy.
    pub zero_entropy_caveat: bool,
}

impl EntropyEstimate {
    fn stationary(estimator: Estimator, eps: f64) -> Self {
        EntropyEstimate {
            value: 0.0,
            iterations_used: 1,
            converged: true,
            estimator,
            epsilon: eps,
            zero_entropy_caveat: true,
        }
    }
}

// Small values, or total growth no faster than quadratic in m, look the same
// as zero entropy at this depth.
fn caveat(value: f64, eps: f64, log_count: f64, log_count0: f64, m: usize) -> bool {
    value < 10.0 * eps || log_count <= log_count0 + 2.0 * ((m + 1) as f64).ln()
}

/// Cesàro estimator: stops at the first `m` with `|c_{m+1} - c_m| < ε` and
/// reports `c_{m+1}`.
pub fn estimate_cesaro(w: &BraidWord, eps: f64, m_max: usize, mode: Mode) -> Result<EntropyEstimate> {
    estimate(w, Estimator::Cesaro, &EstimateParams { eps, m_max, mode, ..Default::default() })
}

/// Ratio estimator: mean of the last `window` log-ratios once their spread
/// is below `ε`.
pub fn estimate_ratio(
    w: &BraidWord,
    eps: f64,
    window: usize,
    m_max: usize,
    mode: Mode,
) -> Result<EntropyEstimate> {
    estimate(w, Estimator::Ratio, &EstimateParams { eps, m_max, window, mode, ..Default::default() })
}

pub fn estimate(w: &BraidWord, estimator: Estimator, params: &EstimateParams) -> Result<EntropyEstimate> {
    params.validate()?;
    let mut orbit = Orbit::with_digit_cap(w, params.mode, params.digit_cap)?;
    match estimator {
        Estimator::Cesaro => run_cesaro(&mut orbit, params),
        Estimator::Ratio => run_ratio(&mut orbit, params),
    }
}

fn run_cesaro(orbit: &mut Orbit, p: &EstimateParams) -> Result<EntropyEstimate> {
    let mut prev: Option<f64> = None;
    let mut last = None;
    let mut converged = false;
    for _ in 0..p.m_max {
        let e = orbit.step()?;
        if orbit.is_stationary() == Some(true) {
            return Ok(EntropyEstimate::stationary(Estimator::Cesaro, p.eps));
        }
        last = Some(e);
        if prev.is_some_and(|c| (e.cesaro - c).abs() < p.eps) {
            converged = true;
            break;
        }
        prev = Some(e.cesaro);
    }
    let e = last.expect("m_max >= 1");
    Ok(EntropyEstimate {
        value: e.cesaro,
        iterations_used: e.m,
        converged,
        estimator: Estimator::Cesaro,
        epsilon: p.eps,
        zero_entropy_caveat: caveat(e.cesaro, p.eps, e.log_count, orbit.log_count0, e.m),
    })
}

fn run_ratio(orbit: &mut Orbit, p: &EstimateParams) -> Result<EntropyEstimate> {
    let mut recent: VecDeque<f64> = VecDeque::with_capacity(p.window);
    let mut last = None;
    let mut converged = false;
    for _ in 0..p.m_max {
        let e = orbit.step()?;
        if orbit.is_stationary() == Some(true) {
            return Ok(EntropyEstimate::stationary(Estimator::Ratio, p.eps));
        }
        if recent.len() == p.window {
            recent.pop_front();
        }
        recent.push_back(e.ratio);
        last = Some(e);
        if recent.len() == p.window && spread(&recent) < p.eps {
            converged = true;
            break;
        }
    }
    let e = last.expect("m_max >= 1");
    let value = recent.iter().sum::<f64>() / recent.len() as f64;
    Ok(EntropyEstimate {
        value,
        iterations_used: e.m,
        converged,
        estimator: Estimator::Ratio,
        epsilon: p.eps,
        zero_entropy_caveat: caveat(value, p.eps, e.log_count, orbit.log_count0, e.m),
    })
}

fn spread(xs: &VecDeque<f64>) -> f64 {
    let (lo, hi) = xs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    hi - lo
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryEntry {
    pub label: String,
    pub word: BraidWord,
    pub estimate: EntropyEstimate,
}

/// Estimates for a braid and its entropy-preserving relatives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub entries: Vec<SymmetryEntry>,
    pub max_deviation: f64,
}

pub fn symmetry_check(w: &BraidWord, eps: f64) -> Result<SymmetryReport> {
    symmetry_check_with(w, &EstimateParams { eps, ..Default::default() })
}

/// Ratio estimates of `w`, its inverse, mirror, flip, one rotation and its
/// image in `B_{n+1}`, with the largest pairwise difference.
pub fn symmetry_check_with(w: &BraidWord, params: &EstimateParams) -> Result<SymmetryReport> {
    let variants = [
        ("original", w.clone()),
        ("inverse", w.inverse()),
        ("mirror", w.mirror()),
        ("flip", w.flip()),
        ("rotate1", w.rotate(1)),
        ("embed", w.embed(w.strands() + 1)?),
    ];
    let mut entries = Vec::with_capacity(variants.len());
    for (label, word) in variants {
        let estimate = estimate(&word, Estimator::Ratio, params)?;
        entries.push(SymmetryEntry { label: label.to_string(), word, estimate });
    }
    let values: Vec<f64> = entries.iter().map(|e| e.estimate.value).collect();
    let max_deviation = values
        .iter()
        .flat_map(|x| values.iter().map(move |y| (x - y).abs()))
        .fold(0.0, f64::max);
    Ok(SymmetryReport { entries, max_deviation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynnikov::apply_word;
    use crate::word::parse_braid;

    fn w(text: &str, n: usize) -> BraidWord {
        parse_braid(text, n).unwrap()
    }

    fn golden() -> f64 {
        ((3.0 + 5f64.sqrt()) / 2.0).ln()
    }

    #[test]
    fn identity_orbit_is_constant() {
        for mode in [Mode::Exact, Mode::Float] {
            let t = orbit(&w("", 3), 20, mode).unwrap();
            assert_eq!(t.log_count0, 3f64.ln());
            for e in &t.entries {
                assert!((e.log_count - 3f64.ln()).abs() < 1e-15);
                assert_eq!(e.cesaro, e.log_count / e.m as f64);
                assert!(e.ratio.abs() < 1e-15);
            }
        }
        let t = orbit(&w("1 -1", 4), 3, Mode::Exact).unwrap();
        assert!(t.entries.iter().all(|e| e.log_count == 4f64.ln()));
        assert!(t.stationary);
        assert!(!orbit(&w("1", 3), 3, Mode::Exact).unwrap().stationary);
    }

    #[test]
    fn first_step_by_hand() {
        // σ_1 then σ_2^{-1} on (0,1,0,1,0,1)
        let l1 = apply_word(&l0(3).unwrap(), &w("1 -2", 3)).unwrap();
        let count = reduced_intersection_count(&l1);
        let t = orbit(&w("1 -2", 3), 1, Mode::Exact).unwrap();
        assert_eq!(t.entries[0].log_count, ln_bigint(&count));
        assert_eq!(t.entries[0].ratio, t.entries[0].log_count - 3f64.ln());
        assert!(t.at(1).is_some() && t.at(0).is_none() && t.at(2).is_none());
    }

    #[test]
    fn single_generator_grows_slowly() {
        let t = orbit(&w("1", 3), 2000, Mode::Exact).unwrap();
        assert!(t.at(2000).unwrap().cesaro < 0.01);
    }

    #[test]
    fn cesaro_recovers_known_value() {
        let est = estimate_cesaro(&w("1 -2", 3), 1e-4, DEFAULT_M_MAX, Mode::Exact).unwrap();
        assert!(est.converged);
        assert!((est.value - golden()).abs() < 0.05, "{est:?}");
        assert!(!est.zero_entropy_caveat);
    }

    #[test]
    fn identity_estimates_are_zero() {
        for est in [Estimator::Cesaro, Estimator::Ratio] {
            let e = estimate(&w("", 3), est, &EstimateParams::default()).unwrap();
            assert_eq!(e.value, 0.0);
            assert!(e.converged);
            assert_eq!(e.iterations_used, 1);
        }
    }

    #[test]
    fn single_generator_gets_caveat() {
        let e = estimate_cesaro(&w("1", 3), 1e-4, DEFAULT_M_MAX, Mode::Exact).unwrap();
        assert!(e.value < 0.05, "{e:?}");
        assert!(e.zero_entropy_caveat);
    }

    #[test]
    fn ratio_recovers_known_value() {
        let e = estimate_ratio(&w("1 -2", 3), 1e-8, 5, DEFAULT_M_MAX, Mode::Exact).unwrap();
        assert!(e.converged);
        assert!((e.value - 0.9624236501).abs() < 1e-6, "{e:?}");
        let f = estimate_ratio(&w("2 -1", 3), 1e-8, 5, DEFAULT_M_MAX, Mode::Exact).unwrap();
        assert!((e.value - f.value).abs() < 2e-8);
    }

    #[test]
    fn non_convergence_is_reported() {
        let e = estimate_ratio(&w("1 -2", 3), 1e-14, 5, 8, Mode::Float).unwrap();
        assert!(!e.converged);
        assert_eq!(e.iterations_used, 8);
        let e = estimate_cesaro(&w("1 -2", 3), 1e-12, 8, Mode::Float).unwrap();
        assert!(!e.converged);
    }

    #[test]
    fn digit_cap_trips() {
        let err = orbit_with_cap(&w("1 -2", 3), 1000, Mode::Exact, 50).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit { cap_digits: 50 }));
    }

    #[test]
    fn bad_params_rejected() {
        let bad = EstimateParams { eps: 0.0, ..Default::default() };
        assert!(matches!(estimate(&w("1", 3), Estimator::Ratio, &bad), Err(Error::InvalidParameter(_))));
        let bad = EstimateParams { window: 0, ..Default::default() };
        assert!(estimate(&w("1", 3), Estimator::Ratio, &bad).is_err());
        assert!(orbit(&w("1", 3), 0, Mode::Exact).is_err());
    }

    #[test]
    fn symmetry_report_for_golden_braid() {
        let r = symmetry_check(&w("1 -2", 3), 1e-8).unwrap();
        assert_eq!(r.entries.len(), 6);
        assert!(r.max_deviation < 1e-3, "{r:?}");
        let id = symmetry_check(&w("", 3), 1e-8).unwrap();
        assert!(id.entries.iter().all(|e| e.estimate.value == 0.0));
        assert_eq!(id.max_deviation, 0.0);
    }

    #[test]
    fn coords_recorded() {
        let (t, cs) = orbit_with_coords(&w("1", 2), 3, DEFAULT_DIGIT_CAP).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(cs[0], LaminationCoords::from_i64(&[1, 0, 0, 2]).unwrap());
    }
}
