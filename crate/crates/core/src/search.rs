//! Exhaustive search for short braid words of large entropy.
//!
//! Words of a given written length are enumerated once per symmetry orbit
//! (inverse, mirror, flip, rotation), scored with a loose ratio estimate,
//! and the best few per `(length, strands)` are re-estimated tightly.
//! Results are merged in a fixed order, so the table does not depend on
//! the number of worker threads.

use std::cmp::Ordering;
use std::fs;
use std::ops::Range;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entropy::{estimate, EstimateParams, Estimator, Mode};
use crate::error::{Error, Result};
use crate::word::{BraidWord, Letter, Sign};

/// Strand cap for an unrestricted search: a reduced word of length `L`
/// touches at most `L` generator indices, so `B_{L+1}` holds a translate of
/// every candidate.
pub fn strand_bound(length: usize) -> usize {
    length + 1
}

/// Letters of `B_strands` in canonical order: `1, -1, 2, -2, …`.
fn alphabet(strands: usize) -> Vec<Letter> {
    (1..strands)
        .flat_map(|i| [Letter::new(i, Sign::Pos), Letter::new(i, Sign::Neg)])
        .collect()
}

/// Number of words (reduced or not) of the given length: the size of the
/// index space that [`enumerate_range`] walks.
pub fn word_space_size(strands: usize, length: usize) -> u64 {
    (2 * (strands as u64 - 1)).pow(length as u32)
}

fn decode(index: u64, alphabet: &[Letter], length: usize) -> Vec<Letter> {
    let base = alphabet.len() as u64;
    let mut out = vec![alphabet[0]; length];
    let mut rest = index;
    for slot in out.iter_mut().rev() {
        *slot = alphabet[(rest % base) as usize];
        rest /= base;
    }
    out
}

/// Counts for one slice of the word space.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanCounts {
    /// Freely reduced words seen.
    pub examined: u64,
    /// Orbit representatives among them.
    pub emitted: u64,
}

/// Canonical representatives in the slice `range` of the word space, in
/// lexicographic order, plus counts.
pub fn scan_range(strands: usize, length: usize, range: Range<u64>) -> (Vec<BraidWord>, ScanCounts) {
    let letters = alphabet(strands);
    let mut counts = ScanCounts::default();
    let mut out = Vec::new();
    for idx in range {
        let word = BraidWord::new(strands, decode(idx, &letters, length)).expect("alphabet letters are in range");
        if !word.is_freely_reduced() {
            continue;
        }
        counts.examined += 1;
        if word.is_canonical() {
            counts.emitted += 1;
            out.push(word);
        }
    }
    (out, counts)
}

/// Lazily yields canonical representatives from a slice of the word space.
pub fn enumerate_range(strands: usize, length: usize, range: Range<u64>) -> impl Iterator<Item = BraidWord> {
    let letters = alphabet(strands);
    range.filter_map(move |idx| {
        let word = BraidWord::new(strands, decode(idx, &letters, length)).ok()?;
        (word.is_freely_reduced() && word.is_canonical()).then_some(word)
    })
}

/// One canonical word per symmetry orbit of freely reduced words of the
/// given length in `B_strands`, in lexicographic order.
pub fn enumerate(strands: usize, length: usize) -> impl Iterator<Item = BraidWord> {
    let size = if strands >= 2 { word_space_size(strands, length) } else { 0 };
    enumerate_range(strands, length, 0..size)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RecordRepr", into = "RecordRepr")]
pub struct SearchRecord {
    pub word: BraidWord,
    pub length: usize,
    pub strands: usize,
    pub entropy: f64,
    pub alternating: bool,
    pub converged: bool,
    /// Scored by the tight second pass rather than the coarse one.
    pub refined: bool,
}

#[derive(Serialize, Deserialize)]
struct RecordRepr {
    word: String,
    length: usize,
    strands: usize,
    entropy: f64,
    alternating: bool,
    converged: bool,
    refined: bool,
}

impl From<SearchRecord> for RecordRepr {
    fn from(r: SearchRecord) -> Self {
        RecordRepr {
            word: r.word.to_string(),
            length: r.length,
            strands: r.strands,
            entropy: r.entropy,
            alternating: r.alternating,
            converged: r.converged,
            refined: r.refined,
        }
    }
}

impl TryFrom<RecordRepr> for SearchRecord {
    type Error = Error;

    fn try_from(r: RecordRepr) -> Result<Self> {
        Ok(SearchRecord {
            word: crate::word::parse_braid(&r.word, r.strands)?,
            length: r.length,
            strands: r.strands,
            entropy: r.entropy,
            alternating: r.alternating,
            converged: r.converged,
            refined: r.refined,
        })
    }
}

/// Entropy descending, then word ascending.
pub fn record_order(x: &SearchRecord, y: &SearchRecord) -> Ordering {
    y.entropy.total_cmp(&x.entropy).then_with(|| x.word.cmp(&y.word))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub word: String,
    pub strands: usize,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyRow {
    pub length: usize,
    /// Refined records across all strand counts, best first.
    pub best: Vec<SearchRecord>,
    /// Records within `2·ε` of the best refined entropy.
    pub maximizers: Vec<SearchRecord>,
    pub examined: u64,
    pub pruned_by_symmetry: u64,
    /// Representatives skipped because a translate lives in fewer strands.
    pub pruned_by_embedding: u64,
    pub failures: Vec<Failure>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyTable {
    pub rows: Vec<SurveyRow>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyParams {
    pub max_length: usize,
    pub strands_min: usize,
    pub strands_max: usize,
    pub coarse: EstimateParams,
    pub refine: EstimateParams,
    pub refine_top: usize,
    /// Worker threads; 0 means rayon's default.
    pub workers: usize,
    /// Word-space indices per checkpoint unit.
    pub chunk_size: u64,
    pub checkpoint_dir: Option<PathBuf>,
}

impl SurveyParams {
    pub fn new(max_length: usize, strands_min: usize, strands_max: usize) -> Self {
        SurveyParams {
            max_length,
            strands_min,
            strands_max,
            coarse: EstimateParams { eps: 1e-3, m_max: 2000, mode: Mode::Float, ..Default::default() },
            refine: EstimateParams { eps: 1e-6, m_max: 10_000, mode: Mode::Float, ..Default::default() },
            refine_top: 20,
            workers: 0,
            chunk_size: 4096,
            checkpoint_dir: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.strands_min < 3 || self.strands_min > self.strands_max {
            return Err(Error::InvalidParameter(format!(
                "strand range {}..{} must satisfy 3 <= min <= max",
                self.strands_min, self.strands_max
            )));
        }
        if self.max_length == 0 {
            return Err(Error::InvalidParameter("max length must be at least 1".into()));
        }
        if self.refine_top == 0 || self.chunk_size == 0 {
            return Err(Error::InvalidParameter("refine_top and chunk size must be positive".into()));
        }
        self.coarse.validate()?;
        self.refine.validate()
    }
}

/// Coarse results for one checkpoint unit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Chunk {
    strands: usize,
    length: usize,
    start: u64,
    end: u64,
    coarse: EstimateParams,
    counts: ScanCounts,
    pruned_by_embedding: u64,
    records: Vec<SearchRecord>,
    failures: Vec<Failure>,
}

fn score(word: &BraidWord, params: &EstimateParams, refined: bool) -> std::result::Result<SearchRecord, Failure> {
    match estimate(word, Estimator::Ratio, params) {
        Ok(est) => Ok(SearchRecord {
            word: word.clone(),
            length: word.len(),
            strands: word.strands(),
            entropy: est.value,
            alternating: word.is_alternating(),
            converged: est.converged,
            refined,
        }),
        Err(e) => Err(Failure { word: word.to_string(), strands: word.strands(), error: e.to_string() }),
    }
}

// Words whose index support fits in fewer strands are scored at the
// smallest strand count in range that holds a translate of them.
fn fits_fewer_strands(word: &BraidWord, strands_min: usize) -> bool {
    match word.support() {
        Some((lo, hi)) => word.strands() > strands_min && hi - lo + 2 < word.strands(),
        None => false,
    }
}

fn checkpoint_path(dir: &Path, strands: usize, length: usize, range: &Range<u64>) -> PathBuf {
    dir.join(format!("coarse_s{strands}_l{length}_r{}-{}.json", range.start, range.end))
}

fn load_chunk(path: &Path, strands: usize, length: usize, range: &Range<u64>, coarse: &EstimateParams) -> Option<Chunk> {
    let text = fs::read_to_string(path).ok()?;
    let chunk: Chunk = serde_json::from_str(&text).ok()?;
    let matches = chunk.strands == strands
        && chunk.length == length
        && chunk.start == range.start
        && chunk.end == range.end
        && chunk.coarse == *coarse;
    matches.then_some(chunk)
}

fn save_chunk(path: &Path, chunk: &Chunk) -> Result<()> {
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, serde_json::to_vec(chunk)?)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn coarse_chunk(strands: usize, length: usize, range: Range<u64>, p: &SurveyParams) -> Result<Chunk> {
    let path = p.checkpoint_dir.as_deref().map(|d| checkpoint_path(d, strands, length, &range));
    if let Some(chunk) = path.as_deref().and_then(|f| load_chunk(f, strands, length, &range, &p.coarse)) {
        return Ok(chunk);
    }
    let (words, counts) = scan_range(strands, length, range.clone());
    let mut records = Vec::new();
    let mut failures = Vec::new();
    let mut pruned_by_embedding = 0;
    for word in &words {
        if fits_fewer_strands(word, p.strands_min) {
            pruned_by_embedding += 1;
            continue;
        }
        match score(word, &p.coarse, false) {
            Ok(r) => records.push(r),
            Err(f) => failures.push(f),
        }
    }
    let chunk = Chunk {
        strands,
        length,
        start: range.start,
        end: range.end,
        coarse: p.coarse,
        counts,
        pruned_by_embedding,
        records,
        failures,
    };
    if let Some(path) = path {
        save_chunk(&path, &chunk)?;
    }
    Ok(chunk)
}

struct Stratum {
    refined: Vec<SearchRecord>,
    counts: ScanCounts,
    pruned_by_embedding: u64,
    failures: Vec<Failure>,
}

fn survey_stratum(strands: usize, length: usize, p: &SurveyParams) -> Result<Stratum> {
    let size = word_space_size(strands, length);
    let ranges: Vec<Range<u64>> = (0..size.div_ceil(p.chunk_size))
        .map(|k| k * p.chunk_size..((k + 1) * p.chunk_size).min(size))
        .collect();
    let chunks = ranges
        .into_par_iter()
        .map(|r| coarse_chunk(strands, length, r, p))
        .collect::<Result<Vec<_>>>()?;

    let mut counts = ScanCounts::default();
    let mut pruned_by_embedding = 0;
    let mut coarse = Vec::new();
    let mut failures = Vec::new();
    for c in chunks {
        counts.examined += c.counts.examined;
        counts.emitted += c.counts.emitted;
        pruned_by_embedding += c.pruned_by_embedding;
        coarse.extend(c.records);
        failures.extend(c.failures);
    }
    coarse.sort_by(record_order);
    coarse.truncate(p.refine_top);

    let scored: Vec<_> = coarse.par_iter().map(|r| score(&r.word, &p.refine, true)).collect();
    let mut refined = Vec::with_capacity(scored.len());
    for s in scored {
        match s {
            Ok(r) => refined.push(r),
            Err(f) => failures.push(f),
        }
    }
    refined.sort_by(record_order);
    Ok(Stratum { refined, counts, pruned_by_embedding, failures })
}

/// Best braids per written length over the strand range.
pub fn max_entropy_survey(p: &SurveyParams) -> Result<SurveyTable> {
    p.validate()?;
    if let Some(dir) = &p.checkpoint_dir {
        fs::create_dir_all(dir)?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(p.workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    pool.install(|| run_survey(p))
}

fn run_survey(p: &SurveyParams) -> Result<SurveyTable> {
    let mut rows = Vec::with_capacity(p.max_length);
    for length in 1..=p.max_length {
        let mut best = Vec::new();
        let mut examined = 0;
        let mut emitted = 0;
        let mut pruned_by_embedding = 0;
        let mut failures = Vec::new();
        for strands in p.strands_min..=p.strands_max {
            let s = survey_stratum(strands, length, p)?;
            best.extend(s.refined);
            examined += s.counts.examined;
            emitted += s.counts.emitted;
            pruned_by_embedding += s.pruned_by_embedding;
            failures.extend(s.failures);
        }
        best.sort_by(record_order);
        best.truncate(p.refine_top);
        let maximizers = match best.first() {
            Some(top) => {
                let cut = top.entropy - 2.0 * p.refine.eps;
                best.iter().filter(|r| r.entropy >= cut).cloned().collect()
            }
            None => Vec::new(),
        };
        rows.push(SurveyRow {
            length,
            best,
            maximizers,
            examined,
            pruned_by_symmetry: examined - emitted,
            pruned_by_embedding,
            failures,
        });
    }
    let warnings = monotonicity_warnings(&rows, p.refine.eps);
    Ok(SurveyTable { rows, warnings })
}

// A maximizer of length L-2 extended by a cancelling-free pair should not
// beat every word of length L.
fn monotonicity_warnings(rows: &[SurveyRow], eps: f64) -> Vec<String> {
    let top = |r: &SurveyRow| r.best.first().map(|b| b.entropy);
    let mut out = Vec::new();
    for pair in rows.windows(3) {
        let (short, long) = (&pair[0], &pair[2]);
        if let (Some(s), Some(l)) = (top(short), top(long)) {
            if l < s - 2.0 * eps {
                out.push(format!(
                    "best entropy at length {} ({l}) is below length {} ({s})",
                    long.length, short.length
                ));
            }
        }
    }
    out
}
