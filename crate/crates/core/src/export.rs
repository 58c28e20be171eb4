//! CSV and JSON writers for traces, estimates, envelope fits and surveys.
//!
//! Every writer takes a `preamble`: a JSON value describing the run that
//! produced the data. JSON documents carry it under `"config"`; CSV files
//! carry it on a leading `# config …` comment line. Log-valued columns are
//! multiplied by `units.factor` so they can be shown in another base.

use std::io::Write;

use serde::Serialize;
use serde_json::{json, Value};

use crate::analysis::ConvergenceFit;
use crate::dynnikov::{reduced_intersection_count, LaminationCoords};
use crate::entropy::{EntropyEstimate, OrbitTrace};
use crate::error::Result;
use crate::search::SurveyTable;

/// Display units for logarithmic quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Units {
    pub base: f64,
    pub factor: f64,
}

impl Units {
    pub fn natural() -> Self {
        Units { base: std::f64::consts::E, factor: 1.0 }
    }

    /// `None` unless `base > 0` and `base != 1`.
    pub fn base(base: f64) -> Option<Self> {
        (base > 0.0 && base != 1.0 && base.is_finite()).then(|| Units { base, factor: base.ln().recip() })
    }

    fn apply(&self, x: f64) -> f64 {
        if self.factor == 1.0 { x } else { x * self.factor }
    }
}

impl Default for Units {
    fn default() -> Self {
        Units::natural()
    }
}

fn comment_line(out: &mut dyn Write, preamble: &Value) -> Result<()> {
    writeln!(out, "# config {}", serde_json::to_string(preamble)?)?;
    Ok(())
}

fn write_json(out: &mut dyn Write, doc: &Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, doc)?;
    writeln!(out)?;
    Ok(())
}

fn csv_writer(out: &mut dyn Write) -> csv::Writer<&mut dyn Write> {
    csv::WriterBuilder::new().has_headers(true).from_writer(out)
}

fn coords_field(c: &LaminationCoords) -> String {
    c.coords().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
struct TraceRow {
    m: usize,
    log_count: f64,
    cesaro: f64,
    ratio: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    count: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    coords: Option<String>,
}

/// Columns `m,log_count,cesaro,ratio`, plus `count,coords` (decimal
/// strings, coordinates space-separated) when `coords` is given.
pub fn write_trace_csv(
    out: &mut dyn Write,
    trace: &OrbitTrace,
    coords: Option<&[LaminationCoords]>,
    units: Units,
    preamble: &Value,
) -> Result<()> {
    comment_line(out, preamble)?;
    let mut w = csv_writer(out);
    for (k, e) in trace.entries.iter().enumerate() {
        let c = coords.map(|cs| &cs[k]);
        w.serialize(TraceRow {
            m: e.m,
            log_count: units.apply(e.log_count),
            cesaro: units.apply(e.cesaro),
            ratio: units.apply(e.ratio),
            count: c.map(|c| reduced_intersection_count(c).to_string()),
            coords: c.map(coords_field),
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_trace_json(
    out: &mut dyn Write,
    trace: &OrbitTrace,
    coords: Option<&[LaminationCoords]>,
    units: Units,
    preamble: &Value,
) -> Result<()> {
    let entries: Vec<Value> = trace
        .entries
        .iter()
        .enumerate()
        .map(|(k, e)| {
            let mut row = json!({
                "m": e.m,
                "log_count": units.apply(e.log_count),
                "cesaro": units.apply(e.cesaro),
                "ratio": units.apply(e.ratio),
            });
            if let Some(cs) = coords {
                row["count"] = json!(reduced_intersection_count(&cs[k]).to_string());
                row["coords"] = serde_json::to_value(&cs[k]).expect("coords serialize");
            }
            row
        })
        .collect();
    let doc = json!({
        "config": preamble,
        "braid": trace.braid.to_string(),
        "strands": trace.braid.strands(),
        "mode": trace.mode,
        "log_base": units.base,
        "log_count0": units.apply(trace.log_count0),
        "stationary": trace.stationary,
        "entries": entries,
    });
    write_json(out, &doc)
}

fn scaled_estimate(est: &EntropyEstimate, units: Units) -> EntropyEstimate {
    EntropyEstimate { value: units.apply(est.value), ..*est }
}

pub fn write_estimate_json(out: &mut dyn Write, est: &EntropyEstimate, units: Units, preamble: &Value) -> Result<()> {
    let doc = json!({
        "config": preamble,
        "log_base": units.base,
        "estimate": scaled_estimate(est, units),
    });
    write_json(out, &doc)
}

pub fn write_estimate_csv(out: &mut dyn Write, est: &EntropyEstimate, units: Units, preamble: &Value) -> Result<()> {
    comment_line(out, preamble)?;
    let mut w = csv_writer(out);
    w.serialize(scaled_estimate(est, units))?;
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct FitRow {
    m: usize,
    error: f64,
    normalized_error: Option<f64>,
}

/// Columns `m,error,normalized_error`; the summary sits in comment lines.
pub fn write_fit_csv(out: &mut dyn Write, fit: &ConvergenceFit, units: Units, preamble: &Value) -> Result<()> {
    comment_line(out, preamble)?;
    writeln!(out, "# h_ref {}", units.apply(fit.h_ref))?;
    writeln!(out, "# c_sup {}", units.apply(fit.c_sup))?;
    let mut w = csv_writer(out);
    for p in &fit.per_m_errors {
        w.serialize(FitRow {
            m: p.m,
            error: units.apply(p.error),
            normalized_error: p.normalized.map(|x| units.apply(x)),
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_fit_json(out: &mut dyn Write, fit: &ConvergenceFit, units: Units, preamble: &Value) -> Result<()> {
    let series: Vec<Value> = fit
        .per_m_errors
        .iter()
        .map(|p| {
            json!({
                "m": p.m,
                "error": units.apply(p.error),
                "normalized_error": p.normalized.map(|x| units.apply(x)),
            })
        })
        .collect();
    let doc = json!({
        "config": preamble,
        "braid": fit.braid.to_string(),
        "strands": fit.braid.strands(),
        "log_base": units.base,
        "h_ref": units.apply(fit.h_ref),
        "c_sup": units.apply(fit.c_sup),
        "series": series,
    });
    write_json(out, &doc)
}

#[derive(Serialize)]
struct SurveyCsvRow {
    length: usize,
    rank: usize,
    word: String,
    strands: usize,
    entropy: f64,
    alternating: bool,
    converged: bool,
    maximizer: bool,
    examined: u64,
    pruned_by_symmetry: u64,
    pruned_by_embedding: u64,
}

/// One line per best record and length. Failures and warnings go to
/// comment lines after the preamble.
pub fn write_survey_csv(out: &mut dyn Write, table: &SurveyTable, units: Units, preamble: &Value) -> Result<()> {
    comment_line(out, preamble)?;
    for warning in &table.warnings {
        writeln!(out, "# warning {warning}")?;
    }
    for row in &table.rows {
        for f in &row.failures {
            writeln!(out, "# failure length={} strands={} word=\"{}\" error={}", row.length, f.strands, f.word, f.error)?;
        }
    }
    let mut w = csv_writer(out);
    for row in &table.rows {
        for (rank, r) in row.best.iter().enumerate() {
            w.serialize(SurveyCsvRow {
                length: row.length,
                rank: rank + 1,
                word: r.word.to_string(),
                strands: r.strands,
                entropy: units.apply(r.entropy),
                alternating: r.alternating,
                converged: r.converged,
                maximizer: row.maximizers.contains(r),
                examined: row.examined,
                pruned_by_symmetry: row.pruned_by_symmetry,
                pruned_by_embedding: row.pruned_by_embedding,
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_survey_json(out: &mut dyn Write, table: &SurveyTable, units: Units, preamble: &Value) -> Result<()> {
    let mut t = table.clone();
    for row in &mut t.rows {
        for r in row.best.iter_mut().chain(row.maximizers.iter_mut()) {
            r.entropy = units.apply(r.entropy);
        }
    }
    let doc = json!({
        "config": preamble,
        "log_base": units.base,
        "rows": t.rows,
        "warnings": t.warnings,
    });
    write_json(out, &doc)
}
