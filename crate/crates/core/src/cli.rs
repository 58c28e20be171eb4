//! Command-line front end.
//!
//! Subcommands: `estimate`, `orbit`, `search`, `converge`. Exit codes are
//! 0 on success, 1 on usage or parse errors, 2 when an estimator did not
//! converge and 3 when a resource limit was hit.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::analysis::{fit_envelope, reference_entropy};
use crate::entropy::{
    estimate, orbit_with_cap, orbit_with_coords, EstimateParams, Estimator, Mode, DEFAULT_DIGIT_CAP,
};
use crate::error::{Error, Result};
use crate::export::{self, Units};
use crate::search::{max_entropy_survey, strand_bound, SurveyParams};
use crate::word::{parse_braid, BraidWord};

/// Environment variable holding the default worker count for `search`.
pub const WORKERS_ENV: &str = "BRAID_ENTROPY_WORKERS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "braid-entropy", version, about = "Estimate the topological entropy of braids")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate the entropy of one braid.
    Estimate(EstimateArgs),
    /// Dump the log-count trace of a braid's orbit.
    Orbit(OrbitArgs),
    /// Survey the highest-entropy words per written length.
    Search(SearchArgs),
    /// Fit the ln(m)/m error envelope of the Cesàro sequence.
    Converge(ConvergeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct BraidArgs {
    /// Signed generator indices, e.g. "1 -2" or "1,-2".
    #[arg(long, allow_hyphen_values = true)]
    pub braid: String,
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    pub strands: u64,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Display logs in this base ("e", "2", "10", …).
    #[arg(long, default_value = "e", value_parser = parse_log_base)]
    pub log_base: Units,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub braid: BraidArgs,
    #[arg(long, default_value_t = 1e-4)]
    pub eps: f64,
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub m_max: u64,
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    pub window: u64,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
    #[arg(long, value_enum, default_value_t = Estimator::Cesaro)]
    pub estimator: Estimator,
    /// Abort exact mode beyond this many decimal digits per entry.
    #[arg(long, default_value_t = DEFAULT_DIGIT_CAP, value_parser = clap::value_parser!(u64).range(1..))]
    pub digit_cap: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    #[command(flatten)]
    pub braid: BraidArgs,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub iters: u64,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
    /// Include exact counts and coordinate vectors (exact mode only).
    #[arg(long)]
    pub coords: bool,
    #[arg(long, default_value_t = DEFAULT_DIGIT_CAP, value_parser = clap::value_parser!(u64).range(1..))]
    pub digit_cap: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_length: u64,
    /// Strand counts: "3..5", "3..=5", "4", or "auto" (3 up to max length + 1).
    #[arg(long, default_value = "auto")]
    pub strands: String,
    /// Coarse-pass tolerance.
    #[arg(long, default_value_t = 1e-3)]
    pub eps: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub refine_eps: f64,
    #[arg(long, default_value_t = 2000, value_parser = clap::value_parser!(u64).range(1..))]
    pub coarse_m_max: u64,
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub refine_m_max: u64,
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    pub refine_top: u64,
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    pub window: u64,
    #[arg(long, value_enum, default_value_t = Mode::Float)]
    pub mode: Mode,
    /// Worker threads (default: $BRAID_ENTROPY_WORKERS, else all cores).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: Option<u64>,
    /// Directory for resumable per-chunk results.
    #[arg(long)]
    pub checkpoint_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub braid: BraidArgs,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(10..))]
    pub iters: u64,
    /// Reference entropy; computed with the tight ratio estimator if absent.
    #[arg(long)]
    pub h_ref: Option<f64>,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(flatten)]
    pub out: OutputArgs,
}

fn parse_log_base(s: &str) -> std::result::Result<Units, String> {
    if s == "e" {
        return Ok(Units::natural());
    }
    let base: f64 = s.parse().map_err(|_| format!("not a number: {s}"))?;
    Units::base(base).ok_or_else(|| format!("log base must be positive and not 1, got {s}"))
}

/// Parses "3..5", "3..=5", "4" or "auto".
pub fn parse_strand_range(s: &str, max_length: usize) -> Result<(usize, usize)> {
    let bad = || Error::InvalidParameter(format!("bad strand range {s:?}"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    let (lo, hi) = if s == "auto" {
        (3, strand_bound(max_length).max(3))
    } else if let Some((a, b)) = s.split_once("..=") {
        (num(a)?, num(b)?)
    } else if let Some((a, b)) = s.split_once("..") {
        (num(a)?, num(b)?)
    } else {
        let n = num(s)?;
        (n, n)
    };
    if lo < 3 || lo > hi {
        return Err(Error::InvalidParameter(format!("strand range {s:?} must satisfy 3 <= min <= max")));
    }
    Ok((lo, hi))
}

/// Effective settings of a run, echoed into every output.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub subcommand: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub braid: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strands: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    pub mode: Mode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimator: Option<Estimator>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub digit_cap: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coords: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_ref: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub survey: Option<SurveyEcho>,
    pub format: Format,
    pub log_base: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SurveyEcho {
    pub max_length: usize,
    pub strands_min: usize,
    pub strands_max: usize,
    pub refine_eps: f64,
    pub coarse_m_max: usize,
    pub refine_m_max: usize,
    pub refine_top: usize,
    pub workers: usize,
    pub checkpoint_dir: Option<PathBuf>,
}

impl RunConfig {
    fn base(subcommand: &'static str, mode: Mode, format: Format, units: Units) -> Self {
        RunConfig {
            subcommand,
            braid: None,
            strands: None,
            eps: None,
            m_max: None,
            window: None,
            mode,
            estimator: None,
            digit_cap: None,
            coords: None,
            h_ref: None,
            survey: None,
            format,
            log_base: units.base,
        }
    }

    fn echo(&self) -> Value {
        serde_json::to_value(self).expect("config serializes")
    }
}

fn read_braid(b: &BraidArgs) -> Result<BraidWord> {
    parse_braid(&b.braid, b.strands as usize)
}

fn open_output(path: &Option<PathBuf>, stdout: &mut dyn Write, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            f(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => f(stdout),
    }
}

pub fn cmd_estimate(args: &EstimateArgs, stdout: &mut dyn Write) -> Result<i32> {
    let word = read_braid(&args.braid)?;
    let params = EstimateParams {
        eps: args.eps,
        m_max: args.m_max as usize,
        window: args.window as usize,
        mode: args.mode,
        digit_cap: args.digit_cap,
    };
    params.validate()?;
    let mut cfg = RunConfig::base("estimate", args.mode, args.format, args.out.log_base);
    cfg.braid = Some(word.to_string());
    cfg.strands = Some(word.strands());
    cfg.eps = Some(params.eps);
    cfg.m_max = Some(params.m_max);
    cfg.window = (args.estimator == Estimator::Ratio).then_some(params.window);
    cfg.estimator = Some(args.estimator);
    cfg.digit_cap = (args.mode == Mode::Exact).then_some(params.digit_cap);

    let est = estimate(&word, args.estimator, &params)?;
    let units = args.out.log_base;
    open_output(&args.out.output, stdout, |w| match args.format {
        Format::Json => export::write_estimate_json(w, &est, units, &cfg.echo()),
        Format::Csv => export::write_estimate_csv(w, &est, units, &cfg.echo()),
    })?;
    Ok(if est.converged { EXIT_OK } else { EXIT_NOT_CONVERGED })
}

pub fn cmd_orbit(args: &OrbitArgs, stdout: &mut dyn Write) -> Result<i32> {
    let word = read_braid(&args.braid)?;
    if args.coords && args.mode != Mode::Exact {
        return Err(Error::InvalidParameter("--coords needs --mode exact".into()));
    }
    let mut cfg = RunConfig::base("orbit", args.mode, args.format, args.out.log_base);
    cfg.braid = Some(word.to_string());
    cfg.strands = Some(word.strands());
    cfg.m_max = Some(args.iters as usize);
    cfg.coords = Some(args.coords);
    cfg.digit_cap = (args.mode == Mode::Exact).then_some(args.digit_cap);

    let iters = args.iters as usize;
    let (trace, coords) = if args.coords {
        let (t, c) = orbit_with_coords(&word, iters, args.digit_cap)?;
        (t, Some(c))
    } else {
        (orbit_with_cap(&word, iters, args.mode, args.digit_cap)?, None)
    };
    let units = args.out.log_base;
    open_output(&args.out.output, stdout, |w| match args.format {
        Format::Csv => export::write_trace_csv(w, &trace, coords.as_deref(), units, &cfg.echo()),
        Format::Json => export::write_trace_json(w, &trace, coords.as_deref(), units, &cfg.echo()),
    })?;
    Ok(EXIT_OK)
}

fn default_workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

pub fn cmd_search(args: &SearchArgs, stdout: &mut dyn Write) -> Result<i32> {
    let max_length = args.max_length as usize;
    let (strands_min, strands_max) = parse_strand_range(&args.strands, max_length)?;
    let mut p = SurveyParams::new(max_length, strands_min, strands_max);
    p.coarse = EstimateParams {
        eps: args.eps,
        m_max: args.coarse_m_max as usize,
        window: args.window as usize,
        mode: args.mode,
        ..p.coarse
    };
    p.refine = EstimateParams {
        eps: args.refine_eps,
        m_max: args.refine_m_max as usize,
        window: args.window as usize,
        mode: args.mode,
        ..p.refine
    };
    p.refine_top = args.refine_top as usize;
    p.workers = args.workers.map(|n| n as usize).unwrap_or_else(default_workers);
    p.checkpoint_dir = args.checkpoint_dir.clone();

    let mut cfg = RunConfig::base("search", args.mode, args.format, args.out.log_base);
    cfg.eps = Some(p.coarse.eps);
    cfg.window = Some(p.coarse.window);
    cfg.estimator = Some(Estimator::Ratio);
    cfg.survey = Some(SurveyEcho {
        max_length,
        strands_min,
        strands_max,
        refine_eps: p.refine.eps,
        coarse_m_max: p.coarse.m_max,
        refine_m_max: p.refine.m_max,
        refine_top: p.refine_top,
        workers: p.workers,
        checkpoint_dir: p.checkpoint_dir.clone(),
    });

    let table = max_entropy_survey(&p)?;
    let units = args.out.log_base;
    open_output(&args.out.output, stdout, |w| match args.format {
        Format::Csv => export::write_survey_csv(w, &table, units, &cfg.echo()),
        Format::Json => export::write_survey_json(w, &table, units, &cfg.echo()),
    })?;
    Ok(EXIT_OK)
}

pub fn cmd_converge(args: &ConvergeArgs, stdout: &mut dyn Write) -> Result<i32> {
    let word = read_braid(&args.braid)?;
    let h_ref = match args.h_ref {
        Some(h) => h,
        None => reference_entropy(&word)?,
    };
    let mut cfg = RunConfig::base("converge", args.mode, args.format, args.out.log_base);
    cfg.braid = Some(word.to_string());
    cfg.strands = Some(word.strands());
    cfg.m_max = Some(args.iters as usize);
    cfg.h_ref = Some(h_ref);

    let trace = orbit_with_cap(&word, args.iters as usize, args.mode, DEFAULT_DIGIT_CAP)?;
    let fit = fit_envelope(&trace, h_ref)?;
    let units = args.out.log_base;
    open_output(&args.out.output, stdout, |w| match args.format {
        Format::Csv => export::write_fit_csv(w, &fit, units, &cfg.echo()),
        Format::Json => export::write_fit_json(w, &fit, units, &cfg.echo()),
    })?;
    Ok(EXIT_OK)
}

/// Exit code for a failed run.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NotConverged { .. } => EXIT_NOT_CONVERGED,
        Error::ResourceLimit { .. } | Error::FloatOverflow => EXIT_RESOURCE,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    EXIT_OK
                }
                _ => EXIT_USAGE,
            };
        }
    };
    let result = match &cli.command {
        Command::Estimate(a) => cmd_estimate(a, stdout),
        Command::Orbit(a) => cmd_orbit(a, stdout),
        Command::Search(a) => cmd_search(a, stdout),
        Command::Converge(a) => cmd_converge(a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}
