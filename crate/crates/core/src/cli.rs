//! The `trinomial` command-line driver.
//!
//! Sweeps are written as JSON lines (or CSV), single-shot commands as one JSON
//! document. The run header goes to `<out>.meta.json` next to a report file, or
//! to stderr when the report goes to stdout, so record streams stay pure.
//!
//! Exit status: 0 when every check passes, 1 when a checked claim fails, 2 on
//! usage, encoding or budget errors.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::bounds::{self, BoundQuery};
use crate::error::Error;
use crate::gf::{ExtElem, FieldSpec, FieldTower};
use crate::pp::sweep::{self, ClassifySummary, ReportHeader, SweepConfig, SweepMode};
use crate::pp::{self, TrinomialParams};
use crate::surface::{self, ClaimRow};

/// Environment variable naming the default report directory.
pub const OUT_DIR_ENV: &str = "TRINOMIAL_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "trinomial", version, about = "Permutation trinomials X^(q^2-q+1) + A X^(q^2) + B X over GF(q^3), q = 2^m")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Jsonl,
    Csv,
    Text,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Field exponent: q = 2^m
    #[arg(long)]
    pub m: Option<u32>,
    /// JSON field specification overriding the built-in polynomials
    #[arg(long)]
    pub field: Option<PathBuf>,
    /// Report file; defaults to stdout, or a file under $TRINOMIAL_OUT_DIR
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: all cores)
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct Pair {
    /// Coefficient A as "a0,a1,a2" (hex coordinates)
    #[arg(long = "A")]
    pub a: Option<String>,
    /// Coefficient B as "a0,a1,a2" (hex coordinates)
    #[arg(long = "B")]
    pub b: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify every (A, B), or a seeded sample of them
    Classify {
        #[command(flatten)]
        common: Common,
        /// Sample this many pairs instead of sweeping exhaustively
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        force_budget: bool,
    },
    /// Classify one pair
    Check {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        pair: Pair,
    },
    /// Check the coefficient and factor claims on G for sampled pairs
    Identities {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 20)]
        samples: u64,
        /// Count rows with a verified corrected form as passing
        #[arg(long)]
        accept_corrections: bool,
    },
    /// Eliminate X1, X2 and print G with its coefficient checks
    DeriveG {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        pair: Pair,
    },
    /// Count off-line points of the collision curve and compare with the permutation test
    CountPoints {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        pair: Pair,
    },
    /// Evaluate the Lang-Weil threshold exactly
    Bound {
        #[arg(long, default_value_t = bounds::DEFAULT_R)]
        r: u32,
        #[arg(long, default_value_t = bounds::DEFAULT_DELTA)]
        delta: u64,
        #[arg(long, default_value_t = bounds::DEFAULT_THRESHOLD)]
        threshold: u64,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Solve y^(q+1) + y^q + 1 = 0
    UnitCircle {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass = 0,
    ClaimFailed = 1,
    Usage = 2,
}

impl Status {
    pub fn code(self) -> i32 {
        self as i32
    }

    fn from_pass(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::ClaimFailed
        }
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Lib(Error),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(std::io::Error::other(e))
    }
}

type Outcome = std::result::Result<Status, Failure>;

/// Header recorded with every report.
#[derive(Debug, Clone, Serialize)]
pub struct RunHeader {
    pub command: String,
    #[serde(flatten)]
    pub report: ReportHeader,
}

struct Sink<'a> {
    writer: Box<dyn Write + 'a>,
    meta: Option<PathBuf>,
}

impl<'a> Sink<'a> {
    fn open(out: Option<&Path>, default_name: &str, stdout: &'a mut dyn Write) -> std::io::Result<Self> {
        let path = match out {
            Some(p) => Some(p.to_path_buf()),
            None => std::env::var_os(OUT_DIR_ENV).map(|d| PathBuf::from(d).join(default_name)),
        };
        match path {
            Some(p) => {
                if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                    std::fs::create_dir_all(dir)?;
                }
                let mut meta = p.clone().into_os_string();
                meta.push(".meta.json");
                Ok(Sink { writer: Box::new(BufWriter::new(File::create(&p)?)), meta: Some(meta.into()) })
            }
            None => Ok(Sink { writer: Box::new(stdout), meta: None }),
        }
    }

    fn header(&self, h: &RunHeader, stderr: &mut dyn Write) -> std::io::Result<()> {
        match &self.meta {
            Some(p) => {
                let mut w = BufWriter::new(File::create(p)?);
                serde_json::to_writer_pretty(&mut w, h)?;
                w.write_all(b"\n")?;
                w.flush()
            }
            None => {
                serde_json::to_writer(&mut *stderr, h)?;
                stderr.write_all(b"\n")
            }
        }
    }

    fn json<T: Serialize>(&mut self, value: &T) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut self.writer, value)?;
        self.writer.write_all(b"\n")?;
        self.writer.flush()
    }
}

/// Runs a parsed command, writing reports to `stdout` (or files) and
/// diagnostics to `stderr`.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Status {
    let result = match &cli.command {
        Command::Classify { common, samples, force_budget } => classify(common, *samples, *force_budget, stdout, stderr),
        Command::Check { common, pair } => check(common, pair, stdout, stderr),
        Command::Identities { common, pair, samples, accept_corrections } => {
            identities(common, pair, *samples, *accept_corrections, stdout, stderr)
        }
        Command::DeriveG { common, pair } => derive_g(common, pair, stdout, stderr),
        Command::CountPoints { common, pair } => count_points(common, pair, stdout, stderr),
        Command::Bound { r, delta, threshold, m, out, format } => {
            bound(*r, *delta, *threshold, *m, out.as_deref(), *format, stdout)
        }
        Command::UnitCircle { common } => unit_circle(common, stdout, stderr),
    };
    match result {
        Ok(s) => s,
        Err(f) => {
            let (msg, status) = match f {
                Failure::Usage(m) => (m, Status::Usage),
                Failure::Lib(e @ Error::Elimination { .. }) => (e.to_string(), Status::ClaimFailed),
                Failure::Lib(e) => (e.to_string(), Status::Usage),
                Failure::Io(e) => (format!("i/o error: {e}"), Status::Usage),
            };
            let _ = writeln!(stderr, "error: {msg}");
            status
        }
    }
}

fn field(common: &Common) -> std::result::Result<Arc<FieldTower>, Failure> {
    let f = match &common.field {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let spec = FieldSpec::from_json(&text)?;
            if common.m.is_some_and(|m| m != spec.m) {
                return Err(Failure::Usage(format!("--m disagrees with m = {} in {}", spec.m, path.display())));
            }
            FieldTower::from_spec(&spec)?
        }
        None => {
            let m = common.m.ok_or_else(|| Failure::Usage("--m is required".into()))?;
            FieldTower::new(m)?
        }
    };
    Ok(Arc::new(f))
}

fn pair(f: &FieldTower, p: &Pair) -> std::result::Result<TrinomialParams, Failure> {
    let (Some(a), Some(b)) = (&p.a, &p.b) else {
        return Err(Failure::Usage("this command needs both --A and --B".into()));
    };
    Ok(TrinomialParams::new(f.parse_elem(a)?, f.parse_elem(b)?)?)
}

fn header(command: &str, f: &FieldTower, mode: SweepMode, single: bool) -> RunHeader {
    let mut report = ReportHeader::new(f, mode);
    if single {
        report.mode = "single".into();
    }
    RunHeader { command: command.into(), report }
}

fn jobs(common: &Common) -> usize {
    common.jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn only_json(format: Option<Format>, allowed: &[Format]) -> std::result::Result<Format, Failure> {
    let fmt = format.unwrap_or(allowed[0]);
    if allowed.contains(&fmt) {
        Ok(fmt)
    } else {
        Err(Failure::Usage(format!("format {fmt:?} is not available for this command")))
    }
}

fn classify(
    common: &Common,
    samples: Option<u64>,
    force_budget: bool,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Outcome {
    let f = field(common)?;
    let mode = match samples {
        Some(samples) => SweepMode::Sampled { samples, seed: common.seed },
        None => SweepMode::Exhaustive,
    };
    let cfg = SweepConfig { mode, jobs: jobs(common), force_budget };
    sweep::check_budget(&f, &cfg)?;
    let fmt = only_json(common.format, &[Format::Jsonl, Format::Csv, Format::Json, Format::Text])?;
    let ext = match fmt {
        Format::Jsonl => "jsonl",
        Format::Csv => "csv",
        Format::Json => "json",
        Format::Text => "txt",
    };
    let mut sink = Sink::open(common.out.as_deref(), &format!("classify-m{}.{ext}", f.m()), stdout)?;
    let h = header("classify", &f, mode, false);
    sink.header(&h, stderr)?;
    let summary = match fmt {
        Format::Jsonl => sweep::classify_field(&f, &cfg, |r| sweep::write_jsonl(&mut sink.writer, r))?,
        Format::Text => sweep::classify_field(&f, &cfg, |r| writeln!(sink.writer, "{}", sweep::csv_row(r).join(" ")))?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut sink.writer);
            w.write_record(sweep::CSV_HEADER)?;
            let s = sweep::classify_field(&f, &cfg, |r| w.write_record(sweep::csv_row(r)).map_err(std::io::Error::other))?;
            w.flush()?;
            s
        }
        Format::Json => {
            let (records, s) = sweep::classify_field_vec(&f, &cfg)?;
            sink.json(&json!({ "header": h, "records": records, "summary": s }))?;
            s
        }
    };
    sink.writer.flush()?;
    report_summary(&summary, stderr)?;
    Ok(Status::from_pass(summary.sufficiency_violations == 0 && summary.prop3_violations == 0))
}

fn report_summary(s: &ClassifySummary, stderr: &mut dyn Write) -> std::io::Result<()> {
    serde_json::to_writer(&mut *stderr, &json!({ "summary": s }))?;
    stderr.write_all(b"\n")
}

fn check(common: &Common, p: &Pair, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Outcome {
    let f = field(common)?;
    let p = pair(&f, p)?;
    only_json(common.format, &[Format::Json])?;
    let r = pp::classify_pair(&f, &p);
    let mut sink = Sink::open(common.out.as_deref(), &format!("check-m{}.json", f.m()), stdout)?;
    sink.header(&header("check", &f, SweepMode::Exhaustive, true), stderr)?;
    sink.json(&r)?;
    let consistent = !((r.cond1 || r.cond2) && !r.is_pp) && !((r.prop3_i || r.prop3_ii) && r.is_pp);
    Ok(Status::from_pass(consistent))
}

fn identities(
    common: &Common,
    p: &Pair,
    samples: u64,
    accept_corrections: bool,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Outcome {
    let f = field(common)?;
    only_json(common.format, &[Format::Json])?;
    let pairs = match (&p.a, &p.b) {
        (None, None) => sweep::sampled_pairs(&f, samples, common.seed),
        _ => vec![pair(&f, p)?],
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs(common).max(1))
        .build()
        .map_err(|e| Failure::Io(std::io::Error::other(e)))?;
    let reports = pool.install(|| {
        pairs.par_iter().map(|p| surface::verify_claim_table(&f, p)).collect::<Vec<_>>()
    });
    let mut rows: Vec<ClaimRow> = Vec::new();
    for r in reports {
        rows.extend(r?.rows);
    }
    let mut sink = Sink::open(common.out.as_deref(), &format!("identities-m{}.json", f.m()), stdout)?;
    let mode = SweepMode::Sampled { samples: pairs.len() as u64, seed: common.seed };
    sink.header(&header("identities", &f, mode, false), stderr)?;
    sink.json(&rows)?;
    let literal = rows.iter().filter(|r| !r.passed).count();
    let unexplained = rows.iter().filter(|r| !r.passed && r.corrected_passed != Some(true)).count();
    writeln!(
        stderr,
        "{} rows, {literal} failing as stated, {unexplained} without a verified correction",
        rows.len()
    )?;
    Ok(Status::from_pass(if accept_corrections { unexplained == 0 } else { literal == 0 }))
}

fn derive_g(common: &Common, p: &Pair, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Outcome {
    let f = field(common)?;
    let p = pair(&f, p)?;
    let fmt = only_json(common.format, &[Format::Json, Format::Text])?;
    let g = surface::derive_g(&f, &p)?;
    let checks = g.checks();
    let ext = if fmt == Format::Json { "json" } else { "txt" };
    let mut sink = Sink::open(common.out.as_deref(), &format!("derive-g-m{}.{ext}", f.m()), stdout)?;
    sink.header(&header("derive-g", &f, SweepMode::Exhaustive, true), stderr)?;
    if fmt == Format::Json {
        let doc = json!({
            "params": { "m": f.m(), "A": p.a(), "B": p.b(), "field": f.spec() },
            "G_terms": g.g.to_json(),
            "alpha": g.alpha.to_string(),
            "beta": g.beta.to_string(),
            "gamma": g.gamma.to_string(),
            "delta": g.delta.to_string(),
            "stripped_factors": g.strips,
            "checks": checks,
        });
        sink.json(&doc)?;
    } else {
        let w = &mut sink.writer;
        writeln!(w, "G = {}", g.g)?;
        for (name, c) in [("alpha", &g.alpha), ("beta", &g.beta), ("gamma", &g.gamma), ("delta", &g.delta)] {
            writeln!(w, "{name} = {c}")?;
        }
        for s in &g.strips {
            writeln!(w, "stripped {} at {}", s.factor, s.step)?;
        }
        writeln!(w, "checks: {checks:?}")?;
        w.flush()?;
    }
    Ok(Status::from_pass(checks.all()))
}

fn count_points(common: &Common, p: &Pair, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Outcome {
    let f = field(common)?;
    let p = pair(&f, p)?;
    only_json(common.format, &[Format::Json])?;
    let count = surface::curve_point_count(&f, &p, false)?;
    let root = pp::nontrivial_root(&f, &p);
    let is_pp = pp::is_permutation(&f, &p);
    let equivalent = is_pp == (count.off_line_points == 0 && root.is_none());
    let mut sink = Sink::open(common.out.as_deref(), &format!("count-points-m{}.json", f.m()), stdout)?;
    sink.header(&header("count-points", &f, SweepMode::Exhaustive, true), stderr)?;
    sink.json(&json!({
        "A": p.a(),
        "B": p.b(),
        "off_line_points": count.off_line_points,
        "examples": count.examples,
        "nonzero_root": root,
        "is_pp": is_pp,
        "equivalence_holds": equivalent,
    }))?;
    Ok(Status::from_pass(equivalent))
}

fn bound(
    r: u32,
    delta: u64,
    threshold: u64,
    m: Option<u32>,
    out: Option<&Path>,
    format: Option<Format>,
    stdout: &mut dyn Write,
) -> Outcome {
    if r == 0 || delta == 0 || m == Some(0) {
        return Err(Failure::Usage("r, delta and m must be positive".into()));
    }
    let fmt = only_json(format, &[Format::Json, Format::Text])?;
    let (verdict, minimal) = match m {
        Some(m) => (bounds::evaluate(&BoundQuery::new(r, delta, threshold, m)), None),
        None => {
            let m = bounds::minimal_m_for(r, delta, threshold, 256)
                .ok_or_else(|| Failure::Usage("no m up to 256 satisfies the bound".into()))?;
            (bounds::evaluate(&BoundQuery::new(r, delta, threshold, m)), Some(m))
        }
    };
    let applicable = bounds::lang_weil_applicable(&verdict.query);
    let mut sink = Sink::open(out, "bound.json", stdout)?;
    if fmt == Format::Json {
        sink.json(&json!({
            "minimal_m": minimal,
            "lang_weil_applicable": applicable,
            "verdict": verdict,
            "version": env!("CARGO_PKG_VERSION"),
        }))?;
    } else {
        let q = &verdict.query;
        let w = &mut sink.writer;
        if let Some(m) = minimal {
            writeln!(w, "minimal m = {m}")?;
        }
        writeln!(
            w,
            "m = {}: q^{} - {} q^({}-1/2) - 5*{}^(13/3) q^{} > {} is {}",
            q.m,
            q.r,
            q.middle_coefficient(),
            q.r,
            q.delta,
            q.r - 1,
            q.threshold,
            verdict.holds
        )?;
        writeln!(w, "lower bound in [{}, {}] / 2^{}", verdict.lower_bound.lo, verdict.lower_bound.hi, verdict.lower_bound.bits)?;
        writeln!(w, "approx {:.6e}", verdict.lower_bound.approx)?;
        writeln!(w, "lang-weil applicable: {applicable}")?;
        w.flush()?;
    }
    Ok(Status::Pass)
}

fn unit_circle(common: &Common, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Outcome {
    let f = field(common)?;
    only_json(common.format, &[Format::Json])?;
    let sols: Vec<ExtElem> = pp::unit_equation_solutions(&f);
    let all_norm_one = sols.iter().all(|&y| f.norm(y).is_one());
    let expected = f.q() + 1;
    let mut sink = Sink::open(common.out.as_deref(), &format!("unit-circle-m{}.json", f.m()), stdout)?;
    sink.header(&header("unit-circle", &f, SweepMode::Exhaustive, true), stderr)?;
    sink.json(&json!({
        "m": f.m(),
        "count": sols.len(),
        "expected": expected,
        "all_norm_one": all_norm_one,
        "solutions": sols,
    }))?;
    Ok(Status::from_pass(sols.len() as u64 == expected && all_norm_one))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (Status, String, String) {
        let cli = Cli::try_parse_from(std::iter::once("trinomial").chain(args.iter().copied())).unwrap();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let s = run(&cli, &mut out, &mut err);
        (s, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn missing_pair_is_usage_error() {
        let (s, _, err) = run_args(&["check", "--m", "2", "--A", "1,0,0"]);
        assert_eq!(s, Status::Usage);
        assert!(err.contains("--B"));
    }

    #[test]
    fn malformed_element_is_usage_error() {
        let (s, _, _) = run_args(&["check", "--m", "2", "--A", "9,0,0", "--B", "1,0,0"]);
        assert_eq!(s, Status::Usage);
    }

    #[test]
    fn exhaustive_classify_refused_above_four() {
        let (s, out, err) = run_args(&["classify", "--m", "5"]);
        assert_eq!(s, Status::Usage);
        assert!(out.is_empty());
        assert!(err.contains("budget"));
    }

    #[test]
    fn bound_reports_minimal_m() {
        let (s, out, _) = run_args(&["bound", "--r", "2", "--delta", "12", "--threshold", "36"]);
        assert_eq!(s, Status::Pass);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["minimal_m"], 19);
        assert_eq!(v["verdict"]["holds"], true);
    }

    #[test]
    fn unit_circle_counts() {
        let (s, out, _) = run_args(&["unit-circle", "--m", "3"]);
        assert_eq!(s, Status::Pass);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["count"], 9);
    }
}
