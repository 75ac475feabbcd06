//! Command-line surface: argument parsing, map selection, the four commands
//! and their exit codes.
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | I/O error writing output |
//! | 2 | usage or expression syntax error |
//! | 3 | degenerate map: degree below 2, or numerator and denominator share a root |
//! | 4 | internal invariant failure, or a check reported by the command failed |

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use preperiodic::certify::{bound_report, check_bounds, evaluate_bounds, make_certificates, s_of};
use preperiodic::dynatomic::default_n_max;
use preperiodic::dynmap::RationalMap;
use preperiodic::families::{generate, verify_claims, ClaimReport, Family, FamilySpec};
use preperiodic::portrait::{
    brute_force_preperiodic, build_portrait, points_up_to_height, Portrait, ORACLE_MAX_ITER,
};
use preperiodic::ProjPoint;
use rayon::prelude::*;
use serde_json::Value;
use thiserror::Error;

use crate::expr::{parse_map, ParseError};
use crate::{dot, json, text};

pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Degenerate(preperiodic::Error),
    #[error("{0}")]
    Invariant(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) => EXIT_USAGE,
            CliError::Degenerate(_) => EXIT_DEGENERATE,
            CliError::Invariant(_) | CliError::CheckFailed(_) => EXIT_INVARIANT,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<preperiodic::Error> for CliError {
    fn from(e: preperiodic::Error) -> Self {
        use preperiodic::Error as E;
        match e {
            E::DegenerateMap | E::DegreeTooSmall(_) | E::DegreeMismatch(..) | E::Zero(_) => {
                CliError::Degenerate(e)
            }
            E::InvalidParameter(m) => CliError::Usage(m),
            other => CliError::Invariant(other.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "preper", version, about = "Rational preperiodic points of rational maps of P^1 over Q")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the full rational preperiodic portrait.
    Analyze {
        #[command(flatten)]
        select: Selection,
        /// Also compare with a search over all points of height at most H.
        #[arg(long, value_name = "H")]
        height_oracle: Option<u64>,
        #[command(flatten)]
        output: Output,
    },
    /// Evaluate every bound, against the portrait or for given s and d.
    Bounds {
        #[command(flatten)]
        select: Selection,
        /// Formula-only mode: |S| including the archimedean place. Needs --d.
        #[arg(long)]
        s: Option<u64>,
        #[command(flatten)]
        output: Output,
    },
    /// S-unit certificates for every tail point and periodic point.
    Certify {
        #[command(flatten)]
        select: Selection,
        #[command(flatten)]
        output: Output,
    },
    /// Compare the portrait with a bounded-height search.
    Oracle {
        #[command(flatten)]
        select: Selection,
        #[arg(long, value_name = "H", default_value_t = 100)]
        height_oracle: u64,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Selection {
    /// The map as a rational function of x, e.g. "(x-1)*(x-2)/x^2".
    #[arg(long, allow_hyphen_values = true)]
    pub map: Option<String>,
    /// A built-in family: ex51 or ex52.
    #[arg(long)]
    pub family: Option<Family>,
    /// Family parameter (or the degree in formula-only bounds).
    #[arg(long)]
    pub d: Option<usize>,
    /// Inclusive range of family parameters, e.g. 2..8.
    #[arg(long, value_name = "A..B")]
    pub d_range: Option<DRange>,
    /// Largest period searched for; defaults by degree.
    #[arg(long, value_name = "N")]
    pub max_period: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DRange {
    pub lo: usize,
    pub hi: usize,
}

impl FromStr for DRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (a, b) = s.split_once("..").ok_or("expected A..B")?;
        let b = b.strip_prefix('=').unwrap_or(b);
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
        let (lo, hi) = (parse(a)?, parse(b)?);
        if lo > hi {
            return Err(format!("empty range {lo}..{hi}"));
        }
        Ok(DRange { lo, hi })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write to a file instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

/// One map to process.
#[derive(Debug, Clone)]
pub struct Job {
    pub label: String,
    pub spec: Option<FamilySpec>,
    pub map: RationalMap,
    pub n_max: usize,
}

enum Source {
    Expr(String),
    Family(FamilySpec),
}

impl Selection {
    fn sources(&self) -> Result<(Vec<Source>, bool)> {
        let usage = |m: &str| Err(CliError::Usage(m.into()));
        if self.max_period == Some(0) {
            return usage("--max-period must be at least 1");
        }
        match (&self.map, self.family) {
            (Some(_), Some(_)) => usage("--map and --family are exclusive"),
            (None, None) => usage("select a map with --map or --family"),
            (Some(m), None) => {
                if self.d.is_some() || self.d_range.is_some() {
                    return usage("--d and --d-range only apply to --family");
                }
                Ok((vec![Source::Expr(m.clone())], false))
            }
            (None, Some(f)) => match (self.d, self.d_range) {
                (Some(d), None) => Ok((vec![Source::Family(FamilySpec::new(f, d)?)], false)),
                (None, Some(r)) => {
                    let specs = (r.lo..=r.hi)
                        .map(|d| FamilySpec::new(f, d).map(Source::Family))
                        .collect::<std::result::Result<_, _>>()?;
                    Ok((specs, true))
                }
                _ => usage("--family needs exactly one of --d and --d-range"),
            },
        }
    }

    /// The selected maps, in parameter order, and whether a range was given.
    pub fn jobs(&self) -> Result<(Vec<Job>, bool)> {
        let (sources, many) = self.sources()?;
        if let [Source::Expr(text)] = sources.as_slice() {
            parse_map(text)?;
        }
        let jobs = par_ordered(&sources, |s| {
            let (label, spec, map) = match s {
                Source::Expr(text) => {
                    let e = parse_map(text)?;
                    (e.to_string(), None, RationalMap::build(e.num.coeffs(), e.den.coeffs())?)
                }
                Source::Family(spec) => (spec.to_string(), Some(*spec), generate(*spec)?),
            };
            let n_max = self.max_period.unwrap_or_else(|| default_n_max(map.degree()));
            Ok(Job {
                label,
                spec,
                map,
                n_max,
            })
        })?;
        Ok((jobs, many))
    }
}

/// Parallel map that keeps the input order and reports the first error in
/// that order.
fn par_ordered<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> Result<U> + Sync + Send) -> Result<Vec<U>> {
    let results: Vec<Result<U>> = items.par_iter().map(f).collect();
    results.into_iter().collect()
}

/// A command's rendered output and the checks it saw fail.
pub struct Rendered {
    pub text: String,
    pub failures: Vec<String>,
}

fn emit_json(values: Vec<Value>, many: bool) -> String {
    let v = if many {
        Value::Array(values)
    } else {
        values.into_iter().next().expect("one job")
    };
    let mut s = json::to_pretty(&v);
    s.push('\n');
    s
}

fn join_text(blocks: Vec<String>, jobs: &[Job], many: bool) -> String {
    blocks
        .into_iter()
        .zip(jobs)
        .map(|(b, j)| if many { format!("== {} ==\n{b}", j.label) } else { b })
        .collect::<Vec<_>>()
        .join("\n")
}

fn no_dot(format: Format) -> Result<()> {
    if format == Format::Dot {
        return Err(CliError::Usage("--format dot is only available for analyze".into()));
    }
    Ok(())
}

struct OracleResult {
    h: u64,
    found: BTreeSet<ProjPoint>,
    expected: BTreeSet<ProjPoint>,
}

impl OracleResult {
    fn run(p: &Portrait, h: u64) -> Self {
        OracleResult {
            h,
            found: brute_force_preperiodic(&p.map, h, ORACLE_MAX_ITER),
            expected: points_up_to_height(p, h),
        }
    }

    fn agrees(&self) -> bool {
        self.found == self.expected
    }

    fn value(&self) -> Value {
        let pts = |s: &BTreeSet<ProjPoint>| s.iter().map(json::point_doc).collect::<Vec<_>>();
        let missing: BTreeSet<_> = self.found.difference(&self.expected).cloned().collect();
        let extra: BTreeSet<_> = self.expected.difference(&self.found).cloned().collect();
        serde_json::json!({
            "height": self.h,
            "oracle": pts(&self.found),
            "portrait": pts(&self.expected),
            "missing_from_portrait": pts(&missing),
            "missing_from_oracle": pts(&extra),
            "agree": self.agrees(),
        })
    }

    fn render(&self, out: &mut String) {
        text::oracle(out, self.h, &self.found, &self.expected);
    }
}

struct Analysis {
    portrait: Portrait,
    claims: Option<ClaimReport>,
    oracle: Option<OracleResult>,
}

fn analyze(jobs: &[Job], many: bool, height: Option<u64>, format: Format) -> Result<Rendered> {
    let results = par_ordered(jobs, |j| {
        let portrait = build_portrait(&j.map, j.n_max)?;
        Ok(Analysis {
            claims: j.spec.map(|s| verify_claims(s, &portrait)),
            oracle: height.map(|h| OracleResult::run(&portrait, h)),
            portrait,
        })
    })?;
    let mut failures = Vec::new();
    for (a, j) in results.iter().zip(jobs) {
        if a.claims.as_ref().is_some_and(|c| !c.all_pass()) {
            failures.push(format!("{}: a family claim failed", j.label));
        }
        if a.oracle.as_ref().is_some_and(|o| !o.agrees()) {
            failures.push(format!("{}: portrait and oracle disagree", j.label));
        }
    }
    let text = match format {
        Format::Json => {
            let values = results
                .iter()
                .map(|a| {
                    let mut v = json::to_value(&json::portrait_doc(&a.portrait));
                    if let Some(c) = &a.claims {
                        v["claims"] = json::claims_value(c);
                    }
                    if let Some(o) = &a.oracle {
                        v["oracle"] = o.value();
                    }
                    v
                })
                .collect();
            emit_json(values, many)
        }
        Format::Dot => results
            .iter()
            .zip(jobs)
            .map(|(a, j)| dot::portrait_dot(&j.label, &a.portrait))
            .collect(),
        Format::Text => {
            let blocks = results
                .iter()
                .map(|a| {
                    let mut out = String::new();
                    text::portrait(&mut out, &a.portrait);
                    if let Some(c) = &a.claims {
                        text::claims(&mut out, c);
                    }
                    if let Some(o) = &a.oracle {
                        o.render(&mut out);
                    }
                    out
                })
                .collect();
            join_text(blocks, jobs, many)
        }
    };
    Ok(Rendered { text, failures })
}

fn bounds(select: &Selection, s: Option<u64>, format: Format) -> Result<Rendered> {
    no_dot(format)?;
    if let Some(s) = s {
        if select.map.is_some() || select.family.is_some() || select.d_range.is_some() {
            return Err(CliError::Usage("--s selects formula-only mode; drop --map and --family".into()));
        }
        let d = select
            .d
            .ok_or_else(|| CliError::Usage("formula-only mode needs --d".into()))?;
        if s == 0 || d < 2 {
            return Err(CliError::Usage("formula-only mode needs s >= 1 and d >= 2".into()));
        }
        let report = evaluate_bounds(s, d as u64, None);
        let text = match format {
            Format::Json => emit_json(vec![json::bounds_value(&report, &[])], false),
            _ => {
                let mut out = String::new();
                text::bounds(&mut out, &report, &[]);
                out
            }
        };
        return Ok(Rendered {
            text,
            failures: Vec::new(),
        });
    }
    let (jobs, many) = select.jobs()?;
    let reports = par_ordered(&jobs, |j| {
        let report = bound_report(&build_portrait(&j.map, j.n_max)?);
        let checks = check_bounds(&report);
        Ok((report, checks))
    })?;
    let failures = reports
        .iter()
        .zip(&jobs)
        .flat_map(|((_, checks), j)| {
            checks
                .iter()
                .filter(|c| !c.pass)
                .map(move |c| format!("{}: {} exceeds {}", j.label, c.quantity, c.name))
        })
        .collect();
    let text = match format {
        Format::Json => emit_json(
            reports.iter().map(|(r, c)| json::bounds_value(r, c)).collect(),
            many,
        ),
        _ => {
            let blocks = reports
                .iter()
                .zip(&jobs)
                .map(|((r, c), j)| {
                    let mut out = String::new();
                    writeln!(out, "map: {}", text::affine(&j.map)).unwrap();
                    text::bounds(&mut out, r, c);
                    out
                })
                .collect();
            join_text(blocks, &jobs, many)
        }
    };
    Ok(Rendered { text, failures })
}

fn certify(select: &Selection, format: Format) -> Result<Rendered> {
    no_dot(format)?;
    let (jobs, many) = select.jobs()?;
    let certs = par_ordered(&jobs, |j| Ok(make_certificates(&build_portrait(&j.map, j.n_max)?)))?;
    let failures = certs
        .iter()
        .zip(&jobs)
        .flat_map(|(cs, j)| {
            cs.iter()
                .filter(|c| c.is_failure())
                .map(move |c| format!("{}: ({}, {}) is not an S-unit pair", j.label, c.tail_point, c.periodic_point))
        })
        .collect();
    let text = match format {
        Format::Json => emit_json(
            certs
                .iter()
                .zip(&jobs)
                .map(|(cs, j)| {
                    let (s, s_exact) = s_of(&j.map);
                    serde_json::json!({
                        "map": json::map_doc(&j.map),
                        "s": s,
                        "s_exact": s_exact,
                        "certificates": cs.iter().map(json::certificate_value).collect::<Vec<_>>(),
                        "failures": cs.iter().filter(|c| c.is_failure()).count(),
                    })
                })
                .collect(),
            many,
        ),
        _ => {
            let blocks = certs
                .iter()
                .zip(&jobs)
                .map(|(cs, j)| {
                    let mut out = String::new();
                    text::map_header(&mut out, &j.map);
                    text::certificates(&mut out, cs);
                    out
                })
                .collect();
            join_text(blocks, &jobs, many)
        }
    };
    Ok(Rendered { text, failures })
}

fn oracle(select: &Selection, h: u64, format: Format) -> Result<Rendered> {
    no_dot(format)?;
    let (jobs, many) = select.jobs()?;
    let results = par_ordered(&jobs, |j| Ok(OracleResult::run(&build_portrait(&j.map, j.n_max)?, h)))?;
    let failures = results
        .iter()
        .zip(&jobs)
        .filter(|(o, _)| !o.agrees())
        .map(|(_, j)| format!("{}: portrait and oracle disagree", j.label))
        .collect();
    let text = match format {
        Format::Json => emit_json(results.iter().map(OracleResult::value).collect(), many),
        _ => {
            let blocks = results
                .iter()
                .zip(&jobs)
                .map(|(o, j)| {
                    let mut out = format!("map: {}\n", text::affine(&j.map));
                    o.render(&mut out);
                    out
                })
                .collect();
            join_text(blocks, &jobs, many)
        }
    };
    Ok(Rendered { text, failures })
}

/// Run a parsed command and write its output.
pub fn run(cli: Cli) -> Result<()> {
    let (rendered, output) = match cli.command {
        Command::Analyze {
            select,
            height_oracle,
            output,
        } => {
            let (jobs, many) = select.jobs()?;
            (analyze(&jobs, many, height_oracle, output.format)?, output)
        }
        Command::Bounds { select, s, output } => (bounds(&select, s, output.format)?, output),
        Command::Certify { select, output } => (certify(&select, output.format)?, output),
        Command::Oracle {
            select,
            height_oracle,
            output,
        } => (oracle(&select, height_oracle, output.format)?, output),
    };
    match &output.out {
        Some(path) => std::fs::write(path, &rendered.text)?,
        None => print!("{}", rendered.text),
    }
    if rendered.failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::CheckFailed(rendered.failures.join("; ")))
    }
}

/// Parse arguments, run, and map every outcome to an exit code. Panics
/// inside the library are internal invariant failures.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match panic::catch_unwind(AssertUnwindSafe(|| run(cli))) {
        Ok(Ok(())) => 0,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
        Err(_) => {
            eprintln!("error: internal invariant failure");
            EXIT_INVARIANT
        }
    }
}
