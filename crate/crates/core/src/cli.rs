//! `steerkit` command-line front-end.
//!
//! Exit codes: 0 success, 1 audit failure, 2 input error, 3 no threshold in
//! the requested range.

use std::ffi::OsString;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::audit::run_audit;
use crate::criteria::{classify_selected, CriterionId, CriterionOptions, CriterionReport};
use crate::error::{Error, Result};
use crate::par::Execution;
use crate::qstate::{state_from_json, DensityMatrix, FamilyKind};
use crate::scan::{
    detection_counts, find_threshold, format_sig, parse_number, sweep, write_csv, GridSpec,
    ParamRange, ThresholdQuery,
};
use crate::tol;

pub const EXIT_OK: i32 = 0;
pub const EXIT_AUDIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NO_THRESHOLD: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "steerkit", version, about = "Pauli-measurement steering criteria for two-qubit states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate steering criteria on one state.
    Classify(ClassifyArgs),
    /// Sweep a state family over a parameter grid and write CSV.
    Scan(ScanArgs),
    /// Bisect for the parameter value where a criterion starts detecting.
    Threshold(ThresholdArgs),
    /// Check numerical invariants over random states.
    Audit(AuditArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Json,
    Csv,
}

#[derive(clap::Args, Debug)]
pub struct ClassifyArgs {
    /// werner | bell-diagonal | gisin
    #[arg(long, conflicts_with = "state", required_unless_present = "state")]
    pub family: Option<String>,
    /// Family parameter as name=value (repeatable).
    #[arg(long = "param", value_name = "NAME=VALUE")]
    pub params: Vec<String>,
    /// JSON state file: {"rho": [[[re, im], ...], ...]}.
    #[arg(long)]
    pub state: Option<PathBuf>,
    /// Comma-separated criteria (default: all).
    #[arg(long)]
    pub criteria: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Detection margin past each bound.
    #[arg(long, default_value_t = tol::DETECTION)]
    pub tol: f64,
    /// Evaluate symmetric criteria on asymmetric states.
    #[arg(long)]
    pub allow_asymmetric: bool,
}

#[derive(clap::Args, Debug)]
pub struct ScanArgs {
    #[arg(long)]
    pub family: String,
    /// Ranges as name=lo:hi:count, comma-separated.
    #[arg(long)]
    pub grid: String,
    /// Alias one parameter to another, e.g. c3=c1 (repeatable).
    #[arg(long = "constraint", value_name = "NAME=NAME")]
    pub constraints: Vec<String>,
    /// Fixed family parameter as name=value (repeatable).
    #[arg(long = "param", value_name = "NAME=VALUE")]
    pub params: Vec<String>,
    /// Comma-separated criteria (default: all).
    #[arg(long)]
    pub criteria: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = tol::DETECTION)]
    pub tol: f64,
    #[arg(long)]
    pub allow_asymmetric: bool,
}

#[derive(clap::Args, Debug)]
pub struct ThresholdArgs {
    #[arg(long)]
    pub family: String,
    /// Parameter to vary.
    #[arg(long)]
    pub vary: String,
    /// Search interval lo:hi.
    #[arg(long, default_value = "0:1")]
    pub range: String,
    #[arg(long)]
    pub criterion: String,
    /// Bisection width.
    #[arg(long, default_value_t = tol::THRESHOLD)]
    pub tol: f64,
    /// Fixed family parameter as name=value (repeatable).
    #[arg(long = "param", value_name = "NAME=VALUE")]
    pub params: Vec<String>,
    #[arg(long)]
    pub allow_asymmetric: bool,
}

#[derive(clap::Args, Debug)]
pub struct AuditArgs {
    /// Number of random states.
    #[arg(long = "random", default_value_t = 1000)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Ginibre rank (1 gives pure states).
    #[arg(long, default_value_t = 4)]
    pub rank: usize,
}

fn parse_assignment(s: &str) -> Result<(String, f64)> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| Error::Parse(format!("expected name=value, got `{s}`")))?;
    Ok((name.trim().to_string(), parse_number(value)?))
}

fn parse_criteria(list: Option<&str>) -> Result<Vec<CriterionId>> {
    let Some(list) = list else {
        return Ok(CriterionId::ALL.to_vec());
    };
    let items: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if items.is_empty() {
        return Err(Error::Parse("empty criteria list".into()));
    }
    if items.iter().any(|s| s.eq_ignore_ascii_case("all")) {
        return Ok(CriterionId::ALL.to_vec());
    }
    items.into_iter().map(str::parse).collect()
}

fn options(tol: f64, allow_asymmetric: bool) -> Result<CriterionOptions> {
    if !(tol >= 0.0) {
        return Err(Error::Parse(format!("tolerance must be non-negative, got {tol}")));
    }
    Ok(CriterionOptions {
        tol,
        allow_asymmetric,
        ..Default::default()
    })
}

fn load_state(args: &ClassifyArgs) -> Result<DensityMatrix> {
    if let Some(path) = &args.state {
        return state_from_json(&fs::read_to_string(path)?);
    }
    let family = FamilyKind::parse(args.family.as_deref().unwrap_or_default())?;
    let pairs = args
        .params
        .iter()
        .map(|s| parse_assignment(s))
        .collect::<Result<Vec<_>>>()?;
    family.spec_from_pairs(&pairs)?.build()
}

fn write_reports(out: &mut dyn Write, reports: &[CriterionReport], format: Format) -> Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, reports)?;
            writeln!(out)?;
        }
        Format::Csv => {
            writeln!(out, "criterion,statistic,bound,direction,steerable,margin,applicable")?;
            for r in reports {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    r.criterion,
                    format_sig(r.statistic, 12),
                    format_sig(r.bound, 12),
                    direction_name(r),
                    u8::from(r.steerable),
                    format_sig(r.margin, 12),
                    u8::from(r.applicable)
                )?;
            }
        }
        Format::Table => {
            writeln!(
                out,
                "{:<10} {:>16} {:>14} {:<6} {:>16} {:<9} {}",
                "criterion", "statistic", "bound", "dir", "margin", "steerable", "applicable"
            )?;
            for r in reports {
                writeln!(
                    out,
                    "{:<10} {:>16} {:>14} {:<6} {:>16} {:<9} {}",
                    r.criterion.name(),
                    format_sig(r.statistic, 12),
                    format_sig(r.bound, 10),
                    if direction_name(r) == "VIOLATES_ABOVE" { ">" } else { "<" },
                    format_sig(r.margin, 12),
                    if r.steerable { "yes" } else { "no" },
                    if r.applicable { "yes" } else { "no" },
                )?;
            }
        }
    }
    Ok(())
}

fn direction_name(r: &CriterionReport) -> &'static str {
    match r.direction {
        crate::criteria::Direction::ViolatesAbove => "VIOLATES_ABOVE",
        crate::criteria::Direction::ViolatesBelow => "VIOLATES_BELOW",
    }
}

fn cmd_classify(args: &ClassifyArgs, out: &mut dyn Write) -> Result<i32> {
    let rho = load_state(args)?;
    let criteria = parse_criteria(args.criteria.as_deref())?;
    let opts = options(args.tol, args.allow_asymmetric)?;
    let reports = classify_selected(&rho, &criteria, &opts)?;
    write_reports(out, &reports, args.format)?;
    Ok(EXIT_OK)
}

/// Builds the grid for `scan` from its flags.
pub fn grid_from_args(args: &ScanArgs) -> Result<GridSpec> {
    let ranges = args
        .grid
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(ParamRange::parse)
        .collect::<Result<Vec<_>>>()?;
    let aliases = args
        .constraints
        .iter()
        .map(|c| {
            c.split_once('=')
                .map(|(t, s)| (t.trim().to_string(), s.trim().to_string()))
                .ok_or_else(|| Error::Grid(format!("expected name=name constraint, got `{c}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    let fixed = args
        .params
        .iter()
        .map(|s| parse_assignment(s))
        .collect::<Result<Vec<_>>>()?;
    Ok(GridSpec {
        ranges,
        aliases,
        fixed,
        criteria: parse_criteria(args.criteria.as_deref())?,
    })
}

fn cmd_scan(args: &ScanArgs, out: &mut dyn Write) -> Result<i32> {
    let family = FamilyKind::parse(&args.family)?;
    let grid = grid_from_args(args)?;
    let opts = options(args.tol, args.allow_asymmetric)?;
    let rows = sweep(family, &grid, &opts, Execution::from_env())?;

    let mut file = BufWriter::new(fs::File::create(&args.out)?);
    write_csv(&mut file, family, &rows)?;
    file.flush()?;

    let physical = rows.iter().filter(|r| r.is_physical()).count();
    let counts = detection_counts(&rows);
    let summary: Vec<String> = counts.iter().map(|(c, n)| format!("{c}={n}")).collect();
    writeln!(
        out,
        "points={} physical={} detected: {}",
        rows.len(),
        physical,
        summary.join(" ")
    )?;
    Ok(EXIT_OK)
}

fn cmd_threshold(args: &ThresholdArgs, out: &mut dyn Write) -> Result<i32> {
    let family = FamilyKind::parse(&args.family)?;
    let (lo, hi) = args
        .range
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("expected lo:hi, got `{}`", args.range)))?;
    let mut query = ThresholdQuery::new(
        family,
        &args.vary,
        args.criterion.parse()?,
        parse_number(lo)?,
        parse_number(hi)?,
    )
    .with_tol(args.tol);
    for p in &args.params {
        let (name, value) = parse_assignment(p)?;
        query = query.with_fixed(&name, value);
    }
    let opts = options(tol::DETECTION, args.allow_asymmetric)?;
    let t = find_threshold(&query, &opts)?;
    writeln!(out, "{}", format_sig(t, 10))?;
    Ok(EXIT_OK)
}

fn cmd_audit(args: &AuditArgs, out: &mut dyn Write) -> Result<i32> {
    let summary = run_audit(args.count, args.seed, args.rank, Execution::from_env())?;
    writeln!(out, "{summary}")?;
    Ok(if summary.all_passed() {
        EXIT_OK
    } else {
        EXIT_AUDIT_FAILED
    })
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Classify(a) => cmd_classify(a, out),
        Command::Scan(a) => cmd_scan(a, out),
        Command::Threshold(a) => cmd_threshold(a, out),
        Command::Audit(a) => cmd_audit(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e @ Error::NoSignChange { .. }) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_NO_THRESHOLD
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}
