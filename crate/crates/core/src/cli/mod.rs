//! The `verify` command-line tool.
//!
//! Exit codes: 0 all records pass, 1 some record fails its tolerance,
//! 2 bad arguments, 3 non-convergence or I/O failure.

pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::Error;
use crate::fracfourier::{self, SupSweep, DEFAULT_GRID_OFFSET};
use crate::funceq::{
    self, fe_record, in_critical_strip, in_left_strip, GridSpec, TolerancePolicy,
    VerificationRecord, CHAIN_FREQUENCIES, DEFAULT_EXCLUSION_RADIUS,
};
use crate::mellin::TruncationConfig;

pub use report::Format;

pub const EXIT_OK: i32 = 0;
pub const EXIT_TOLERANCE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Overrides the sample offset of the partial-sum sweep run by `all`.
pub const SEED_OFFSET_VAR: &str = "ZMV_SEED_OFFSET";

const SWEEP_TERMS: usize = 1000;
const SWEEP_POINTS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Sawtooth Mellin transform against ζ(s)/(−s), 0 < ℜs < 1
    Eq1,
    /// Telescoped transform against (2^s − 1)ζ(s)/s, 0 < ℜs < 1
    Telescope,
    /// Term-wise sine transforms at 2π, 4π and the summed series, −1 < ℜs < 0
    Interchange,
    /// Numeric against closed-form sine transform at 2π, 4π, 8π, −1 < ℜs < 0
    SineMellin,
    /// ζ(s) against χ(s)ζ(1 − s)
    Fe,
    /// Every chain step applicable at each point
    Chain,
    /// `chain` in the strips, `fe` elsewhere, plus the partial-sum sweep
    All,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Eq1 => "eq1",
            Command::Telescope => "telescope",
            Command::Interchange => "interchange",
            Command::SineMellin => "sine-mellin",
            Command::Fe => "fe",
            Command::Chain => "chain",
            Command::All => "all",
        }
    }

    /// (re range, im range, steps) used when the flags are absent.
    fn default_grid(self) -> ((f64, f64), (f64, f64), (usize, usize)) {
        match self {
            Command::Eq1 | Command::Telescope => ((0.05, 0.95), (-20.0, 20.0), (10, 20)),
            Command::Interchange | Command::SineMellin => ((-0.95, -0.05), (-10.0, 10.0), (10, 5)),
            Command::Fe => ((-10.0, 10.0), (-30.0, 30.0), (20, 25)),
            Command::Chain | Command::All => ((-0.95, 0.95), (-20.0, 20.0), (20, 9)),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "verify",
    version,
    about = "Numerical checks of the zeta functional equation"
)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Real-axis range
    #[arg(long, num_args = 2, value_names = ["MIN", "MAX"], allow_negative_numbers = true)]
    re: Option<Vec<f64>>,
    /// Imaginary-axis range
    #[arg(long, num_args = 2, value_names = ["MIN", "MAX"], allow_negative_numbers = true)]
    im: Option<Vec<f64>>,
    /// Points along the real and imaginary axes
    #[arg(long, num_args = 2, value_names = ["RE", "IM"])]
    steps: Option<Vec<usize>>,
    #[arg(long, default_value_t = 1e-8, allow_negative_numbers = true)]
    abs_tol: f64,
    #[arg(long, default_value_t = 1e-9, allow_negative_numbers = true)]
    rel_tol: f64,
    /// Unit intervals (sawtooth transforms) or lobes (sine transform)
    #[arg(long)]
    max_intervals: Option<usize>,
    /// Terms of the interchanged series
    #[arg(long)]
    n_terms: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the report here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    no_parallel: bool,
    #[arg(long, default_value_t = DEFAULT_EXCLUSION_RADIUS, allow_negative_numbers = true)]
    exclusion_radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub grid: GridSpec,
    pub trunc: TruncationConfig,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub format: Format,
    pub out_path: Option<PathBuf>,
    pub parallel: bool,
    pub sweep_offset: f64,
}

impl RunConfig {
    pub fn tolerances(&self) -> TolerancePolicy {
        TolerancePolicy {
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
        }
    }
}

fn pair<T: Copy>(v: Option<Vec<T>>, default: (T, T)) -> (T, T) {
    v.map_or(default, |v| (v[0], v[1]))
}

fn build_config(args: Args, seed_offset: Option<String>) -> Result<RunConfig, String> {
    let (re, im, steps) = args.command.default_grid();
    let mut grid = GridSpec::new(
        pair(args.re, re),
        pair(args.im, im),
        pair(args.steps, steps),
    )
    .map_err(|e| e.to_string())?;
    grid.exclusion_radius = args.exclusion_radius;
    grid.validate().map_err(|e| e.to_string())?;

    let mut trunc = TruncationConfig::default();
    if let Some(n) = args.max_intervals {
        trunc.max_intervals = n;
    }
    if let Some(n) = args.n_terms {
        trunc.series_terms = n;
    }
    trunc.validate().map_err(|e| e.to_string())?;

    for (name, t) in [("abs-tol", args.abs_tol), ("rel-tol", args.rel_tol)] {
        if !(t > 0.0 && t.is_finite()) {
            return Err(format!("--{name} must be positive and finite, got {t}"));
        }
    }

    let sweep_offset = match seed_offset {
        None => DEFAULT_GRID_OFFSET,
        Some(raw) => match raw.trim().parse::<f64>() {
            Ok(x) if x > 0.0 && x < 1.0 => x,
            _ => {
                return Err(format!(
                    "{SEED_OFFSET_VAR} must be a real number in (0, 1), got {raw:?}"
                ))
            }
        },
    };

    Ok(RunConfig {
        command: args.command,
        grid,
        trunc,
        abs_tol: args.abs_tol,
        rel_tol: args.rel_tol,
        format: args.format,
        out_path: args.out,
        parallel: !args.no_parallel,
        sweep_offset,
    })
}

/// Parses argv (program name first) and reads the environment.
pub fn parse_config<I, T>(argv: I) -> Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = Args::try_parse_from(argv)?;
    let seed = std::env::var(SEED_OFFSET_VAR).ok();
    build_config(args, seed).map_err(|msg| {
        let mut cmd = <Args as clap::CommandFactory>::command();
        cmd.error(clap::error::ErrorKind::ValueValidation, msg)
    })
}

enum PointResult {
    Excluded,
    OutsideStrip,
    Records(Vec<VerificationRecord>),
}

fn evaluate(cfg: &RunConfig, s: Complex64) -> PointResult {
    if cfg.grid.is_excluded(s) {
        return PointResult::Excluded;
    }
    let tol = cfg.tolerances();
    let trunc = &cfg.trunc;
    let critical = in_critical_strip(s);
    let left = in_left_strip(s);
    let records = match cfg.command {
        Command::Eq1 if critical => vec![funceq::eq1_record(s, trunc, &tol)],
        Command::Telescope if critical => vec![funceq::telescope_record(s, trunc, &tol)],
        Command::Interchange if left => {
            let mut out: Vec<_> = CHAIN_FREQUENCIES
                .iter()
                .map(|&a| funceq::interchange_record(s, a, trunc, &tol))
                .collect();
            out.push(funceq::series_sum_record(s, trunc, &tol));
            out
        }
        Command::SineMellin if left => [2.0, 4.0, 8.0]
            .iter()
            .map(|&k| funceq::interchange_record(s, k * std::f64::consts::PI, trunc, &tol))
            .collect(),
        Command::Fe => vec![fe_record(s, &tol)],
        Command::Chain | Command::All if critical || left => {
            match funceq::verify_chain(s, trunc, &cfg.grid, &tol) {
                Ok(r) => r,
                Err(_) => return PointResult::OutsideStrip,
            }
        }
        Command::All => vec![fe_record(s, &tol)],
        _ => return PointResult::OutsideStrip,
    };
    PointResult::Records(records)
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Summary {
    pub points: usize,
    pub excluded: usize,
    pub outside: usize,
    pub records: usize,
    pub passes: usize,
    pub failures: usize,
    pub non_converged: usize,
    pub max_rel_err: f64,
}

impl Summary {
    fn line(&self) -> String {
        format!(
            "points {} (excluded {}, outside strip {}), records {}, passes {}, failures {}, non-converged {}, max rel_err {}",
            self.points,
            self.excluded,
            self.outside,
            self.records,
            self.passes,
            self.failures,
            self.non_converged,
            report::format_number(self.max_rel_err)
        )
    }
}

/// Evaluates every grid point; records come back in grid order.
pub fn sweep(cfg: &RunConfig) -> (Vec<VerificationRecord>, Summary) {
    let points: Vec<Complex64> = cfg.grid.points().collect();
    let results: Vec<PointResult> = if cfg.parallel {
        points.par_iter().map(|&s| evaluate(cfg, s)).collect()
    } else {
        points.iter().map(|&s| evaluate(cfg, s)).collect()
    };
    let mut summary = Summary {
        points: points.len(),
        ..Summary::default()
    };
    let mut records = Vec::new();
    for r in results {
        match r {
            PointResult::Excluded => summary.excluded += 1,
            PointResult::OutsideStrip => summary.outside += 1,
            PointResult::Records(rs) => records.extend(rs),
        }
    }
    summary.records = records.len();
    for r in &records {
        if r.pass {
            summary.passes += 1;
        } else {
            summary.failures += 1;
        }
        if !r.converged {
            summary.non_converged += 1;
        }
        if r.rel_err > summary.max_rel_err {
            summary.max_rel_err = r.rel_err;
        }
    }
    (records, summary)
}

pub fn emit_report(records: &[VerificationRecord], cfg: &RunConfig) -> Vec<u8> {
    match cfg.format {
        Format::Csv => report::to_csv(records).into_bytes(),
        Format::Json => {
            let metadata = report::Metadata {
                command: cfg.command.name().to_string(),
                tolerances: cfg.tolerances(),
                grid: cfg.grid,
                truncation: (&cfg.trunc).into(),
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
            };
            report::to_json(records, metadata).into_bytes()
        }
    }
}

fn write_report(bytes: &[u8], cfg: &RunConfig) -> std::io::Result<()> {
    match &cfg.out_path {
        Some(path) => std::fs::write(path, bytes),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()
        }
    }
}

/// Runs the tool and returns its exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match parse_config(argv) {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    run_config(&cfg)
}

pub fn run_config(cfg: &RunConfig) -> i32 {
    let (records, summary) = sweep(cfg);

    let mut sweep_failed = false;
    if cfg.command == Command::All {
        let sweep = SupSweep {
            offset: cfg.sweep_offset,
            parallel: cfg.parallel,
            ..SupSweep::new(SWEEP_TERMS, SWEEP_POINTS)
        };
        match fracfourier::partial_sum_sup_with(&sweep) {
            Ok(sup) => eprintln!(
                "partial-sum sup over N <= {SWEEP_TERMS}, {SWEEP_POINTS} points: {} (bound {})",
                report::format_number(sup),
                sweep.bound
            ),
            Err(e @ Error::BoundExceeded { .. }) => {
                eprintln!("partial-sum sweep: {e}");
                sweep_failed = true;
            }
            Err(e) => {
                eprintln!("partial-sum sweep: {e}");
                return EXIT_NUMERICAL;
            }
        }
    }

    if let Err(e) = write_report(&emit_report(&records, cfg), cfg) {
        eprintln!("error: cannot write report: {e}");
        return EXIT_NUMERICAL;
    }
    eprintln!("{}", summary.line());

    if summary.non_converged > 0 {
        EXIT_NUMERICAL
    } else if summary.failures > 0 || sweep_failed {
        EXIT_TOLERANCE
    } else {
        EXIT_OK
    }
}
