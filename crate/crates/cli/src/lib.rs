//! Batch verification front-end. [`run`] parses arguments, runs one
//! subcommand and returns the process exit code:
//! 0 all pass, 1 counterexample with witness, 2 usage error, 3 internal error.

pub mod commands;
pub mod figure;
pub mod problems;
pub mod report;

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use qconvex_core::exactpoly::{parse_rat, BigRat};

use commands::{CoeffSet, IdentityChecks, PartitionsArgs, Target};
use figure::Curve;
use problems::EScan;
use report::VerificationReport;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Internal(_) | CliError::Io(_) => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "qconvex", version, about = "Exact verification runs for q-Catalan convexity claims")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads for independent n values.
    #[arg(long, global = true, env = "QCONVEX_JOBS", default_value_t = 1)]
    jobs: usize,
}

#[derive(Debug, Args)]
struct Range {
    #[arg(long, default_value_t = 2)]
    n_min: usize,
    #[arg(long)]
    n_max: Option<usize>,
}

impl Range {
    fn list(&self, default_max: usize) -> Result<Vec<usize>, CliError> {
        let hi = self.n_max.unwrap_or(default_max);
        if self.n_min < 2 || self.n_min > hi {
            return Err(CliError::Usage(format!("need 2 <= n-min <= n-max, got {}..{hi}", self.n_min)));
        }
        Ok((self.n_min..=hi).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum IdentityCheck {
    Identities,
    Special,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Problem {
    #[value(name = "W")]
    W,
    #[value(name = "E")]
    E,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact identities, special values and the Dyck-path oracle.
    Identities {
        #[command(flatten)]
        range: Range,
        #[arg(long, value_enum, default_value = "all")]
        checks: IdentityCheck,
        /// Largest n for the Dyck-path enumeration.
        #[arg(long, default_value_t = 9)]
        dyck_max: usize,
    },
    /// Certify C_n'' > 0 on the real line.
    CertifyConvexity {
        #[command(flatten)]
        range: Range,
        /// Re-check every certificate with an independent Sturm count.
        #[arg(long)]
        replay: bool,
    },
    /// Certify one of the positivity claims.
    Certify {
        #[arg(long, value_enum)]
        target: Target,
        #[command(flatten)]
        range: Range,
        #[arg(long)]
        replay: bool,
    },
    /// Certify L_n > 0 on (-1, 0) for odd n.
    ScanConjecture {
        #[arg(long, default_value_t = 3)]
        odd_n_min: usize,
        #[arg(long, default_value_t = 41)]
        odd_n_max: usize,
    },
    /// Numerical decomposition N_n = A^2 + (1 - q^2) B^2.
    Sos {
        #[command(flatten)]
        range: Range,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Include the coefficients of A and B.
        #[arg(long)]
        coeffs: bool,
    },
    /// Central coefficient parity against n = 2^k - 1.
    Parity {
        #[command(flatten)]
        range: Range,
    },
    /// Partition series, convexity of the limit and the convergence probe.
    Partitions {
        #[arg(long, default_value_t = 200)]
        order: usize,
        #[arg(long, default_value_t = 33)]
        grid_points: usize,
        #[arg(long, value_delimiter = ',', default_value = "4,6,8,10")]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 2000)]
        growth_max: usize,
    },
    /// Published coefficient lists.
    Coeffs {
        #[arg(long, value_enum)]
        which: CoeffSet,
        /// n for alpha, m for X-expansion and K3.
        #[arg(long)]
        min: Option<usize>,
        #[arg(long)]
        max: Option<usize>,
    },
    /// Evidence for the two closing problems.
    Problems {
        #[arg(long, value_enum)]
        which: Problem,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        #[arg(long)]
        grid_size: Option<usize>,
        #[arg(long, value_delimiter = ',', default_value = "3/2,2,10")]
        t_list: Vec<String>,
        #[arg(long, default_value_t = -10.0, allow_hyphen_values = true)]
        x_min: f64,
        #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
        x_max: f64,
    },
    /// Curve data as CSV.
    FigureData {
        #[arg(long, value_enum)]
        which: Curve,
        #[arg(long, default_value_t = 401)]
        grid_size: usize,
    },
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(File::create(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn parse_rats(items: &[String]) -> Result<Vec<BigRat>, CliError> {
    items
        .iter()
        .map(|s| parse_rat(s.trim()).ok_or_else(|| CliError::Usage(format!("not a rational: {s}"))))
        .collect()
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    let start = Instant::now();
    let jobs = cli.jobs;
    let mut report;
    match cli.command {
        Command::FigureData { which, grid_size } => {
            let pts = figure::curve_points(which, grid_size)?;
            let mut out = open_output(&cli.output)?;
            figure::write_curve(&mut *out, &pts)?;
            return Ok(0);
        }
        Command::Identities { range, checks, dyck_max } => {
            report = VerificationReport::new("identities");
            let ns = range.list(12)?;
            let c = IdentityChecks {
                identities: checks != IdentityCheck::Special,
                special: checks != IdentityCheck::Identities,
                dyck_max,
            };
            report.param("n_range", format!("{}..={}", ns[0], ns[ns.len() - 1]));
            report.param("dyck_max", dyck_max);
            report.verdicts = commands::identities(&ns, c, jobs)?;
        }
        Command::CertifyConvexity { range, replay } => {
            report = VerificationReport::new("certify-convexity");
            let ns = range.list(15)?;
            report.param("n_range", format!("{}..={}", ns[0], ns[ns.len() - 1]));
            report.param("replay", replay);
            report.verdicts = commands::convexity(&ns, replay, jobs)?;
        }
        Command::Certify { target, range, replay } => {
            report = VerificationReport::new("certify");
            let ns = range.list(20)?;
            report.param("target", target.to_possible_value().unwrap().get_name());
            report.param("n_range", format!("{}..={}", ns[0], ns[ns.len() - 1]));
            report.param("replay", replay);
            report.verdicts = commands::certify_target(target, &ns, replay, jobs)?;
        }
        Command::ScanConjecture { odd_n_min, odd_n_max } => {
            report = VerificationReport::new("scan-conjecture");
            if odd_n_min < 3 || odd_n_min > odd_n_max {
                return Err(CliError::Usage("need 3 <= odd-n-min <= odd-n-max".into()));
            }
            let ns: Vec<usize> = (odd_n_min..=odd_n_max).filter(|n| n % 2 == 1).collect();
            report.param("odd_n_range", format!("{odd_n_min}..={odd_n_max}"));
            report.verdicts = commands::certify_target(Target::Ln, &ns, false, jobs)?;
        }
        Command::Sos { range, tol, coeffs } => {
            report = VerificationReport::new("sos");
            let ns = range.list(8)?;
            if !(tol > 0.0) {
                return Err(CliError::Usage("tol must be positive".into()));
            }
            report.param("n_range", format!("{}..={}", ns[0], ns[ns.len() - 1]));
            report.param("tol", tol);
            report.verdicts = commands::sos(&ns, tol, coeffs, jobs)?;
        }
        Command::Parity { range } => {
            report = VerificationReport::new("parity");
            let ns = range.list(64)?;
            report.param("n_range", format!("{}..={}", ns[0], ns[ns.len() - 1]));
            report.verdicts = commands::parity(&ns, jobs)?;
        }
        Command::Partitions { order, grid_points, n_list, growth_max } => {
            report = VerificationReport::new("partitions");
            if grid_points < 2 || n_list.is_empty() || n_list.windows(2).any(|w| w[0] >= w[1]) || n_list[0] < 2 {
                return Err(CliError::Usage("need grid-points >= 2 and an increasing n-list from 2".into()));
            }
            report.param("order", order);
            report.param("grid_points", grid_points);
            report.param("n_list", format!("{n_list:?}"));
            report.param("growth_max", growth_max);
            let a = PartitionsArgs { order, grid_points, n_list, growth_max };
            report.verdicts = commands::partitions(&a, jobs)?;
        }
        Command::Coeffs { which, min, max } => {
            report = VerificationReport::new("coeffs");
            let (lo, hi) = match which {
                CoeffSet::Alpha => (min.unwrap_or(2), max.unwrap_or(30)),
                CoeffSet::XExpansion => (min.unwrap_or(2), max.unwrap_or(6)),
                CoeffSet::K3 => (min.unwrap_or(1), max.unwrap_or(50)),
                CoeffSet::Ak | CoeffSet::L3 => (0, 0),
            };
            if lo > hi {
                return Err(CliError::Usage(format!("empty range {lo}..={hi}")));
            }
            report.param("which", which.to_possible_value().unwrap().get_name());
            let ns: Vec<usize> = (lo..=hi).collect();
            report.verdicts = commands::coeffs(which, &ns, jobs)?;
        }
        Command::Problems { which, n_max, grid_size, t_list, x_min, x_max } => match which {
            Problem::W => {
                report = VerificationReport::new("problems-W");
                let grid = grid_size.unwrap_or(256);
                if n_max < 2 {
                    return Err(CliError::Usage("n-max must be at least 2".into()));
                }
                report.param("n_max", n_max);
                report.param("grid_size", grid);
                let ns: Vec<usize> = (2..=n_max).collect();
                report.verdicts = problems::w_scan(&ns, grid, jobs)?;
            }
            Problem::E => {
                report = VerificationReport::new("problems-E");
                let a = EScan { t_list: parse_rats(&t_list)?, x_min, x_max, grid_size: grid_size.unwrap_or(4001) };
                report.param("t_list", t_list.join(","));
                report.param("x_range", format!("[{x_min}, {x_max}]"));
                report.param("grid_size", a.grid_size);
                report.verdicts = problems::e_scan(&a)?;
            }
        },
    }
    report.timing_ms = start.elapsed().as_millis() as u64;
    let mut out = open_output(&cli.output)?;
    match cli.format {
        Format::Json => report.write_json(&mut *out).map_err(|e| CliError::Io(e.to_string()))?,
        Format::Csv => report.write_csv(&mut *out).map_err(|e| CliError::Io(e.to_string()))?,
    }
    Ok(report.exit_code())
}

/// Runs the command line `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("qconvex: {e}");
            e.exit_code()
        }
    }
}
