//! Command-line surface for the embedding engine: single verdicts, region
//! scans, scale-invariance verification and refutation.

pub mod record;
pub mod scan;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sobolev_core::verify::{auto_family, lambda_grid, DEFAULT_BUDGET};
use sobolev_core::{parse_rational, refute, scale_invariance_check, EmbeddingParams, FamilyKind, VerifyError, Q};
use thiserror::Error;

pub use record::VerdictRecord;
pub use scan::{GridRange, ScanCell};

/// Spread bound for a passing scale-invariance check.
pub const SPREAD_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Precondition(String),
    #[error("{0}")]
    CheckFailed(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) | CliError::Precondition(_) => 2,
            CliError::CheckFailed(_) => 3,
            CliError::Io { .. } => 4,
        }
    }
}

fn rational(s: &str) -> Result<Q, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Debug, Parser)]
#[command(
    name = "sobolev-oracle",
    version,
    about = "Decide and check weighted Sobolev embeddings"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct TupleArgs {
    #[arg(long)]
    pub dim: u32,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    pub a: Q,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    pub b: Q,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    pub c: Q,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    pub p: Q,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    pub r: Q,
}

impl TupleArgs {
    pub fn params(&self) -> EmbeddingParams {
        EmbeddingParams::new(
            self.dim,
            self.a.clone(),
            self.b.clone(),
            self.c.clone(),
            self.p.clone(),
            self.r.clone(),
        )
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify one parameter tuple.
    Decide {
        #[command(flatten)]
        tuple: TupleArgs,
        #[arg(long)]
        json: bool,
    },
    /// Classify a grid of (b, c) values.
    Scan {
        #[arg(long)]
        dim: u32,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        a: Q,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        p: Q,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        r: Q,
        #[arg(long, allow_hyphen_values = true)]
        b_range: GridRange,
        #[arg(long, allow_hyphen_values = true)]
        c_range: GridRange,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Check scale invariance of the multiplicative ratio for a holding tuple.
    Verify {
        #[command(flatten)]
        tuple: TupleArgs,
        #[arg(long, default_value = "auto")]
        family: FamilyKind,
        #[arg(long, default_value_t = 3)]
        lambda_decades: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Produce witness sequences for a failing tuple.
    Refute {
        #[command(flatten)]
        tuple: TupleArgs,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    let json = serde_json::to_string_pretty(value).expect("report serializes");
    match out {
        Some(path) => write_file(path, &format!("{json}\n")),
        None => writeln!(stdout, "{json}").map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}

fn verify_error(e: VerifyError) -> CliError {
    match e {
        VerifyError::InvalidParams(_) | VerifyError::EmbeddingFails | VerifyError::EmbeddingHolds => {
            CliError::Precondition(e.to_string())
        }
        VerifyError::PreconditionViolated(_) => CliError::Precondition(e.to_string()),
        other => CliError::CheckFailed(other.to_string()),
    }
}

/// Runs one command, writing normal output to `stdout`.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Decide { tuple, json } => {
            let rec = VerdictRecord::decide(&tuple.params()).map_err(|e| CliError::Invalid(e.to_string()))?;
            let text = if json {
                format!("{}\n", rec.to_json())
            } else {
                rec.human()
            };
            stdout.write_all(text.as_bytes()).map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            })
        }
        Command::Scan {
            dim,
            a,
            p,
            r,
            b_range,
            c_range,
            out,
            svg,
        } => {
            let zero = Q::from_integer(0.into());
            let base = EmbeddingParams::new(dim, a, zero.clone(), zero, p, r);
            let cells = scan::scan(&base, &b_range, &c_range, scan::threads_from_env())
                .map_err(|e| CliError::Invalid(e.to_string()))?;
            write_file(&out, &scan::to_csv(&cells))?;
            if let Some(svg) = svg {
                write_file(&svg, &scan::to_svg(&cells, b_range.n, c_range.n))?;
            }
            Ok(())
        }
        Command::Verify {
            tuple,
            family,
            lambda_decades,
            out,
        } => {
            let params = tuple.params();
            let profiles = auto_family(&params, family);
            let report = scale_invariance_check(&params, &profiles, &lambda_grid(lambda_decades), 1e-10)
                .map_err(verify_error)?;
            emit(&report, out.as_deref(), stdout)?;
            if report.invariant_within(SPREAD_TOLERANCE) {
                Ok(())
            } else {
                Err(CliError::CheckFailed(format!(
                    "scale-invariance spread {:.3e} exceeds 1 + {SPREAD_TOLERANCE:e}",
                    report.scale_invariance_spread
                )))
            }
        }
        Command::Refute { tuple, budget, out } => match refute(&tuple.params(), budget) {
            Ok(evidence) => emit(&evidence, out.as_deref(), stdout),
            Err(VerifyError::BudgetExhausted(evidence)) => {
                emit(&*evidence, out.as_deref(), stdout)?;
                Err(CliError::CheckFailed(format!(
                    "growth target not reached within budget (growth {:.3e})",
                    evidence.growth_factor
                )))
            }
            Err(e) => Err(verify_error(e)),
        },
    }
}
