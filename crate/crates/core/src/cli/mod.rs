//! The `relq` command-line front end.
//!
//! Every subcommand resolves a [`RunConfig`] (defaults, then `--config`
//! file, then flags), produces a [`Report`] and writes it as CSV or JSON.
//! Exit codes: 0 success, 1 a check failed, 2 usage or configuration error.

pub mod commands;
pub mod config;
pub mod report;
pub mod verify;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

pub use config::{FileConfig, Format, Overrides, RunConfig};
pub use report::{Cell, Check, Report, Table};
pub use verify::{verify, VerifyOptions};

use crate::error::{Error, Result};

pub const EXIT_SUCCESS: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "RELQ_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "relq",
    version,
    about = "Relational dynamics of two constrained oscillators"
)]
pub struct Cli {
    /// Constraint constant M, equal to the Hilbert-space dimension.
    #[arg(long = "M", global = true, allow_negative_numbers = true)]
    pub m: Option<i64>,

    /// Comma-separated time grid.
    #[arg(
        long = "t",
        global = true,
        value_delimiter = ',',
        allow_hyphen_values = true
    )]
    pub t: Option<Vec<f64>>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Tolerance override `name=value`; repeatable.
    #[arg(long = "tol", global = true, value_parser = config::parse_tolerance)]
    pub tol: Vec<(String, f64)>,

    /// Seed for the randomized sweeps.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// TOML file with the same keys as the flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hermite zeros against the eigenvalues of q1(t) on the time grid.
    Spectrum,
    /// Run the full invariant suite.
    Verify {
        /// Misplace the wrap entry of the phase operator (negative control).
        #[arg(long, hide = true)]
        corrupt_wrap: bool,
    },
    /// Classical relational trajectory over the time grid.
    Trajectory {
        /// Action of oscillator 1, in [0, M].
        #[arg(long = "i1", alias = "I1", allow_negative_numbers = true)]
        i1: f64,
        /// Relative phase.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        dphi: f64,
    },
    /// Transition amplitudes between eigenstates of q1 at two times.
    Propagator {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        to: f64,
    },
    /// Two-point function of q1 in the extremal state.
    Twopoint {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        to: f64,
    },
}

impl Cli {
    pub fn resolve(&self) -> Result<RunConfig> {
        let file = match &self.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let flags = Overrides {
            m: self.m,
            t: self.t.clone(),
            format: self.format,
            out: self.out.clone(),
            seed: self.seed,
            tol: self.tol.clone(),
        };
        RunConfig::resolve(flags, file)
    }
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| {
            Error::Config(format!(
                "{THREADS_ENV} must be a positive integer, got '{value}'"
            ))
        })?;
    // a second initialisation in the same process is harmless
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    Ok(())
}

pub fn execute(cli: &Cli, config: &RunConfig) -> Result<Report> {
    match cli.command {
        Command::Spectrum => commands::spectrum(config),
        Command::Verify { corrupt_wrap } => verify(config, VerifyOptions { corrupt_wrap }),
        Command::Trajectory { i1, dphi } => commands::trajectory(config, i1, dphi),
        Command::Propagator { from, to } => commands::propagator(config, from, to),
        Command::Twopoint { from, to } => commands::twopoint(config, from, to),
    }
}

fn write_output(config: &RunConfig, bytes: &[u8]) -> Result<()> {
    match &config.out {
        Some(path) => fs::write(path, bytes)
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| Error::Config(format!("cannot write output: {e}"))),
    }
}

/// Parses the process arguments, runs the subcommand and maps the outcome to
/// an exit code.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_SUCCESS
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::from(EXIT_SUCCESS),
        Ok(false) => ExitCode::from(EXIT_FAILURE),
        Err(e) => {
            eprintln!("relq: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

/// `Ok(true)` when every check passed.
pub fn run(cli: &Cli) -> Result<bool> {
    configure_threads()?;
    let config = cli.resolve()?;
    let report = execute(cli, &config)?;
    write_output(&config, &report.render(config.format)?)?;
    for c in report.failures() {
        eprintln!(
            "relq: check {} failed: deviation {:e} >= tolerance {:e}",
            c.name, c.max_deviation, c.tolerance
        );
    }
    Ok(report.passed())
}
