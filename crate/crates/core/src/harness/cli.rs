//! Command-line front end.
//!
//! Exit codes: see [`ExitCode`].

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use super::config::ExperimentConfig;
use super::example::run_example;
use super::lemmas::{run_lemmas, LemmaGrid};
use super::sweep::{run_sweep, write_csv_file};
use crate::bounds::{best_bound_with, verify_proof_chain, BoundOptions};
use crate::qmatrix::read_state_file;
use crate::{Error, Result, TOL_INEQ};

/// Process exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(i32)]
pub enum ExitCode {
    Ok = 0,
    /// A bound, lemma, chain step or reproduced value failed.
    CheckFailed = 1,
    /// Command-line usage error (reported by the argument parser).
    Usage = 2,
    /// Malformed state, config or grid file.
    Parse = 3,
    /// A state failed the physicality checks.
    Validation = 4,
    Io = 5,
    /// Any other rejected argument or infeasible request.
    Argument = 6,
}

impl ExitCode {
    pub fn of(err: &Error) -> Self {
        match err {
            Error::Parse(_) | Error::Config { .. } => ExitCode::Parse,
            Error::Validation(_) => ExitCode::Validation,
            Error::Io(_) => ExitCode::Io,
            Error::InvalidArgument(_)
            | Error::SizeLimit { .. }
            | Error::Infeasible { .. }
            | Error::ConditionViolated { .. } => ExitCode::Argument,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qcoherence",
    version,
    about = "l1-norm coherence bounds on multiqubit states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reproduce the three-qubit reference state end to end.
    Example {
        /// Inequality tolerance for conditions and chain steps.
        #[arg(long, default_value_t = TOL_INEQ)]
        tol: f64,
        /// Also write the report as JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the tightest bound for a state file and print the report.
    Verify {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, default_value_t = TOL_INEQ)]
        tol: f64,
        /// Also verify every intermediate inequality at the chosen parameters.
        #[arg(long)]
        check_chain: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a Monte Carlo sweep described by a config file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `output_path`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides `seed`.
        #[arg(long)]
        seed: Option<u64>,
        /// Enables chain verification regardless of the config.
        #[arg(long)]
        check_chain: bool,
        /// Overrides `tol_ineq`.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Run the scalar-lemma grid and the bipartite superadditivity battery.
    Lemmas {
        /// Grid file; built-in grids when absent.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = TOL_INEQ)]
        tol: f64,
    },
}

fn check_tol(tol: f64) -> Result<f64> {
    if tol >= 0.0 && tol.is_finite() {
        Ok(tol)
    } else {
        Err(Error::InvalidArgument(format!(
            "--tol {tol} must be a finite real >= 0"
        )))
    }
}

fn status(passed: bool) -> ExitCode {
    if passed {
        ExitCode::Ok
    } else {
        ExitCode::CheckFailed
    }
}

fn execute(command: Command) -> Result<ExitCode> {
    match command {
        Command::Example { tol, out } => {
            let report = run_example(&BoundOptions::with_tol(check_tol(tol)?))?;
            print!("{}", report.render());
            if let Some(path) = out {
                std::fs::write(path, report.to_json() + "\n")?;
            }
            if !report.passed() {
                eprintln!("mismatch: {}", report.mismatches().join(", "));
            }
            Ok(status(report.passed()))
        }
        Command::Verify {
            state,
            alpha,
            beta,
            tol,
            check_chain,
            out,
        } => {
            let rho = read_state_file(&state)?.into_state();
            let opts = BoundOptions::with_tol(check_tol(tol)?);
            let report = best_bound_with(&rho, alpha, beta, &opts)?;
            let json = report.to_json();
            println!("{json}");
            if let Some(path) = out {
                std::fs::write(path, json + "\n")?;
            }
            let mut passed = !report.is_violation(opts.tol_ineq);
            if !passed {
                eprintln!(
                    "violation: lhs {} < rhs_theorem {}",
                    report.lhs, report.rhs_theorem
                );
            }
            if let (true, Some(params)) = (check_chain, report.params()) {
                let steps = verify_proof_chain(&rho, &params, &opts)?;
                let failed = steps.iter().filter(|s| !s.passed).count();
                eprintln!("chain: {} steps, {failed} failed", steps.len());
                passed &= failed == 0;
            }
            Ok(status(passed))
        }
        Command::Sweep {
            config,
            out,
            seed,
            check_chain,
            tol,
        } => {
            let mut config = ExperimentConfig::load(&config)?;
            if let Some(path) = out {
                config.output_path = path;
            }
            if let Some(seed) = seed {
                config.seed = seed;
            }
            if let Some(tol) = tol {
                config.tol_ineq = Some(check_tol(tol)?);
            }
            config.check_chain |= check_chain;
            let outcome = run_sweep(&config)?;
            write_csv_file(&outcome.rows, &config.output_path)?;
            println!("{}", outcome.summary.to_json());
            Ok(status(outcome.summary.passed()))
        }
        Command::Lemmas { config, seed, tol } => {
            let mut grid = match config {
                Some(path) => LemmaGrid::load(path)?,
                None => LemmaGrid::default(),
            };
            if let Some(seed) = seed {
                grid.seed = seed;
            }
            let summary = run_lemmas(&grid, check_tol(tol)?)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&summary).expect("summary serializes")
            );
            Ok(status(summary.passed()))
        }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::Usage as i32
            } else {
                ExitCode::Ok as i32
            };
        }
    };
    match execute(cli.command) {
        Ok(code) => code as i32,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::of(&e) as i32
        }
    }
}
