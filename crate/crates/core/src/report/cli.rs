//! Command-line front end. Exit codes: 0 success, 2 input or render error,
//! 3 internal consistency failure, 4 precondition failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use super::audit::{audit, parse_grid, DEFAULT_GRID};
use super::input::FieldInput;
use super::schema::PortraitReport;
use super::svg::{render, sample_trajectories, SampleOptions};
use super::sweep::{parse_eps_grid, run_sweep, to_csv, SweepError, DEFAULT_EPS_GRID};
use crate::config::Tolerances;
use crate::oracle::{locate_cycle, CrossValidationOptions, CycleSearchOptions};
use crate::portrait::assemble_portrait;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CONSISTENCY: i32 = 3;
pub const EXIT_PRECONDITION: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "starnode", version, about = "Global portraits of x' = λx + Q1, y' = λy + Q2")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct TolArgs {
    /// Root acceptance tolerance.
    #[arg(long, default_value_t = crate::config::ROOT_TOL)]
    pub tol_root: f64,
    /// Absolute tolerance of the criterion quadrature.
    #[arg(long, default_value_t = crate::config::QUAD_TOL)]
    pub tol_quad: f64,
}

impl TolArgs {
    pub fn tolerances(&self) -> Tolerances {
        Tolerances {
            root: self.tol_root,
            quad: self.tol_quad,
            ..Tolerances::default()
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyze a field and print the JSON report.
    Analyze {
        /// Input JSON file, or an inline JSON document.
        input: String,
        /// Cross-check the verdict against integrated trajectories.
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Draw the Poincaré-disk portrait as SVG.
    Portrait {
        input: String,
        #[arg(long)]
        svg: PathBuf,
        /// Number of sampled trajectories.
        #[arg(long, default_value_t = 16)]
        samples: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Perturb a heteroclinic cycle and track the criterion and the cycle.
    Sweep {
        input: String,
        #[arg(long, default_value = DEFAULT_EPS_GRID)]
        eps_grid: String,
        /// CSV path; the JSON summary goes next to it with extension `json`.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Check the canonical-form tables against the engine.
    AuditCanonical {
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
        degree: u8,
        /// Comma-separated values used for every free parameter.
        #[arg(long, default_value = DEFAULT_GRID)]
        grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        tol: TolArgs,
    },
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> bool {
    match out {
        Some(p) => match std::fs::write(p, text) {
            Ok(()) => true,
            Err(e) => {
                let _ = writeln!(stderr, "cannot write {}: {e}", p.display());
                false
            }
        },
        None => writeln!(stdout, "{text}").is_ok(),
    }
}

fn load(input: &str, stderr: &mut dyn Write) -> Option<(FieldInput, crate::StarField)> {
    match FieldInput::load(input).and_then(|i| i.to_field().map(|f| (i, f))) {
        Ok(v) => Some(v),
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            None
        }
    }
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return EXIT_INPUT;
            }
            let _ = write!(stdout, "{}", e.render());
            return EXIT_OK;
        }
    };
    match cli.command {
        Command::Analyze {
            input,
            verify,
            seed,
            out,
            tol,
        } => {
            let Some((input, field)) = load(&input, stderr) else {
                return EXIT_INPUT;
            };
            let opts = verify.then(|| CrossValidationOptions {
                seed,
                ..CrossValidationOptions::default()
            });
            let mut report = PortraitReport::build(&input, &field, &tol.tolerances(), opts);
            report.seed = seed;
            if !emit(&report.to_json(), out.as_deref(), stdout, stderr) {
                return EXIT_INPUT;
            }
            let failures = report.failures();
            for f in &failures {
                let _ = writeln!(stderr, "consistency failure: {f}");
            }
            if failures.is_empty() {
                EXIT_OK
            } else {
                EXIT_CONSISTENCY
            }
        }
        Command::Portrait {
            input,
            svg,
            samples,
            seed,
            tol,
        } => {
            let Some((_, field)) = load(&input, stderr) else {
                return EXIT_INPUT;
            };
            let mut portrait = assemble_portrait(&field, &tol.tolerances());
            if portrait.verdict.has_periodic_orbit() {
                match locate_cycle(&field, &CycleSearchOptions::default()) {
                    Ok(c) => portrait.cycle_profile = Some(c),
                    Err(e) => {
                        let _ = writeln!(stderr, "warning: limit cycle not located: {e}");
                    }
                }
            }
            let trajectories = sample_trajectories(
                &field,
                &SampleOptions {
                    count: samples,
                    seed,
                    ..SampleOptions::default()
                },
            );
            if emit(&render(&portrait, &trajectories), Some(&svg), stdout, stderr) {
                EXIT_OK
            } else {
                EXIT_INPUT
            }
        }
        Command::Sweep {
            input,
            eps_grid,
            out,
            tol,
        } => {
            let Some((_, field)) = load(&input, stderr) else {
                return EXIT_INPUT;
            };
            let grid = match parse_eps_grid(&eps_grid) {
                Ok(g) => g,
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    return EXIT_INPUT;
                }
            };
            let summary = match run_sweep(&field, &grid, &tol.tolerances()) {
                Ok(s) => s,
                Err(e @ SweepError::NotHeteroclinic(_)) => {
                    let _ = writeln!(stderr, "error: {e}");
                    return EXIT_PRECONDITION;
                }
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    return EXIT_INPUT;
                }
            };
            let csv = to_csv(&summary);
            let json = serde_json::to_string_pretty(&summary).expect("summary values are finite");
            let ok = match &out {
                Some(p) => {
                    emit(&csv, Some(p), stdout, stderr) && emit(&json, Some(&p.with_extension("json")), stdout, stderr)
                }
                None => {
                    let _ = write!(stdout, "{csv}");
                    let _ = writeln!(stderr, "{json}");
                    true
                }
            };
            if ok {
                EXIT_OK
            } else {
                EXIT_INPUT
            }
        }
        Command::AuditCanonical { degree, grid, out, tol } => {
            let Some(grid) = parse_grid(&grid) else {
                let _ = writeln!(stderr, "error: bad grid {grid:?}");
                return EXIT_INPUT;
            };
            let summary = audit(degree as usize, &grid, &tol.tolerances());
            let json = serde_json::to_string_pretty(&summary).expect("audit values are finite");
            if emit(&json, out.as_deref(), stdout, stderr) {
                EXIT_OK
            } else {
                EXIT_INPUT
            }
        }
    }
}
