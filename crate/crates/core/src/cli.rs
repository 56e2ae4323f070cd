//! The `hpye` command line front end.
//!
//! Results go to `out`, diagnostics to `err`. Exit codes: 0 on success,
//! 2 for invalid input or usage, 3 when the threshold solver cannot settle
//! the number of roots.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::axioms::{check_axiom, table1_matrix, AxiomId};
use crate::error::{Error, Result};
use crate::eval::{compare, evaluate, hpye};
use crate::fixtures;
use crate::io::{load_distribution, load_spec};
use crate::report::example1_report;
use crate::spec::FreeParam;
use crate::threshold::{solve, GapFunction, SolverOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// Environment variable overriding the default axiom search seed.
pub const SEED_ENV: &str = "HPYE_SEED";
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TRIALS: u64 = 10_000;

#[derive(Debug, Parser)]
#[command(
    name = "hpye",
    version,
    about = "Evaluate and compare population health distributions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one distribution.
    Evaluate {
        #[arg(long)]
        dist: PathBuf,
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Rank two distributions.
    Compare {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Parameter region on which A is weakly preferred to B.
    Thresholds {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        param: FreeParam,
        #[arg(long, default_value_t = SolverOptions::default().grid_points)]
        grid: usize,
        #[arg(long, default_value_t = SolverOptions::default().tol)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Counterexample search for the axioms.
    Axioms {
        /// Spec file; with --matrix and no spec, the nine built-in families.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        axiom: Option<AxiomId>,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: u64,
        /// Defaults to $HPYE_SEED, then 42.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        matrix: bool,
        #[arg(long)]
        json: bool,
    },
    /// Reproduce the worked example.
    Example1 {
        #[arg(long)]
        json: bool,
    },
}

/// Runs the CLI on `argv` (including the program name).
pub fn run_cli<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match run(cli.command, out) {
        Ok(()) => EXIT_OK,
        // The reader went away, e.g. output piped into `head`.
        Err(Error::Output(_)) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Exit code reported for a failed command.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_numeric() {
        EXIT_NUMERIC
    } else {
        EXIT_INVALID
    }
}

fn io_error(e: std::io::Error) -> Error {
    Error::Output(e.to_string())
}

fn default_seed() -> Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s.trim().parse().map_err(|_| Error::MalformedDocument {
            locus: SEED_ENV.into(),
            message: format!("expected an unsigned integer, found {s:?}"),
        }),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn emit_json(out: &mut dyn Write, value: &impl serde::Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("report types serialize");
    writeln!(out, "{text}").map_err(io_error)
}

fn run(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Evaluate { dist, spec, json } => {
            let d = load_distribution(&dist)?;
            let spec = load_spec(&spec)?;
            let value = evaluate(&d, &spec)?;
            let hpyes = d
                .iter()
                .map(|p| hpye(p, &spec).map(|h| h.years()))
                .collect::<Result<Vec<_>>>()?;
            if json {
                emit_json(
                    out,
                    &json!({"spec": spec.describe(), "value": value, "hpye": hpyes}),
                )
            } else {
                writeln!(out, "{}: {value}", spec.describe()).map_err(io_error)?;
                for (i, h) in hpyes.iter().enumerate() {
                    writeln!(out, "  hpye[{i}] = {h}").map_err(io_error)?;
                }
                Ok(())
            }
        }
        Command::Compare { a, b, spec, json } => {
            let (a, b) = (load_distribution(&a)?, load_distribution(&b)?);
            let ranking = compare(&a, &b, &load_spec(&spec)?)?;
            if json {
                emit_json(out, &ranking)
            } else {
                writeln!(out, "{ranking}").map_err(io_error)
            }
        }
        Command::Thresholds {
            a,
            b,
            spec,
            param,
            grid,
            tol,
            json,
        } => {
            let gf = GapFunction::new(
                load_distribution(&a)?,
                load_distribution(&b)?,
                load_spec(&spec)?,
                param,
            )?;
            let region = solve(
                &gf,
                SolverOptions {
                    grid_points: grid,
                    tol,
                },
            )?;
            if json {
                emit_json(out, &region)
            } else {
                writeln!(out, "{}", region.set).map_err(io_error)?;
                for r in &region.roots {
                    writeln!(
                        out,
                        "  root {} = {} ({:?}, gap {:e})",
                        param, r.theta, r.kind, r.gap
                    )
                    .map_err(io_error)?;
                }
                Ok(())
            }
        }
        Command::Axioms {
            spec,
            axiom,
            trials,
            seed,
            matrix,
            json,
        } => {
            let seed = match seed {
                Some(s) => s,
                None => default_seed()?,
            };
            let specs = match (&spec, matrix) {
                (Some(path), _) => vec![load_spec(path)?],
                (None, true) => fixtures::table1_specs(),
                (None, false) => {
                    return Err(Error::MalformedDocument {
                        locus: "--spec".into(),
                        message: "required unless --matrix is given".into(),
                    })
                }
            };
            let axioms: Vec<AxiomId> = match axiom {
                Some(a) => vec![a],
                None => AxiomId::ALL.to_vec(),
            };
            if matrix {
                let m = table1_matrix(&specs, &axioms, trials, seed)?;
                if json {
                    emit_json(out, &m)
                } else {
                    write!(out, "{m}").map_err(io_error)
                }
            } else {
                let verdicts = axioms
                    .iter()
                    .map(|&a| check_axiom(a, &specs[0], trials, seed))
                    .collect::<Result<Vec<_>>>()?;
                if json {
                    emit_json(out, &verdicts)
                } else {
                    for v in &verdicts {
                        writeln!(out, "{v}").map_err(io_error)?;
                    }
                    Ok(())
                }
            }
        }
        Command::Example1 { json } => {
            let report = example1_report(SolverOptions::default())?;
            if json {
                emit_json(out, &report)
            } else {
                write!(out, "{report}").map_err(io_error)
            }
        }
    }
}
