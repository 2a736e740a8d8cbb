//! `bqism verify | spectrum | sweep`.
//!
//! Exit codes: 0 pass (or a report-only run), 1 a judged check failed,
//! 2 usage or validation error.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use bqism_core::chain::DEFAULT_N_MAX;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{invalid, AppError, AppResult};
use crate::format::ChainSpecJson;
use crate::spectrum::{compute, parse_complex, sweep, sweep_csv, Axis, SweepPath};
use crate::verify::{run, Grid, Target, VerifyOptions};
use crate::NMAX_ENV;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "bqism",
    version,
    about = "Boundary integrability checks for the D(D3) anyon chain"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PathKind {
    Line,
    Circle,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample an identity and report residuals.
    Verify {
        #[arg(value_enum)]
        target: Target,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        tol: Option<f64>,
        /// Parameter JSON (boundary parameters, a control kind, or a chain
        /// spec for the commutation targets). A leading `@` reads a file.
        #[arg(long)]
        params: Option<String>,
        /// Search grid for `crossing`.
        #[arg(long, value_enum, default_value_t = Grid::Default)]
        grid: Grid,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Diagonalize the Hamiltonian of a chain spec (`-` reads stdin).
    Spectrum {
        spec_file: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Spectra along one parameter axis.
    Sweep {
        spec_file: PathBuf,
        #[arg(long, value_enum)]
        axis: Axis,
        #[arg(long, value_enum, default_value_t = PathKind::Line)]
        path: PathKind,
        /// Line start, `re` or `re,im`.
        #[arg(long)]
        from: Option<String>,
        /// Line end, `re` or `re,im`.
        #[arg(long)]
        to: Option<String>,
        /// Circle center, `re` or `re,im`.
        #[arg(long)]
        center: Option<String>,
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long)]
        steps: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Parses arguments, runs, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

pub fn n_max_from_env() -> AppResult<usize> {
    match std::env::var(NMAX_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => invalid(format!("{NMAX_ENV} must be a positive integer, got {v:?}")),
        },
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_N_MAX),
        Err(e) => invalid(format!("{NMAX_ENV}: {e}")),
    }
}

fn read_source(path: &Path) -> AppResult<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(fs::read_to_string(path)?)
    }
}

fn inline_or_file(text: String) -> AppResult<String> {
    match text.strip_prefix('@') {
        Some(path) => Ok(fs::read_to_string(path)?),
        None => Ok(text),
    }
}

fn emit(
    out: &Option<PathBuf>,
    write: impl FnOnce(&mut dyn Write) -> AppResult<()>,
) -> AppResult<()> {
    match out {
        Some(path) => {
            let mut f = io::BufWriter::new(fs::File::create(path)?);
            write(&mut f)?;
            f.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)?;
            lock.flush()?;
        }
    }
    Ok(())
}

fn required(name: &str, v: Option<String>) -> AppResult<bqism_core::Complex64> {
    let text = v.ok_or_else(|| AppError::Invalid(format!("--{name} is required for this path")))?;
    parse_complex(&text).map_err(|e| AppError::Invalid(format!("--{name}: {e}")))
}

pub fn execute(cli: Cli) -> AppResult<i32> {
    let n_max = n_max_from_env()?;
    match cli.command {
        Command::Verify {
            target,
            samples,
            seed,
            tol,
            params,
            grid,
            output,
        } => {
            let opts = VerifyOptions {
                samples,
                seed,
                tol,
                params: params.map(inline_or_file).transpose()?,
                grid,
                n_max,
            };
            let report = run(target, &opts)?;
            emit(&output.out, |w| match output.format {
                Format::Json => Ok(w.write_all(report.to_json()?.as_bytes())?),
                Format::Csv => report.write_csv(w),
            })?;
            let verdict = match report.pass {
                Some(true) => "pass",
                Some(false) => "FAIL",
                None => "report",
            };
            eprintln!(
                "{}: {verdict} (samples {}, min {:.3e}, max {:.3e}, tol {:e})",
                report.identity_name,
                report.samples.len(),
                report.min_residual,
                report.max_residual,
                report.tolerance
            );
            for note in &report.notes {
                eprintln!("  {note}");
            }
            Ok(if report.pass == Some(false) {
                EXIT_FAIL
            } else {
                EXIT_PASS
            })
        }
        Command::Spectrum { spec_file, output } => {
            let spec = ChainSpecJson::parse(&read_source(&spec_file)?)?;
            let result = compute(&spec, n_max)?;
            emit(&output.out, |w| match output.format {
                Format::Json => Ok(w.write_all(result.to_json()?.as_bytes())?),
                Format::Csv => result.write_csv(w),
            })?;
            Ok(EXIT_PASS)
        }
        Command::Sweep {
            spec_file,
            axis,
            path,
            from,
            to,
            center,
            radius,
            steps,
            output,
        } => {
            let spec = ChainSpecJson::parse(&read_source(&spec_file)?)?;
            let path = match path {
                PathKind::Line => SweepPath::Line {
                    from: required("from", from)?,
                    to: required("to", to)?,
                },
                PathKind::Circle => {
                    let radius = radius.ok_or_else(|| {
                        AppError::Invalid("--radius is required for a circle".into())
                    })?;
                    if !(radius.is_finite() && radius > 0.0) {
                        return invalid("--radius must be positive");
                    }
                    SweepPath::Circle {
                        center: required("center", center)?,
                        radius,
                    }
                }
            };
            let rows = sweep(&spec, axis, path, steps, n_max)?;
            emit(&output.out, |w| match output.format {
                Format::Json => {
                    Ok(w.write_all((serde_json::to_string_pretty(&rows)? + "\n").as_bytes())?)
                }
                Format::Csv => sweep_csv(&rows, w),
            })?;
            let flagged = rows.iter().filter(|r| r.flag.is_some()).count();
            if flagged > 0 {
                eprintln!("{flagged} of {} rows flagged", rows.len());
            }
            Ok(EXIT_PASS)
        }
    }
}
