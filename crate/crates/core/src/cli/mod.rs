//! The `knot-torsion` command line front end.

mod commands;
pub mod presets;
mod report;
mod selftest;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::Tolerances;
use crate::{Error, C64};

pub use report::Format;

#[derive(Parser, Debug)]
#[command(
    name = "knot-torsion",
    version,
    about = "Alexander polynomials, twisted Alexander invariants and adjoint torsion of knots"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normalized Alexander polynomial and its roots.
    Alexander {
        #[command(flatten)]
        common: Common,
        /// Generator whose Fox column is deleted (1-based).
        #[arg(long, default_value_t = 1)]
        deleted_column: usize,
    },
    /// Bifurcation points with their reducible representations.
    Bifurcations {
        #[command(flatten)]
        common: Common,
    },
    /// Wada invariant of the adjoint representation.
    Wada {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        rep: RepArgs,
        #[arg(long, default_value_t = 1)]
        deleted_column: usize,
    },
    /// Non-acyclic adjoint torsion, up to sign.
    LambdaTorsion {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        rep: RepArgs,
    },
    /// Factorization of det A¹ at the reducible representations.
    Factorize {
        #[command(flatten)]
        common: Common,
        /// Restrict to one root (index into the root list).
        #[arg(long)]
        root_index: Option<usize>,
    },
    /// Continuation of irreducible representations into a bifurcation point.
    VerifyLimit {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u32).range(3..))]
        steps: u32,
        /// Relative offset of the first sample from the bifurcation point.
        #[arg(long, default_value_t = 0.1, value_parser = positive_f64)]
        offset: f64,
        #[arg(long, default_value_t = 0)]
        root_index: usize,
        /// Also write the (distance, |torsion|) samples to this CSV file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Bundled invariant checks on the fixture knots.
    Selftest {
        #[command(flatten)]
        output: OutputArgs,
        /// Skip the slower checks.
        #[arg(long)]
        quick: bool,
        /// Directory of `.pres` fixtures replacing the bundled ones.
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct InputArgs {
    /// Presentation file (`.pres`).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Braid as `"<strands>;<letters>"`, e.g. `"2;1 1 1"`.
    #[arg(long, allow_hyphen_values = true)]
    braid: Option<String>,
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(presets::PRESET_NAMES))]
    preset: Option<String>,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Override the general tolerance.
    #[arg(long, value_parser = positive_f64)]
    tol: Option<f64>,
    /// Omit wall time so output is byte-for-byte reproducible.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args, Debug)]
struct Common {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Debug, PartialEq, Eq, ValueEnum)]
enum RepKind {
    Abelian,
    Reducible,
    Riley,
}

#[derive(Args, Debug)]
struct RepArgs {
    /// `abelian`, `reducible`, `riley`, or a `.rep.json` path.
    #[arg(long, default_value = "reducible")]
    rep: String,
    /// `z` for abelian representations, or `z0` overriding `--root-index`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    z: Option<C64>,
    #[arg(long, default_value_t = 0)]
    root_index: usize,
    /// Riley parameter `s`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    s: Option<C64>,
    /// Riley parameter `u`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    u: Option<C64>,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("expected a positive number, got {s}"))
    }
}

/// `re` or `re,im`.
fn parse_complex(s: &str) -> Result<C64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |x: &str| x.parse::<f64>().map_err(|e| format!("invalid number `{x}`: {e}"));
    match parts.as_slice() {
        [re] => Ok(C64::new(num(re)?, 0.0)),
        [re, im] => Ok(C64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected `re` or `re,im`, got `{s}`")),
    }
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
enum CliError {
    Usage(String),
    Compute(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Compute(e)
    }
}

fn tolerances(output: &OutputArgs) -> Result<Tolerances, CliError> {
    let mut tol = Tolerances::from_env();
    if let Some(t) = output.tol {
        tol.general = t;
    }
    tol.validate().map_err(CliError::Usage)?;
    Ok(tol)
}

/// Runs the CLI on `argv` (including the program name) with the process
/// streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// As [`run`], writing results to `out` and diagnostics to `err`.
///
/// Exit codes: 0 on success, 1 on computation failure, 2 on usage errors.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    match commands::dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(CliError::Compute(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}
