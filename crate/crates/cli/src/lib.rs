//! `tsurf`: curvature fields, meshes, catalog verification and exact scans
//! for translation surfaces.

pub mod commands;
pub mod format;
pub mod surface_file;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const EVALUATION: i32 = 2;
    pub const VERIFICATION: i32 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, unreadable or malformed input files, unknown entries.
    #[error("{0}")]
    Usage(String),
    /// A surface could not be evaluated at a grid point.
    #[error("{0}")]
    Evaluation(String),
    #[error("cannot write {path}: {source}")]
    Output { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Output { .. } => exit::USAGE,
            CliError::Evaluation(_) => exit::EVALUATION,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "tsurf",
    version,
    about = "Curvatures of translation surfaces z = f(u) + g(v)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate first and second form data and all curvatures on a grid (CSV).
    Field(GridArgs),
    /// Export the surface over its grid as a Wavefront OBJ mesh.
    Mesh(GridArgs),
    /// Verify the curvature relation of catalog entries on a grid.
    Verify(VerifyArgs),
    /// List the catalog of classified surfaces.
    Catalog(ReportArgs),
    /// Scan random polynomial slopes for an identically vanishing K_II numerator.
    Polyscan(PolyscanArgs),
    /// Scan power-function slopes a u^p, b v^q for vanishing K_II.
    Powerscan(PowerscanArgs),
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Surface definition file.
    pub surface: PathBuf,
    /// Grid points per axis, overriding `nu` and `nv` from the file.
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    pub grid: Option<u32>,
    /// Output path (stdout if omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Emit JSON lines instead of a table.
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Catalog entry to verify.
    #[arg(long, required_unless_present = "all", conflicts_with = "all")]
    pub entry: Option<String>,
    /// Verify every catalog entry at its default parameters.
    #[arg(long)]
    pub all: bool,
    /// Parameter override NAME=VALUE (repeatable, requires --entry).
    #[arg(long = "param", value_parser = parse_assignment, conflicts_with = "all")]
    pub params: Vec<(String, f64)>,
    #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u32).range(2..))]
    pub grid: u32,
    #[command(flatten)]
    pub report: ReportArgs,
}

#[derive(Debug, Args)]
pub struct PolyscanArgs {
    /// Largest degree of f′.
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..=64))]
    pub max_m: u32,
    /// Largest degree of g′.
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..=64))]
    pub max_n: u32,
    /// Random coefficient vectors per degree pair.
    #[arg(long, default_value_t = 100)]
    pub draws: u32,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[command(flatten)]
    pub report: ReportArgs,
}

#[derive(Debug, Args)]
pub struct PowerscanArgs {
    /// Exponent grid denominator: exponents are k/DENOM.
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(i64).range(1..=1000))]
    pub denom: i64,
    /// Exponent numerators range over 1 <= |k| <= MAX_NUM.
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(i64).range(1..=1000))]
    pub max_num: i64,
    /// Comma-separated nonzero coefficients (integers or p/q).
    #[arg(long, default_value = "-2,-1,1,2", allow_hyphen_values = true)]
    pub coeffs: String,
    #[command(flatten)]
    pub report: ReportArgs,
}

fn parse_assignment(text: &str) -> Result<(String, f64), String> {
    let (name, value) = text
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=VALUE, found `{text}`"))?;
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|_| format!("`{}` is not a number", value.trim()))?;
    if !value.is_finite() {
        return Err(format!("`{name}` must be finite"));
    }
    Ok((name.trim().to_string(), value))
}

/// Parses `args` (program name first) and runs the command, writing to
/// `stdout` unless `--out` is given and reporting errors on `stderr`.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let informational = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let rendered = e.render().to_string();
            if informational {
                let _ = stdout.write_all(rendered.as_bytes());
                return exit::SUCCESS;
            }
            let _ = stderr.write_all(rendered.as_bytes());
            return exit::USAGE;
        }
    };
    match commands::execute(&cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
