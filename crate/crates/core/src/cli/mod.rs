//! Command-line front end.
//!
//! Each subcommand renders its whole output into memory before writing it,
//! so a failing run never leaves a half-written file. Errors are reported
//! as one line, `error[<code>]: <message>`, with exit status 2 for bad
//! input and 3 for numerical failures.

mod commands;
pub mod config;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::Error;

pub use commands::{cmd_dispersion, cmd_invert, cmd_regimes, cmd_scales, cmd_simulate};
pub use config::RunConfig;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "quantum-dust", version, about = "Electrostatic modes of quantum dusty plasmas")]
pub struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Recorded in simulate and invert reports; no command draws random numbers.
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Derived plasma scales with units.
    Scales,
    /// Sample a dispersion curve and its asymptotic limits.
    Dispersion(DispersionArgs),
    /// Integrate the linear evolution equation and measure mode frequencies.
    Simulate(SimulateArgs),
    /// Fit a measured (k, omega) spectrum.
    Invert(InvertArgs),
    /// Validity margins at one wavenumber.
    Regimes(RegimesArgs),
}

#[derive(Debug, Default, clap::Args)]
pub struct DispersionArgs {
    /// immobile-dust or mobile-dust.
    #[arg(long)]
    pub mode: Option<String>,
    /// Smallest wavenumber, e.g. 1e4 or "1e6 m^-1".
    #[arg(long)]
    pub kmin: Option<String>,
    #[arg(long)]
    pub kmax: Option<String>,
    #[arg(long)]
    pub points: Option<usize>,
    /// log or linear.
    #[arg(long)]
    pub spacing: Option<String>,
    /// "all" or a comma-separated list such as dust-quantum,dust-acoustic.
    #[arg(long)]
    pub limits: Option<String>,
}

#[derive(Debug, Default, clap::Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub mode: Option<String>,
    /// Time step, e.g. 1e-12 or "1 ps"; defaults to a thousandth of the fastest period.
    #[arg(long)]
    pub dt: Option<String>,
    /// Comma-separated mode numbers to excite.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub modes: Option<Vec<i64>>,
    /// Run length in periods of the slowest excited mode.
    #[arg(long)]
    pub periods: Option<f64>,
    /// Also write the spectral amplitudes as CSV.
    #[arg(long, value_name = "PATH")]
    pub snapshots: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct InvertArgs {
    /// CSV with columns k, omega (or omega_full) and optionally sigma.
    pub samples: PathBuf,
    #[arg(long)]
    pub mode: Option<String>,
}

#[derive(Debug, Default, clap::Args)]
pub struct RegimesArgs {
    /// Wavenumber, e.g. 1e4 or "1e6 m^-1".
    #[arg(long)]
    pub k: Option<String>,
    #[arg(long)]
    pub mode: Option<String>,
}

/// A failure with its greppable code and exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: &'static str,
    pub exit_code: i32,
    pub message: String,
}

impl CliError {
    pub fn input(code: &'static str, message: String) -> Self {
        Self {
            code,
            exit_code: EXIT_INPUT,
            message,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one_line = self.message.lines().map(str::trim).collect::<Vec<_>>().join("; ");
        write!(f, "error[{}]: {}", self.code, one_line)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let (code, exit_code) = match &e {
            Error::NonPositiveDensity { .. } => ("non_positive_density", EXIT_INPUT),
            Error::NonPositiveMass { .. } => ("non_positive_mass", EXIT_INPUT),
            Error::NegativeTemperature(_) => ("negative_temperature", EXIT_INPUT),
            Error::InvalidChargeState { .. } => ("invalid_charge_state", EXIT_INPUT),
            Error::QuasineutralityViolated { .. } => ("quasineutrality_violated", EXIT_INPUT),
            Error::MissingParameter(_) => ("missing_parameter", EXIT_INPUT),
            Error::InvalidWavenumber(_) => ("invalid_wavenumber", EXIT_INPUT),
            Error::BadGrid(_) => ("bad_grid", EXIT_INPUT),
            Error::ColdIons => ("cold_ions", EXIT_INPUT),
            Error::ModeOutOfRange { .. } => ("mode_out_of_range", EXIT_INPUT),
            Error::StepTooLarge { .. } => ("step_too_large", EXIT_INPUT),
            Error::Underdetermined { .. } => ("underdetermined", EXIT_INPUT),
            Error::DegenerateData(_) => ("degenerate_data", EXIT_INPUT),
            Error::InvalidCsv { .. } => ("invalid_csv", EXIT_INPUT),
            Error::InvalidSample { .. } => ("invalid_sample", EXIT_INPUT),
            Error::IonResonance { .. } => ("ion_resonance", EXIT_NUMERICAL),
            Error::ZeroFrequency => ("zero_frequency", EXIT_NUMERICAL),
            Error::NoSignal => ("no_signal", EXIT_NUMERICAL),
            Error::TooShort { .. } => ("too_short", EXIT_NUMERICAL),
            Error::NoConvergence { .. } => ("no_convergence", EXIT_NUMERICAL),
        };
        Self {
            code,
            exit_code,
            message: e.to_string(),
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status. Reports go to `stdout` unless `--output` is set; errors go
/// to `stderr`.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            let rendered = e.to_string();
            let first = rendered.lines().next().unwrap_or("").trim_start_matches("error: ");
            let _ = writeln!(stderr, "{}", CliError::input("usage", first.to_string()));
            return EXIT_INPUT;
        }
    };
    match execute(&cli).and_then(|(report, path)| emit(&report, path, stdout)) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.exit_code
        }
    }
}

/// Loaded configuration plus the settings shared by every command.
pub struct Context {
    pub config: RunConfig,
    pub format: Option<Format>,
    pub seed: Option<u64>,
}

fn execute(cli: &Cli) -> Result<(String, Option<PathBuf>), CliError> {
    let config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let format = match (cli.format, config.output.format.as_deref()) {
        (Some(f), _) => Some(f),
        (None, Some("csv")) => Some(Format::Csv),
        (None, Some("json")) => Some(Format::Json),
        (None, Some(other)) => {
            return Err(CliError::input(
                "config",
                format!("output.format: expected csv or json, got '{other}'"),
            ))
        }
        (None, None) => None,
    };
    let path = cli.output.clone().or_else(|| config.output.path.clone());
    let ctx = Context {
        config,
        format,
        seed: cli.seed,
    };
    let report = match &cli.command {
        Command::Scales => cmd_scales(&ctx),
        Command::Dispersion(args) => cmd_dispersion(&ctx, args),
        Command::Simulate(args) => cmd_simulate(&ctx, args),
        Command::Invert(args) => cmd_invert(&ctx, args),
        Command::Regimes(args) => cmd_regimes(&ctx, args),
    }?;
    Ok((report, path))
}

fn emit(report: &str, path: Option<PathBuf>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(path) => std::fs::write(&path, report)
            .map_err(|e| CliError::input("io", format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(report.as_bytes())
            .map_err(|e| CliError::input("io", e.to_string())),
    }
}
