mod commands;

use std::io::{IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Optical rotation, geometric phase and polarimetry sweeps.
#[derive(Debug, Parser)]
#[command(name = "chiroptica", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Write results here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Source power I₀ in mW. Overrides any power column in the input.
    #[arg(long, global = true, value_parser = non_negative)]
    pub power_mw: Option<f64>,

    /// Unit for angles given on the command line and printed in reports.
    #[arg(long, global = true, value_enum, default_value_t = AngleUnit::Deg)]
    pub angle_unit: AngleUnit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AngleUnit {
    Deg,
    Rad,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Svg,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Hand {
    Dextro,
    Levo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Absorbed,
    GammaLeft,
    GammaRight,
    Rotation,
    SpecificRotation,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Trace horizontal light through a sample and an analyzer.
    Simulate(SimulateArgs),
    /// Turn a measurement CSV into derived quantities.
    Derive(InputArgs),
    /// Fit Biot's law per sample.
    Fit(FitArgs),
    /// Generate a synthetic measurement CSV.
    Sweep(SweepArgs),
    /// Chart a derived quantity against concentration.
    Plot(PlotArgs),
    /// Check a measurement CSV and list every problem as JSON.
    Validate(InputArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Measurement CSV.
    #[arg(long, short)]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Magnitude of the specific rotation, deg·dm⁻¹·(g/mL)⁻¹.
    #[arg(long, value_parser = non_negative)]
    pub specific_rotation: f64,

    /// Concentration in g/100 mL.
    #[arg(long, value_parser = non_negative)]
    pub concentration_percent: f64,

    #[arg(long, default_value_t = 1.0, value_parser = positive)]
    pub path_length_dm: f64,

    #[arg(long, value_enum, default_value_t = Hand::Dextro)]
    pub handedness: Hand,

    /// Analyzer azimuth, in --angle-unit.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub analyzer: f64,

    #[arg(long, default_value_t = 589.0, value_parser = positive)]
    pub wavelength_nm: f64,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Force the fitted line through the origin.
    #[arg(long)]
    pub through_origin: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Comma-separated `name:S` pairs. Negative S marks a levorotatory sample.
    #[arg(long, value_delimiter = ',', value_parser = sample_spec, default_value = "sample:66.5")]
    pub samples: Vec<(String, f64)>,

    /// Comma-separated concentrations in g/100 mL.
    #[arg(
        long,
        value_delimiter = ',',
        value_parser = non_negative,
        default_value = "0.25,0.5,0.75,1,1.25,1.5,1.75,2"
    )]
    pub concentrations: Vec<f64>,

    /// Standard deviation of the reading noise in degrees.
    #[arg(long, default_value_t = 0.01, value_parser = non_negative)]
    pub noise_deg: f64,

    #[arg(long, default_value_t = 1.0, value_parser = positive)]
    pub path_length_dm: f64,

    #[arg(long, default_value_t = 589.0, value_parser = positive)]
    pub wavelength_nm: f64,

    #[arg(long, default_value_t = 18.0, allow_negative_numbers = true)]
    pub temperature_c: f64,

    /// RNG seed. Sample k uses seed + k.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[command(flatten)]
    pub input: InputArgs,

    #[arg(long, value_enum, default_value_t = Kind::Absorbed)]
    pub kind: Kind,

    #[arg(long, value_enum, default_value_t = Format::Svg)]
    pub format: Format,

    #[arg(long)]
    pub title: Option<String>,

    #[arg(long, default_value_t = 720)]
    pub width: u32,

    #[arg(long, default_value_t = 440)]
    pub height: u32,
}

fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

fn non_negative(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v >= 0.0 {
        Ok(v)
    } else {
        Err(format!("must be >= 0, got {v}"))
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be > 0, got {v}"))
    }
}

fn sample_spec(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s
        .rsplit_once(':')
        .ok_or_else(|| format!("`{s}` is not of the form name:S"))?;
    let name = name.trim();
    if name.is_empty() {
        return Err(format!("`{s}` has an empty sample name"));
    }
    Ok((name.to_string(), parse_f64(value)?))
}

/// Failure classes with stable exit codes.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Data(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Data(e)
    }
}

impl From<chiroptica::Error> for Failure {
    fn from(e: chiroptica::Error) -> Self {
        Failure::Data(e.into())
    }
}

fn report(failure: &Failure) {
    let styled =
        std::env::var_os("CHIROPTICA_NO_COLOR").is_none() && std::io::stderr().is_terminal();
    let label = if styled {
        "\x1b[1;31merror\x1b[0m"
    } else {
        "error"
    };
    let message = match failure {
        Failure::Usage(m) => m.clone(),
        Failure::Data(e) => format!("{e:#}"),
    };
    let _ = writeln!(std::io::stderr(), "{label}: {message}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            report(&failure);
            ExitCode::from(failure.code())
        }
    }
}
