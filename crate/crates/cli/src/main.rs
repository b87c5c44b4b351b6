mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use stabperf::{AnalysisError, CodeError, DecodeError, EnumeratorError};

#[derive(Parser, Debug, Clone)]
#[command(name = "stabperf", version, about = "Stabilizer code performance analysis")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "STABPERF_THREADS")]
    threads: Option<usize>,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the output here and a manifest next to it.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// List built-in codes.
    Codes,
    /// Stabilizer, normalizer and logical weight enumerators.
    We(WeArgs),
    /// Non-correctable fractions per error class and β profiles.
    Beta(BetaArgs),
    /// Logical error rate curves.
    Curve(CurveArgs),
    /// Code-effective thresholds.
    Threshold(ThresholdArgs),
    /// Monte Carlo logical error rate.
    Simulate(SimulateArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Args, Debug, Clone)]
pub struct WeArgs {
    /// Built-in name or path to a .stab file.
    pub code: String,
    /// Largest stabilizer group enumerated, as log2 of its size.
    #[arg(long, default_value_t = 26)]
    pub cap_log2: u32,
}

#[derive(Args, Debug, Clone)]
pub struct BetaArgs {
    pub code: String,
    /// `ml`, `mwpm` or `bd:E_G,E_Z`.
    #[arg(long)]
    pub decoder: String,
    #[arg(long, default_value_t = 3)]
    pub jmax: usize,
    /// Biases for the β rows, e.g. `1,10,100,inf`.
    #[arg(long, value_delimiter = ',', default_value = "1,10,100,inf")]
    pub bias: Vec<String>,
    /// Sweep only all-Z patterns (gives β at infinite bias).
    #[arg(long)]
    pub z_only: bool,
    /// Count every pattern of every weight (CSS matching, n <= 24).
    #[arg(long, conflicts_with = "z_only")]
    pub full: bool,
    /// Channel used by the ML decoder.
    #[arg(long, default_value = "depol")]
    pub channel: String,
    /// Total error rate used by the ML decoder.
    #[arg(long, default_value_t = stabperf::beta::REFERENCE_RHO)]
    pub rho_ref: f64,
    /// Matching tie order.
    #[arg(long, value_enum, default_value_t = TieArg::PartnersFirst)]
    pub tie_order: TieArg,
    /// Allow sweeps above 10^8 decodes.
    #[arg(long)]
    pub confirm: bool,
    /// Also write the β profiles as JSON.
    #[arg(long)]
    pub profile_out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum TieArg {
    PartnersFirst,
    BoundaryFirst,
}

#[derive(Args, Debug, Clone)]
pub struct CurveArgs {
    /// Built-in name or .stab path; supplies n and the distance.
    pub code: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Comma-separated: bd, bd-asym, complete, upper, asymptotic.
    #[arg(long, value_delimiter = ',', default_value = "bd")]
    pub mode: Vec<String>,
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub eg: Option<usize>,
    #[arg(long)]
    pub ez: Option<usize>,
    /// `depol`, `phaseflip`, `biased:A`.
    #[arg(long, default_value = "depol")]
    pub channel: String,
    /// `LO:HI:POINTS` (log spaced) or a comma-separated list.
    #[arg(long, default_value = "1e-4:0.5:41")]
    pub rho_grid: String,
    /// β profile JSON.
    #[arg(long)]
    pub beta_file: Option<PathBuf>,
    /// β_{t+1} for the upper and asymptotic modes.
    #[arg(long)]
    pub beta_t1: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct ThresholdArgs {
    pub code: String,
    #[arg(long, default_value_t = 0.0)]
    pub gamma: f64,
    #[arg(long, default_value = "depol")]
    pub channel: String,
    /// `ml`, `mwpm` or `bd`; defaults to matching when the code allows it.
    #[arg(long)]
    pub decoder: Option<String>,
    /// β profile JSON instead of a sweep.
    #[arg(long)]
    pub beta_file: Option<PathBuf>,
    #[arg(long, default_value_t = stabperf::beta::REFERENCE_RHO)]
    pub rho_ref: f64,
    #[arg(long)]
    pub confirm: bool,
}

#[derive(Args, Debug, Clone)]
pub struct SimulateArgs {
    pub code: String,
    #[arg(long)]
    pub decoder: String,
    #[arg(long, default_value = "depol")]
    pub channel: String,
    /// One rate, a list, or `LO:HI:POINTS`.
    #[arg(long)]
    pub rho: String,
    #[arg(long, default_value = "1e5", value_parser = parse_count)]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Stop early at this relative 95% half-width.
    #[arg(long)]
    pub early_stop: Option<f64>,
    #[arg(long, value_enum, default_value_t = TieArg::PartnersFirst)]
    pub tie_order: TieArg,
}

#[derive(Args, Debug, Clone)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}

fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v < 1.8e19 => Ok(v as u64),
        _ => Err(format!("not a count: {s}")),
    }
}

/// Errors with their process exit codes.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Budget(String),
    Validation(String),
    Other(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Validation(_) => 4,
            CliError::Other(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Budget(m) | CliError::Validation(m) | CliError::Other(m) => m,
        }
    }
}

impl From<CodeError> for CliError {
    fn from(e: CodeError) -> Self {
        match e {
            CodeError::UnknownCode(_) | CodeError::BadSurfaceDimensions { .. } => CliError::Usage(e.to_string()),
            CodeError::Io { .. } => CliError::Other(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<EnumeratorError> for CliError {
    fn from(e: EnumeratorError) -> Self {
        match e {
            EnumeratorError::CapExceeded { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<DecodeError> for CliError {
    fn from(e: DecodeError) -> Self {
        match e {
            DecodeError::CapExceeded { .. } | DecodeError::TooManyDefects(..) => CliError::Budget(e.to_string()),
            DecodeError::UnknownSelector(_) | DecodeError::InvalidChannel(_) | DecodeError::NotSyndromeDecoder => {
                CliError::Usage(e.to_string())
            }
            DecodeError::GeometryMissing(_) | DecodeError::ZeroChannel => CliError::Validation(e.to_string()),
            _ => CliError::Other(e.to_string()),
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            AnalysisError::Decode(d) => d.into(),
            AnalysisError::Domain(_) | AnalysisError::InfiniteBias => CliError::Usage(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Other(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

/// Runs one invocation; `args` excludes the program name.
pub fn run(args: Vec<String>) -> Result<(), CliError> {
    let argv = std::iter::once("stabperf".to_string()).chain(args.iter().cloned());
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return Ok(());
            }
            return Err(CliError::Usage(e.to_string()));
        }
    };
    if let Some(t) = cli.threads {
        // A second build in the same process (replay) keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
    commands::dispatch(&cli, &args)
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.message().trim_end());
            ExitCode::from(e.exit_code())
        }
    }
}
