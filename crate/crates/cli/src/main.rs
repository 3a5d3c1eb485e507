mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Ctx, ResidualRejected};
use config::{extract_overrides, ConfigError, RunConfig};

/// Geometric two-qubit gates for exchange-coupled spin qubits.
///
/// Any configuration key can be overridden with `--section.key=value`.
#[derive(Parser, Debug)]
#[command(name = "geomspin", version)]
struct Cli {
    /// INI configuration file; built-in defaults apply otherwise.
    #[arg(long, short, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Solve for the constant exchange of the CZ pulse.
    Calibrate,
    /// Propagate the configured gate and report its fidelity.
    Simulate,
    /// Local invariants along the gate trajectory.
    Invariants,
    /// Mean infidelity under quasistatic exchange noise.
    NoiseSweep,
    /// Geometric against dynamical exchange gates under noise.
    Compare,
    /// Tabulate the control pulses.
    Pulses,
}

const EXIT_CONFIG: u8 = 2;
const EXIT_CALIBRATION: u8 = 3;
const EXIT_NUMERICAL: u8 = 4;

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<ConfigError>() {
            return EXIT_CONFIG;
        }
        if cause.is::<ResidualRejected>() {
            return EXIT_CALIBRATION;
        }
        if let Some(e) = cause.downcast_ref::<geomspin::Error>() {
            return match e {
                geomspin::Error::Calibration { .. } => EXIT_CALIBRATION,
                geomspin::Error::Usage(_) | geomspin::Error::Regime(_) => EXIT_CONFIG,
                _ => EXIT_NUMERICAL,
            };
        }
    }
    1
}

fn init_threads() -> Result<(), ConfigError> {
    let Ok(raw) = std::env::var("GEOMSPIN_THREADS") else { return Ok(()) };
    let n: usize = raw.trim().parse().map_err(|_| ConfigError(format!("GEOMSPIN_THREADS: cannot parse '{raw}'")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| ConfigError(format!("GEOMSPIN_THREADS: {e}")))?;
    }
    Ok(())
}

fn run() -> anyhow::Result<()> {
    let (args, overrides) = extract_overrides(std::env::args().collect())?;
    let cli = Cli::parse_from(args);
    init_threads()?;
    let cfg = RunConfig::load(cli.config.as_deref(), &overrides)?;
    let ctx = Ctx::new(cfg)?;
    match cli.command {
        Command::Calibrate => ctx.calibrate(),
        Command::Simulate => ctx.simulate(),
        Command::Invariants => ctx.invariants(),
        Command::NoiseSweep => ctx.noise_sweep(),
        Command::Compare => ctx.compare(),
        Command::Pulses => ctx.pulses(),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
