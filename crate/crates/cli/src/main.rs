//! `spinchain`: spectra, CNOT error sweeps, the four-spin order-finding
//! program and gate compilation from the command line.

mod commands;
mod config;
mod error;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::ExperimentConfig;
use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "spinchain", version, about = "Pulse-level simulation of a qubitless spin-chain quantum computer")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

/// Flags override the configuration file, which overrides the defaults.
#[derive(Debug, Args)]
struct Common {
    /// Flat `key = value` configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output frequency units: J or absolute.
    #[arg(long, global = true)]
    units: Option<String>,
    /// Propagation engine: rwa, exact or oracle.
    #[arg(long, global = true)]
    engine: Option<String>,
    /// Labeling rule: max-overlap or matched.
    #[arg(long, global = true)]
    strategy: Option<String>,
    #[arg(long, global = true)]
    spins: Option<String>,
    /// Exchange coupling J.
    #[arg(long = "J", global = true)]
    coupling: Option<String>,
    /// Larmor frequency of spin 0.
    #[arg(long, global = true, allow_hyphen_values = true)]
    omega0: Option<String>,
    /// Larmor increment between neighbouring spins.
    #[arg(long = "delta-omega", global = true, allow_hyphen_values = true)]
    delta_omega: Option<String>,
    /// Rabi frequency of every pulse.
    #[arg(long, global = true)]
    rabi: Option<String>,
    /// Rabi grid for sweeps: `a,b,c` or `start:stop:step`.
    #[arg(long = "rabi-grid", global = true)]
    rabi_grid: Option<String>,
    /// Comma-separated field gradients for sweeps.
    #[arg(long = "delta-omegas", global = true)]
    delta_omegas: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Spectrum, transition table and reachability report.
    Spectrum,
    /// CNOT π-pulse probabilities over a δω × Ω grid.
    CnotSweep,
    /// The 4-spin order-finding program.
    Shor,
    /// Compile a gate list into the pulse text format.
    Compile {
        /// One gate per line: `u q= theta= phi=`, `cnot c= t=` or `cphase a= b= phi=`.
        gates: PathBuf,
    },
}

fn resolve(cli: &Cli) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match cli.command {
        Command::Shor => ExperimentConfig::four_spin(),
        _ => ExperimentConfig::two_spin(),
    };
    if let Some(path) = &cli.common.config {
        let text = fs::read_to_string(path).map_err(CliError::io(path))?;
        cfg.merge_text(&text)?;
    }
    let c = &cli.common;
    let flags = [
        ("spins", &c.spins),
        ("coupling", &c.coupling),
        ("omega0", &c.omega0),
        ("delta_omega", &c.delta_omega),
        ("rabi", &c.rabi),
        ("rabi_grid", &c.rabi_grid),
        ("delta_omegas", &c.delta_omegas),
        ("engine", &c.engine),
        ("strategy", &c.strategy),
        ("units", &c.units),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            cfg.set(key, v)?;
        }
    }
    if let Some(out) = &c.out {
        cfg.out = out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<String, CliError> {
    let cfg = resolve(cli)?;
    log::info!("configuration:\n{cfg}");
    match &cli.command {
        Command::Spectrum => commands::spectrum(&cfg),
        Command::CnotSweep => commands::cnot_sweep_cmd(&cfg),
        Command::Shor => commands::shor(&cfg),
        Command::Compile { gates } => commands::compile(&cfg, gates),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(summary) => {
            print!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("spinchain: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
