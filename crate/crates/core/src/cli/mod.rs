//! Command-line front end of the `bragg` binary.
//!
//! Exit codes: 0 success, 2 bad configuration or domain error, 3 I/O error,
//! 4 truncation failure or oracle mismatch.

pub mod commands;
pub mod config;
pub mod format;
pub mod presets;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use self::commands::OracleOptions;
use self::config::{RunConfig, SweepSection};
use crate::error::{Error, Result};
use crate::probe::ProbeState;

#[derive(Debug, Parser)]
#[command(
    name = "bragg",
    version,
    about = "Bragg-scattered condensate side-modes coupled to a probe field"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Named figure parameter set.
    #[arg(long, global = true)]
    pub preset: Option<String>,
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write CSV output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Also write `<out>.plot.py` next to the CSV.
    #[arg(long, global = true)]
    pub plot_script: bool,

    /// Probe state: vacuum, coherent:<re>,<im> or fock:<n>.
    #[arg(long, global = true)]
    pub probe: Option<ProbeState>,
    /// Dimensionless momentum q·ξ.
    #[arg(long, global = true)]
    pub x: Option<f64>,
    /// Rabi frequency Ω, s⁻¹.
    #[arg(long, global = true)]
    pub rabi: Option<f64>,
    /// Use this η̃ instead of the one derived from the physics section.
    #[arg(long, global = true)]
    pub eta: Option<f64>,

    #[arg(long, global = true)]
    pub t_start: Option<f64>,
    #[arg(long, global = true)]
    pub t_stop: Option<f64>,
    #[arg(long, global = true)]
    pub t_step: Option<f64>,

    #[arg(long, global = true)]
    pub omega_min: Option<f64>,
    #[arg(long, global = true)]
    pub omega_max: Option<f64>,
    /// Grid size for sweep-omega and threshold-curve.
    #[arg(long, global = true)]
    pub points: Option<usize>,
    /// Evaluation time of sweep-omega, μs.
    #[arg(long, global = true)]
    pub t_fixed: Option<f64>,

    #[arg(long, global = true)]
    pub x_min: Option<f64>,
    #[arg(long, global = true)]
    pub x_max: Option<f64>,

    /// Oracle Fock cutoffs, e.g. 24,24,24.
    #[arg(long, global = true, value_delimiter = ',')]
    pub cutoffs: Option<Vec<usize>>,
    /// Last dimensionless time of the oracle comparison.
    #[arg(long, global = true)]
    pub tau_stop: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Eigenvalues, regime and threshold for one parameter set.
    Spectrum,
    /// Instability threshold η̃_th against x as CSV.
    ThresholdCurve,
    /// Occupations, ξ parameters and Mandel Q over the time grid as CSV.
    Evolve,
    /// ξ parameters at a fixed time against Ω as CSV.
    SweepOmega,
    /// Compare the moment pipeline with the Fock-space integrator.
    OracleCheck,
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) => 3,
        Error::Truncation { .. } => 4,
        _ => 2,
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("bragg: {e}");
            exit_code(&e)
        }
    }
}

fn execute(cli: &Cli) -> Result<i32> {
    match cli.command {
        Command::Spectrum => {
            print!("{}", commands::cmd_spectrum(&resolve_config(cli)?)?);
            Ok(0)
        }
        Command::ThresholdCurve => {
            let curve = optional_config(cli)?.and_then(|c| c.curve);
            let x_min = cli.x_min.or(curve.map(|c| c.x_min)).unwrap_or(0.1);
            let x_max = cli.x_max.or(curve.map(|c| c.x_max)).unwrap_or(10.0);
            let points = cli.points.or(curve.map(|c| c.points)).unwrap_or(100);
            let csv = commands::cmd_threshold_curve(x_min, x_max, points)?;
            emit(&csv, cli.out.as_deref(), cli.plot_script)?;
            Ok(0)
        }
        Command::Evolve => {
            let config = resolve_config(cli)?;
            let csv = commands::cmd_evolve(&config)?;
            emit(
                &csv,
                config.output.path.as_deref(),
                config.output.plot_script,
            )?;
            Ok(0)
        }
        Command::SweepOmega => {
            let config = resolve_config(cli)?;
            let base = config.sweep.unwrap_or(SweepSection {
                omega_min: 0.0,
                omega_max: 20.0,
                points: 201,
                t_fixed_us: 10.0,
            });
            let csv = commands::cmd_sweep_omega(
                &config,
                cli.omega_min.unwrap_or(base.omega_min),
                cli.omega_max.unwrap_or(base.omega_max),
                cli.points.unwrap_or(base.points),
                cli.t_fixed.unwrap_or(base.t_fixed_us),
            )?;
            emit(
                &csv,
                config.output.path.as_deref(),
                config.output.plot_script,
            )?;
            Ok(0)
        }
        Command::OracleCheck => {
            let config = resolve_config(cli)?;
            let mut options = OracleOptions::default();
            if let Some(c) = &cli.cutoffs {
                options.cutoffs = c.as_slice().try_into().map_err(|_| {
                    Error::Config(format!("--cutoffs takes three values, got {}", c.len()))
                })?;
            }
            if let Some(t) = cli.tau_stop {
                options.tau_stop = t;
            }
            let report = commands::cmd_oracle_check(&config, &options)?;
            print!("{}", report.text);
            Ok(if report.passed { 0 } else { 4 })
        }
    }
}

fn optional_config(cli: &Cli) -> Result<Option<RunConfig>> {
    if cli.preset.is_none() && cli.config.is_none() {
        Ok(None)
    } else {
        resolve_config(cli).map(Some)
    }
}

/// Preset and/or config file, then command-line overrides.
pub fn resolve_config(cli: &Cli) -> Result<RunConfig> {
    let mut config = match (&cli.config, &cli.preset) {
        (Some(path), preset) => {
            let mut c = RunConfig::load(path)?;
            if let Some(name) = preset {
                let p = presets::preset(name)?;
                c.preset = p.preset;
                c.physics = p.physics;
                c.probe = p.probe;
            }
            c
        }
        (None, Some(name)) => presets::preset(name)?,
        (None, None) => return Err(Error::Config("need --preset or --config".into())),
    };
    if let Some(p) = cli.probe {
        config.probe.state = p;
    }
    if let Some(x) = cli.x {
        config.physics.momentum_x = x;
    }
    if let Some(rabi) = cli.rabi {
        config.physics.rabi = rabi;
    }
    if let Some(eta) = cli.eta {
        config.physics.eta_tilde = Some(eta);
    }
    if let Some(t) = cli.t_start {
        config.time.start_us = t;
    }
    if let Some(t) = cli.t_stop {
        config.time.stop_us = t;
    }
    if let Some(t) = cli.t_step {
        config.time.step_us = t;
    }
    if let Some(out) = &cli.out {
        config.output.path = Some(out.clone());
    }
    config.output.plot_script |= cli.plot_script;
    config.validate()?;
    Ok(config)
}

fn emit(text: &str, out: Option<&Path>, plot: bool) -> Result<()> {
    match out {
        Some(path) => {
            write_file(path, text)?;
            if plot {
                let name = path
                    .file_name()
                    .map(|n| n.to_string_lossy().into_owned())
                    .unwrap_or_default();
                let mut script = path.as_os_str().to_owned();
                script.push(".plot.py");
                write_file(Path::new(&script), &commands::plot_script(&name))?;
            }
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}
