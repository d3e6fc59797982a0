//! Command-line definition and dispatch.

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use crate::config::{parse_tolerance, AngleRange, Overrides, OutputFormat, SweepConfig, DEFAULT_THETA_COUNT};
use crate::output::emit;
use crate::sweep::{beam_rows, sweep, zone_table};
use crate::validate::{all_passed, run_validation, ValidationOptions};

#[derive(Debug, Parser)]
#[command(name = "dirac-step", version, about = "Beam shifts of Dirac electrons at a potential step")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Electron energy, in units of the rest mass.
    #[arg(long = "E")]
    pub energy: Option<f64>,
    /// Rest mass.
    #[arg(long = "m")]
    pub mass: Option<f64>,
    /// Step height.
    #[arg(long = "V0")]
    pub step: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta_start: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta_stop: Option<f64>,
    #[arg(long)]
    pub theta_count: Option<usize>,
    /// Read angle flags in degrees instead of radians.
    #[arg(long)]
    pub degrees: bool,
    /// up, down, helicity+ or helicity-.
    #[arg(long)]
    pub polarization: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON file whose settings override the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Validation tolerance override, repeatable.
    #[arg(long = "tolerance", value_name = "KEY=VAL", value_parser = parse_tolerance)]
    pub tolerances: Vec<(String, f64)>,
}

impl CommonArgs {
    fn overrides(&self) -> Result<Overrides> {
        let flags = Overrides {
            energy: self.energy,
            mass: self.mass,
            step: self.step,
            theta_start: self.theta_start,
            theta_stop: self.theta_stop,
            theta_count: self.theta_count,
            degrees: self.degrees,
            polarization: self.polarization.clone(),
            format: self.format,
            out: self.out.clone(),
            tolerances: self.tolerances.iter().cloned().collect(),
            ..Default::default()
        };
        Ok(match &self.config {
            Some(path) => flags.merge(Overrides::from_file(path)?),
            None => flags,
        })
    }

    fn resolve(&self, range: AngleRange, theta_count: usize, grid: Option<&EnergyGridArgs>) -> Result<SweepConfig> {
        let mut overrides = self.overrides()?;
        if let Some(g) = grid {
            // Flags fill in only what the config file left unset.
            overrides.e_start = overrides.e_start.or(g.e_start);
            overrides.e_stop = overrides.e_stop.or(g.e_stop);
            overrides.e_count = overrides.e_count.or(g.e_count);
        }
        Ok(SweepConfig::resolve(overrides, range, theta_count)?)
    }
}

#[derive(Debug, Clone, Args)]
pub struct EnergyGridArgs {
    #[arg(long)]
    pub e_start: Option<f64>,
    #[arg(long)]
    pub e_stop: Option<f64>,
    #[arg(long)]
    pub e_count: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Zone map over an energy × angle grid with the critical-angle curve.
    Zones {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        grid: EnergyGridArgs,
    },
    /// Amplitudes and shifts over the full angle range.
    Coeffs {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Goos-Hänchen shift over the tunneling range.
    Ghshift {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Imbert-Fedorov shift over the tunneling range.
    Ifshift {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Gaussian-beam centroid shift against the stationary-phase value.
    Beam {
        #[command(flatten)]
        common: CommonArgs,
        /// Central incidence angle.
        #[arg(long, default_value_t = 0.7)]
        theta0: f64,
        /// Beam waists as multiples of 1/p, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = [100.0, 200.0, 400.0, 800.0])]
        waist_momentum: Vec<f64>,
        #[arg(long, default_value_t = dirac_step::beam_oracle::DEFAULT_MODES)]
        n_modes: usize,
        #[arg(long, default_value_t = dirac_step::beam_oracle::DEFAULT_SPAN)]
        span: f64,
    },
    /// Runs the invariant suite; exits nonzero when a check fails.
    Validate {
        #[command(flatten)]
        common: CommonArgs,
        /// Relative error injected into r, for exercising the failure path.
        #[arg(long, hide = true, default_value_t = 0.0)]
        perturb_amplitudes: f64,
    },
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Zones { common, grid } => {
            let config = common.resolve(AngleRange::Full, 200, Some(&grid))?;
            let rows = zone_table(&config).context("building zone map")?;
            emit(&rows, config.format, config.out.as_deref())?;
        }
        Command::Coeffs { common } => {
            let config = common.resolve(AngleRange::Full, DEFAULT_THETA_COUNT, None)?;
            emit(&sweep(&config), config.format, config.out.as_deref())?;
        }
        Command::Ghshift { common } | Command::Ifshift { common } => {
            let config = common.resolve(AngleRange::Tunneling, DEFAULT_THETA_COUNT, None)?;
            emit(&sweep(&config), config.format, config.out.as_deref())?;
        }
        Command::Beam {
            common,
            theta0,
            waist_momentum,
            n_modes,
            span,
        } => {
            let config = common.resolve(AngleRange::Tunneling, 1, None)?;
            let theta0 = if common.degrees { theta0.to_radians() } else { theta0 };
            let rows = beam_rows(&config.base_params(), theta0, &waist_momentum, n_modes, span)?;
            emit(&rows, config.format, config.out.as_deref())?;
        }
        Command::Validate {
            common,
            perturb_amplitudes,
        } => {
            let config = common.resolve(AngleRange::Tunneling, DEFAULT_THETA_COUNT, None)?;
            let checks = run_validation(
                &config,
                ValidationOptions {
                    perturbation: perturb_amplitudes,
                },
            );
            for check in &checks {
                println!("{check}");
            }
            let passed = all_passed(&checks);
            println!(
                "{} of {} checks passed",
                checks.iter().filter(|c| c.passed).count(),
                checks.len()
            );
            return Ok(if passed { 0 } else { 1 });
        }
    }
    Ok(0)
}
