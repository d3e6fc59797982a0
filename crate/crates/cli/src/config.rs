//! Sweep configuration assembled from flags, an optional JSON file and
//! per-command defaults.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use dirac_step::if_shift::Polarization;
use dirac_step::{critical_angle, ShiftError, StepParams};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tolerances::Tolerances;

/// Margin kept from the critical angle and from grazing incidence by the
/// default angle grids.
pub const ANGLE_MARGIN: f64 = 1e-3;
pub const DEFAULT_THETA_COUNT: usize = 2000;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{0} grid is empty")]
    EmptyGrid(&'static str),
    #[error("{0} grid is not sorted (start > stop)")]
    UnsortedGrid(&'static str),
    #[error("{0} grid has a non-finite bound")]
    NonFinite(&'static str),
    #[error("tolerance `{key}`: {reason}")]
    Tolerance { key: String, reason: String },
    #[error("cannot read config {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse config {path}: {source}")]
    Parse {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error(transparent)]
    Model(#[from] ShiftError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Evenly spaced grid including both ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub fn validate(&self, name: &'static str) -> Result<(), ConfigError> {
        if self.count == 0 {
            return Err(ConfigError::EmptyGrid(name));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(ConfigError::NonFinite(name));
        }
        if self.start > self.stop {
            return Err(ConfigError::UnsortedGrid(name));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.stop
                } else {
                    self.start + i as f64 * step
                }
            })
            .collect()
    }
}

/// Optional settings from either the command line or a config file. Angles
/// are converted to radians before layers are merged.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    #[serde(rename = "E")]
    pub energy: Option<f64>,
    #[serde(rename = "m")]
    pub mass: Option<f64>,
    #[serde(rename = "V0")]
    pub step: Option<f64>,
    pub theta_start: Option<f64>,
    pub theta_stop: Option<f64>,
    pub theta_count: Option<usize>,
    #[serde(default)]
    pub degrees: bool,
    pub e_start: Option<f64>,
    pub e_stop: Option<f64>,
    pub e_count: Option<usize>,
    pub polarization: Option<String>,
    pub format: Option<OutputFormat>,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

impl Overrides {
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| ConfigError::Parse {
            path: path.to_path_buf(),
            source,
        })
    }

    fn in_radians(mut self) -> Self {
        if self.degrees {
            self.theta_start = self.theta_start.map(f64::to_radians);
            self.theta_stop = self.theta_stop.map(f64::to_radians);
            self.degrees = false;
        }
        self
    }

    /// Layers `over` on top of `self`; set fields of `over` win.
    pub fn merge(self, over: Overrides) -> Overrides {
        let (base, over) = (self.in_radians(), over.in_radians());
        let mut tolerances = base.tolerances;
        tolerances.extend(over.tolerances);
        Overrides {
            energy: over.energy.or(base.energy),
            mass: over.mass.or(base.mass),
            step: over.step.or(base.step),
            theta_start: over.theta_start.or(base.theta_start),
            theta_stop: over.theta_stop.or(base.theta_stop),
            theta_count: over.theta_count.or(base.theta_count),
            degrees: false,
            e_start: over.e_start.or(base.e_start),
            e_stop: over.e_stop.or(base.e_stop),
            e_count: over.e_count.or(base.e_count),
            polarization: over.polarization.or(base.polarization),
            format: over.format.or(base.format),
            out: over.out.or(base.out),
            tolerances,
        }
    }
}

/// Default angle range of a command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngleRange {
    /// `[θ_c + 1e-3, π/2 − 1e-3]`, or from `1e-3` when every angle tunnels.
    Tunneling,
    /// `[0, π/2 − 1e-3]`.
    Full,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub energy: f64,
    pub mass: f64,
    pub step: f64,
    pub theta: Grid,
    pub energies: Grid,
    pub polarization: Polarization,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub tolerances: Tolerances,
}

impl SweepConfig {
    pub fn resolve(o: Overrides, range: AngleRange, theta_count: usize) -> Result<Self, ConfigError> {
        let o = o.in_radians();
        let energy = o.energy.unwrap_or(8.5);
        let mass = o.mass.unwrap_or(1.0);
        let step = o.step.unwrap_or(5.0);
        let base = StepParams::new(energy, mass, step, 0.0)?;

        let stop = FRAC_PI_2 - ANGLE_MARGIN;
        let start = match range {
            AngleRange::Full => 0.0,
            AngleRange::Tunneling => critical_angle(&base).map_or(0.0, |c| c.min(stop)) + ANGLE_MARGIN,
        };
        let theta = Grid {
            start: o.theta_start.unwrap_or(start),
            stop: o.theta_stop.unwrap_or(stop),
            count: o.theta_count.unwrap_or(theta_count),
        };
        theta.validate("theta")?;
        if theta.start < 0.0 || theta.stop >= FRAC_PI_2 {
            return Err(ShiftError::InvalidParams {
                name: "theta",
                reason: format!("grid [{}, {}] must lie in [0, π/2)", theta.start, theta.stop),
            }
            .into());
        }

        let energies = Grid {
            start: o.e_start.unwrap_or(1.05),
            stop: o.e_stop.unwrap_or(12.0),
            count: o.e_count.unwrap_or(220),
        };
        energies.validate("energy")?;

        let polarization = match o.polarization {
            Some(p) => p.parse()?,
            None => Polarization::Up,
        };
        let mut tolerances = Tolerances::default();
        for (key, value) in &o.tolerances {
            tolerances.set(key, *value)?;
        }
        Ok(Self {
            energy,
            mass,
            step,
            theta,
            energies,
            polarization,
            format: o.format.unwrap_or_default(),
            out: o.out,
            tolerances,
        })
    }

    pub fn base_params(&self) -> StepParams {
        StepParams {
            energy: self.energy,
            mass: self.mass,
            step: self.step,
            theta: 0.0,
        }
    }
}

/// Parses `KEY=VALUE` for `--tolerance`.
pub fn parse_tolerance(s: &str) -> Result<(String, f64), String> {
    let (key, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected KEY=VALUE, got {s:?}"))?;
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|e| format!("bad value for {key}: {e}"))?;
    Ok((key.trim().to_string(), value))
}
