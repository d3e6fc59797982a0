//! Incident kinematics, energy-zone classification and the critical angle.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ShiftError};

/// Relative width of the band around `E = V0 ± m*` that is reported as
/// [`Zone::Degenerate`].
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;

/// Physical inputs of the step problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepParams {
    /// Total energy `E`.
    pub energy: f64,
    /// Rest mass `m`.
    pub mass: f64,
    /// Step height `V0`.
    pub step: f64,
    /// Incidence angle in radians, measured from the step normal.
    pub theta: f64,
}

impl StepParams {
    pub fn new(energy: f64, mass: f64, step: f64, theta: f64) -> Result<Self> {
        let params = Self {
            energy,
            mass,
            step,
            theta,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_theta(&self, theta: f64) -> Result<Self> {
        Self::new(self.energy, self.mass, self.step, theta)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |name: &'static str, value: f64| {
            if value.is_finite() {
                Ok(())
            } else {
                Err(ShiftError::InvalidParams {
                    name,
                    reason: format!("{value} is not finite"),
                })
            }
        };
        finite("energy", self.energy)?;
        finite("mass", self.mass)?;
        finite("step", self.step)?;
        finite("theta", self.theta)?;
        if self.mass <= 0.0 {
            return Err(ShiftError::InvalidParams {
                name: "mass",
                reason: format!("must be positive, got {}", self.mass),
            });
        }
        // V0 = 0 is the no-step limit and is kept valid.
        if self.step < 0.0 {
            return Err(ShiftError::InvalidParams {
                name: "step",
                reason: format!("must be non-negative, got {}", self.step),
            });
        }
        if !(0.0..FRAC_PI_2).contains(&self.theta) {
            return Err(ShiftError::InvalidParams {
                name: "theta",
                reason: format!("must lie in [0, π/2), got {}", self.theta),
            });
        }
        if self.energy <= self.mass {
            return Err(ShiftError::NotPropagating {
                energy: self.energy,
                mass: self.mass,
            });
        }
        Ok(())
    }

    /// Incident momentum magnitude `p = sqrt(E² − m²)`.
    pub fn momentum(&self) -> f64 {
        ((self.energy - self.mass) * (self.energy + self.mass)).sqrt()
    }
}

/// Energy zone of the transmitted wave.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Zone {
    /// Diffusion: `E > V0 + m*`, propagating transmission.
    Diffusion,
    /// Tunneling: `V0 − m* < E < V0 + m*`, evanescent transmission.
    Tunneling,
    /// Klein: `E < V0 − m*`.
    Klein,
    /// `E` sits on one of the boundaries `E = V0 ± m*`.
    Degenerate,
}

impl Zone {
    pub fn tag(self) -> &'static str {
        match self {
            Zone::Diffusion => "D",
            Zone::Tunneling => "T",
            Zone::Klein => "K",
            Zone::Degenerate => "degenerate",
        }
    }
}

impl fmt::Display for Zone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Momenta and zone data derived from [`StepParams`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    pub params: StepParams,
    pub p: f64,
    pub p_y: f64,
    pub p_z: f64,
    /// Transmitted transverse momentum, equal to `p_y`.
    pub q_y: f64,
    /// Transmitted longitudinal momentum; `iκ` in the tunneling zone.
    pub q_z: Complex64,
    /// Evanescent decay rate; zero outside the tunneling zone.
    pub kappa: f64,
    /// Effective mass `m* = sqrt(p_y² + m²)`.
    pub m_star: f64,
    pub zone: Zone,
    pub critical_angle: Option<f64>,
}

impl Kinematics {
    /// Kinematics at fixed energy for a given transverse momentum. The
    /// incidence angle is re-derived from `p_y`.
    pub fn at_transverse_momentum(params: &StepParams, p_y: f64) -> Result<Self> {
        let p = params.momentum();
        if !(0.0..p).contains(&p_y) {
            return Err(ShiftError::InvalidParams {
                name: "p_y",
                reason: format!("must lie in [0, p = {p}), got {p_y}"),
            });
        }
        let theta = (p_y / p).asin();
        let params = params.with_theta(theta)?;
        let p_z = ((p - p_y) * (p + p_y)).sqrt();
        Ok(Self::assemble(params, p, p_y, p_z))
    }

    fn assemble(params: StepParams, p: f64, p_y: f64, p_z: f64) -> Self {
        let StepParams {
            energy: e,
            mass: m,
            step: v0,
            ..
        } = params;
        let m_star = p_y.hypot(m);
        let zone = classify(e, v0, m_star);
        let excess = e - v0;
        // (E − V0)² − m*², factored to limit cancellation.
        let disc = (excess - m_star) * (excess + m_star);
        let (q_z, kappa) = match zone {
            Zone::Tunneling => {
                let kappa = (-disc).sqrt();
                (Complex64::new(0.0, kappa), kappa)
            }
            Zone::Diffusion | Zone::Klein => (Complex64::new(disc.sqrt(), 0.0), 0.0),
            Zone::Degenerate => (Complex64::new(0.0, 0.0), 0.0),
        };
        Self {
            params,
            p,
            p_y,
            p_z,
            q_y: p_y,
            q_z,
            kappa,
            m_star,
            zone,
            critical_angle: critical_angle(&params),
        }
    }

    pub fn theta(&self) -> f64 {
        self.params.theta
    }

    pub fn energy(&self) -> f64 {
        self.params.energy
    }

    pub fn mass(&self) -> f64 {
        self.params.mass
    }

    pub fn step(&self) -> f64 {
        self.params.step
    }

    /// `E + m`, the denominator of the free-region spinors.
    pub fn free_denominator(&self) -> f64 {
        self.params.energy + self.params.mass
    }

    /// `E − V0 + m`, the denominator of the transmitted spinors.
    pub fn step_denominator(&self) -> f64 {
        self.params.energy - self.params.step + self.params.mass
    }

    /// Transverse momentum at which the tunneling zone begins at this energy,
    /// `sqrt((E − V0)² − m²)`, when it exists.
    pub fn critical_transverse_momentum(&self) -> Option<f64> {
        let excess = self.params.energy - self.params.step;
        let m = self.params.mass;
        let disc = (excess.abs() - m) * (excess.abs() + m);
        (disc >= 0.0).then(|| disc.sqrt())
    }
}

fn classify(energy: f64, step: f64, m_star: f64) -> Zone {
    let tol = BOUNDARY_TOLERANCE * energy.abs().max(1.0);
    let upper = energy - (step + m_star);
    let lower = energy - (step - m_star);
    if upper.abs() <= tol || lower.abs() <= tol {
        Zone::Degenerate
    } else if upper > 0.0 {
        Zone::Diffusion
    } else if lower > 0.0 {
        Zone::Tunneling
    } else {
        Zone::Klein
    }
}

/// Derives momenta, the zone tag and the critical angle.
pub fn derive_kinematics(params: &StepParams) -> Result<Kinematics> {
    params.validate()?;
    let p = params.momentum();
    let (sin, cos) = params.theta.sin_cos();
    Ok(Kinematics::assemble(*params, p, p * sin, p * cos))
}

/// Critical angle for total reflection,
/// `arcsin(sqrt(((E − V0)² − m²) / (E² − m²)))`.
///
/// `None` when the argument of the square root is negative or the arcsine
/// argument exceeds one. The incidence angle in `params` is ignored.
pub fn critical_angle(params: &StepParams) -> Option<f64> {
    let StepParams {
        energy: e,
        mass: m,
        step: v0,
        ..
    } = *params;
    if e <= m {
        return None;
    }
    let excess = e - v0;
    let numerator = (excess.abs() - m) * (excess.abs() + m);
    if numerator < 0.0 {
        return None;
    }
    let ratio = numerator / ((e - m) * (e + m));
    (ratio <= 1.0).then(|| ratio.sqrt().asin())
}

/// Zone classification on an `(E, θ)` grid together with the boundary
/// curves of the tunneling zone.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZoneMap {
    pub energies: Vec<f64>,
    pub angles: Vec<f64>,
    /// Row-major, one row per energy.
    pub zones: Vec<Zone>,
    /// Energy of the T/K boundary `E = V0 − m*(θ)` per angle.
    pub lower_boundary: Vec<f64>,
    /// Energy of the D/T boundary `E = V0 + m*(θ)` per angle.
    pub upper_boundary: Vec<f64>,
    /// Critical angle per energy.
    pub critical_angles: Vec<Option<f64>>,
}

impl ZoneMap {
    pub fn zone(&self, energy_index: usize, angle_index: usize) -> Zone {
        self.zones[energy_index * self.angles.len() + angle_index]
    }

    pub fn row(&self, energy_index: usize) -> &[Zone] {
        let n = self.angles.len();
        &self.zones[energy_index * n..(energy_index + 1) * n]
    }
}

fn check_grid(name: &str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(ShiftError::InvalidGrid(format!("{name} grid is empty")));
    }
    if grid.iter().any(|v| !v.is_finite()) {
        return Err(ShiftError::InvalidGrid(format!(
            "{name} grid has non-finite entries"
        )));
    }
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(ShiftError::InvalidGrid(format!("{name} grid is not sorted")));
    }
    Ok(())
}

/// Energies at which `E = V0 ± m*(θ)` holds at fixed `θ`, with `m*` itself
/// depending on `E` through `p_y = sqrt(E² − m²) sin θ`. Returns
/// `(lower, upper)`.
pub fn boundary_energies(step: f64, mass: f64, theta: f64) -> (f64, f64) {
    let (s, c) = theta.sin_cos();
    let c2 = c * c;
    let root = (step * step * s * s + mass * mass * c2 * c2).sqrt();
    ((step - root) / c2, (step + root) / c2)
}

/// Classifies every `(E, θ)` cell at fixed `V0` and `m`.
pub fn zone_map(energies: &[f64], angles: &[f64], step: f64, mass: f64) -> Result<ZoneMap> {
    check_grid("energy", energies)?;
    check_grid("angle", angles)?;
    let mut zones = Vec::with_capacity(energies.len() * angles.len());
    let mut critical_angles = Vec::with_capacity(energies.len());
    for &energy in energies {
        let base = StepParams::new(energy, mass, step, 0.0)?;
        critical_angles.push(critical_angle(&base));
        for &theta in angles {
            zones.push(derive_kinematics(&base.with_theta(theta)?)?.zone);
        }
    }
    let (lower_boundary, upper_boundary) = angles
        .iter()
        .map(|&theta| boundary_energies(step, mass, theta))
        .unzip();
    Ok(ZoneMap {
        energies: energies.to_vec(),
        angles: angles.to_vec(),
        zones,
        lower_boundary,
        upper_boundary,
        critical_angles,
    })
}
