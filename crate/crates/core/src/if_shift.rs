//! Transverse Imbert-Fedorov shift.
//!
//! The current route integrates the transverse evanescent current `j_x^t`
//! over the step and divides by the reflected longitudinal current. The
//! angular-momentum route follows from conservation of `J_z` between the
//! incident and reflected beams (see [`crate::fw_angular`]).

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, ShiftError};
use crate::gh_shift::require_tunneling;
use crate::kinematics::{derive_kinematics, Kinematics, StepParams};
use crate::scattering::{amplitudes_closed_form, ChannelAmplitudes, IncidentState, ScatterAmplitudes, Spin};

/// Largest imaginary residue tolerated in the transverse flux before it is
/// stored as a real number.
pub const REALNESS_TOLERANCE: f64 = 1e-14;

/// Below this `p_y / p` the angular-momentum shift is evaluated through the
/// reduced flip amplitude, since `1 − (|r|² − |r′|²)` cancels to `O(p_y²)`.
const SMALL_TRANSVERSE: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Polarization {
    Up,
    Down,
    HelicityPlus,
    HelicityMinus,
}

impl Polarization {
    /// Spin state whose shift the polarization is projected from.
    pub fn spin(self) -> Spin {
        match self {
            Polarization::Up | Polarization::HelicityPlus => Spin::Up,
            Polarization::Down | Polarization::HelicityMinus => Spin::Down,
        }
    }

    pub fn is_helicity(self) -> bool {
        matches!(self, Polarization::HelicityPlus | Polarization::HelicityMinus)
    }

    pub fn label(self) -> &'static str {
        match self {
            Polarization::Up => "up",
            Polarization::Down => "down",
            Polarization::HelicityPlus => "helicity+",
            Polarization::HelicityMinus => "helicity-",
        }
    }
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Polarization {
    type Err = ShiftError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "up" => Ok(Polarization::Up),
            "down" => Ok(Polarization::Down),
            "helicity+" | "helicity_plus" | "plus" => Ok(Polarization::HelicityPlus),
            "helicity-" | "helicity_minus" | "minus" => Ok(Polarization::HelicityMinus),
            other => Err(ShiftError::InvalidParams {
                name: "polarization",
                reason: format!("expected up, down, helicity+ or helicity-, got {other:?}"),
            }),
        }
    }
}

/// Transverse shift for arbitrary output channels,
///
/// ```text
/// S_x = (E+m) / (2 p_z (E−V0+m)) · i (t̄_↓ t_↑ − t̄_↑ t_↓) / R
/// ```
///
/// with `R` the total reflected weight.
pub fn transverse_shift(kin: &Kinematics, channels: &ChannelAmplitudes) -> Result<f64> {
    require_tunneling(kin)?;
    let (t_up, t_down) = (channels.transmitted_up, channels.transmitted_down);
    let flux = Complex64::i() * (t_down.conj() * t_up - t_up.conj() * t_down);
    if flux.im.abs() > REALNESS_TOLERANCE * flux.re.abs().max(1.0) {
        return Err(ShiftError::IdentityViolation {
            residual: flux.im.abs(),
            tolerance: REALNESS_TOLERANCE,
        });
    }
    let reflected = channels.reflected_weight();
    if reflected == 0.0 {
        return Err(ShiftError::Degenerate);
    }
    let prefactor = kin.free_denominator() / (2.0 * kin.p_z * kin.step_denominator());
    Ok(prefactor * flux.re / reflected)
}

/// Transverse shift from the evanescent current for a pure incident spin.
pub fn if_current(amps: &ScatterAmplitudes, kin: &Kinematics, spin: Spin) -> Result<f64> {
    transverse_shift(kin, &amps.channels(spin))
}

pub fn if_current_for_state(
    amps: &ScatterAmplitudes,
    kin: &Kinematics,
    state: &IncidentState,
) -> Result<f64> {
    transverse_shift(kin, &amps.channels_for(state))
}

/// Projection of a spin shift onto the matching helicity state, `S_x cos θ`.
pub fn if_helicity(s_x: f64, theta: f64) -> f64 {
    s_x * theta.cos()
}

/// `N = 2E / (E+m)`, the density of the normalized incident spinor.
pub(crate) fn density_normalization(energy: f64, mass: f64) -> f64 {
    2.0 * energy / (energy + mass)
}

/// Transverse shift from angular-momentum conservation,
/// `±N / (2 p_y) · [1 − (|r|² − |r′|²)]`, positive for `|↑⟩`.
///
/// Since `1 − (|r|² − |r′|²) = 2|r′|²` under total reflection, small `p_y`
/// uses `N p_y |r′/p_y|²`, which stays finite and vanishes at normal
/// incidence.
pub fn if_tam(amps: &ScatterAmplitudes, kin: &Kinematics, spin: Spin) -> Result<f64> {
    require_tunneling(kin)?;
    let n = density_normalization(kin.energy(), kin.mass());
    let magnitude = if kin.p_y > SMALL_TRANSVERSE * kin.p {
        n / (2.0 * kin.p_y) * (1.0 - amps.spin_imbalance())
    } else {
        n * kin.p_y * amps.r_flip_reduced.norm_sqr()
    };
    Ok(spin.sign() * magnitude)
}

/// Ratio `S_x / δS_x = (E+m)² / (2 V0 E)` between the current and
/// angular-momentum routes. It does not depend on the incidence angle.
pub fn cross_method_ratio(params: &StepParams) -> f64 {
    let StepParams {
        energy: e,
        mass: m,
        step: v0,
        ..
    } = *params;
    (e + m) * (e + m) / (2.0 * v0 * e)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IfReport {
    pub up: f64,
    pub down: f64,
    /// `cos θ` projection of the spin shift behind the polarization.
    pub helicity: f64,
    /// Shift for the requested polarization.
    pub polarized: f64,
    /// Angular-momentum shift for [`Polarization::spin`].
    pub tam: f64,
    pub polarization: Polarization,
}

pub fn if_report_from(
    amps: &ScatterAmplitudes,
    kin: &Kinematics,
    polarization: Polarization,
) -> Result<IfReport> {
    let up = if_current(amps, kin, Spin::Up)?;
    let down = if_current(amps, kin, Spin::Down)?;
    let antisymmetry = (up + down).abs();
    let tolerance = 1e-12 * up.abs().max(1.0);
    if antisymmetry > tolerance {
        return Err(ShiftError::IdentityViolation {
            residual: antisymmetry,
            tolerance,
        });
    }
    let spin_shift = match polarization.spin() {
        Spin::Up => up,
        Spin::Down => down,
    };
    let helicity = if_helicity(spin_shift, kin.theta());
    let polarized = if polarization.is_helicity() {
        helicity
    } else {
        spin_shift
    };
    Ok(IfReport {
        up,
        down,
        helicity,
        polarized,
        tam: if_tam(amps, kin, polarization.spin())?,
        polarization,
    })
}

pub fn if_report(params: &StepParams, polarization: Polarization) -> Result<IfReport> {
    let kin = derive_kinematics(params)?;
    require_tunneling(&kin)?;
    let amps = amplitudes_closed_form(&kin)?;
    if_report_from(&amps, &kin, polarization)
}
