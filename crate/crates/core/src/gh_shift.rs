//! Longitudinal Goos-Hänchen shift in the tunneling zone.
//!
//! Two flux contributions are normalized by the longitudinal current of the
//! reflected beam, `|j_z^r| = 2 p_z / (E+m)` (equal to the incident one under
//! total reflection):
//!
//! - the evanescent part, `∫₀^∞ j_y^t dz / |j_z^r|`;
//! - the interference part, the `λ_z`-averaged flux of the incident/reflected
//!   cross current over `|j_z^r|`.
//!
//! Their sum equals the stationary-phase shift `−∂ arg r / ∂p_y` taken at
//! fixed energy.

use serde::Serialize;

use crate::error::{Result, ShiftError};
use crate::kinematics::{derive_kinematics, Kinematics, StepParams, Zone};
use crate::scattering::{amplitudes_closed_form, ScatterAmplitudes};

/// Angular half-width around `θ_c` in which the shift is reported as
/// divergent.
pub const DIVERGENCE_WINDOW: f64 = 1e-3;

/// Relative tolerance of `S_e + S_ir = S_p`, scaled by `max(1, |S_p|)`.
pub const IDENTITY_TOLERANCE: f64 = 1e-8;

pub(crate) fn require_tunneling(kin: &Kinematics) -> Result<()> {
    match kin.zone {
        Zone::Tunneling if kin.kappa > 0.0 => Ok(()),
        Zone::Degenerate => Err(ShiftError::Degenerate),
        found => Err(ShiftError::WrongZone {
            required: "T",
            found,
        }),
    }
}

/// Shift carried by the evanescent current inside the step,
/// `(E+m) / (2 p_z (E−V0+m)) · [p_y (|t|² + |t′|²)/κ − 2 Re(t̄ t′)]`.
pub fn gh_evanescent(amps: &ScatterAmplitudes, kin: &Kinematics) -> Result<f64> {
    require_tunneling(kin)?;
    if kin.p_y == 0.0 {
        return Err(ShiftError::NormalIncidence);
    }
    let weight = amps.t.norm_sqr() + amps.t_flip.norm_sqr();
    let cross = (amps.t.conj() * amps.t_flip).re;
    let prefactor = kin.free_denominator() / (2.0 * kin.p_z * kin.step_denominator());
    Ok(prefactor * (kin.p_y * weight / kin.kappa - 2.0 * cross))
}

/// `λ_z`-averaged flux of the interference current integrated from `−l`
/// to the interface, `2/(E+m) · [Re r′ − (p_y/p_z) Im r]`.
pub fn averaged_interference_flux(amps: &ScatterAmplitudes, kin: &Kinematics) -> f64 {
    2.0 / kin.free_denominator() * (amps.r_flip.re - kin.p_y / kin.p_z * amps.r.im)
}

/// Shift from incident/reflected interference,
/// `−(p_y/p_z²) Im r + Re r′ / p_z`.
pub fn gh_interference(amps: &ScatterAmplitudes, kin: &Kinematics) -> Result<f64> {
    require_tunneling(kin)?;
    Ok(-kin.p_y / (kin.p_z * kin.p_z) * amps.r.im + amps.r_flip.re / kin.p_z)
}

/// Stationary-phase shift `−∂ arg r / ∂p_y` in closed form:
///
/// ```text
/// S_p = [ p_y p_z (p_z² − V0 E) / κ + κ (p_z p_y + V0 E tan θ) ] / [ (p_z² − V0 E)² + p_z² κ² ]
/// ```
///
/// The same value follows from `arg r′`, which differs from `arg r` by a
/// constant `π/2`.
pub fn gh_stationary_phase(kin: &Kinematics) -> Result<f64> {
    require_tunneling(kin)?;
    let (p_y, p_z, kappa) = (kin.p_y, kin.p_z, kin.kappa);
    let ve = kin.step() * kin.energy();
    let x = p_z * p_z - ve;
    let denominator = x * x + p_z * p_z * kappa * kappa;
    let tan = p_y / p_z;
    Ok((p_y * p_z * x / kappa + kappa * (p_z * p_y + ve * tan)) / denominator)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GhValidity {
    Valid,
    /// Within [`DIVERGENCE_WINDOW`] of the critical angle.
    Divergent,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GhReport {
    pub evanescent: f64,
    pub interference: f64,
    pub total: f64,
    pub stationary_phase: f64,
    pub validity: GhValidity,
}

impl GhReport {
    /// `|S_e + S_ir − S_p| / max(1, |S_p|)`.
    pub fn identity_residual(&self) -> f64 {
        (self.total - self.stationary_phase).abs() / self.stationary_phase.abs().max(1.0)
    }
}

pub fn gh_report_from(amps: &ScatterAmplitudes, kin: &Kinematics) -> Result<GhReport> {
    let evanescent = gh_evanescent(amps, kin)?;
    let interference = gh_interference(amps, kin)?;
    let stationary_phase = gh_stationary_phase(kin)?;
    let divergent = kin
        .critical_angle
        .is_some_and(|theta_c| (kin.theta() - theta_c).abs() < DIVERGENCE_WINDOW);
    let report = GhReport {
        evanescent,
        interference,
        total: evanescent + interference,
        stationary_phase,
        validity: if divergent {
            GhValidity::Divergent
        } else {
            GhValidity::Valid
        },
    };
    if report.validity == GhValidity::Valid && report.identity_residual() > IDENTITY_TOLERANCE {
        return Err(ShiftError::IdentityViolation {
            residual: report.identity_residual(),
            tolerance: IDENTITY_TOLERANCE,
        });
    }
    Ok(report)
}

/// All three GH routes at one incidence angle.
pub fn gh_report(params: &StepParams) -> Result<GhReport> {
    let kin = derive_kinematics(params)?;
    require_tunneling(&kin)?;
    let amps = amplitudes_closed_form(&kin)?;
    gh_report_from(&amps, &kin)
}
