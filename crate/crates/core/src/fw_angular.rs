//! Foldy-Wouthuysen transformation of the free spinors and the `J_z` budget
//! of incident and reflected beams.
//!
//! In the FW frame the Dirac position operator picks up a spin-orbit part,
//! so the orbital angular momentum of a beam with transverse momentum `p_y`
//! carries a term `(N/2) Δ` with `Δ = (1 − m/E) sin²θ`, and the spin part is
//! reduced by the same amount. A transverse centroid offset `x0` adds
//! `x0 p_y` to `L_z`.

use num_complex::Complex64;
use serde::Serialize;

use crate::dirac::{alpha_y, alpha_z, beta, hamiltonian, sigma_z, Matrix, Spinor};
use crate::error::{Result, ShiftError};
use crate::gh_shift::require_tunneling;
use crate::if_shift::density_normalization;
use crate::kinematics::{derive_kinematics, Kinematics, StepParams};
use crate::scattering::{ScatterAmplitudes, SpinorWave, Spin, WaveRole};

/// `N = 2E / (E+m)`.
pub fn normalization(params: &StepParams) -> f64 {
    density_normalization(params.energy, params.mass)
}

/// Rotation angle `arctan(p/m)` of the FW transformation.
pub fn fw_angle(params: &StepParams) -> f64 {
    params.momentum().atan2(params.mass)
}

/// `Δ = (1 − m/E) sin²θ`.
pub fn spin_orbit_parameter(params: &StepParams) -> f64 {
    (1.0 - params.mass / params.energy) * params.theta.sin().powi(2)
}

/// `⟨Σ_z⟩ = (N/2)(1 − Δ)` for the un-normalized `|↑⟩` incident spinor.
pub fn spin_expectation_incident(params: &StepParams) -> Result<f64> {
    params.validate()?;
    Ok(normalization(params) / 2.0 * (1.0 - spin_orbit_parameter(params)))
}

/// `U = cos(α/2) + β (α·p̂) sin(α/2)` with `α = arctan(p/m)`.
///
/// `U H U† = β E` for the free Hamiltonian with momentum `(0, p_y, p_z)`.
pub fn fw_transform(p_y: f64, p_z: f64, mass: f64) -> Matrix {
    let p = p_y.hypot(p_z);
    let half = 0.5 * p.atan2(mass);
    let identity = Matrix::identity() * Complex64::from(half.cos());
    if p == 0.0 {
        return identity;
    }
    let direction = alpha_y() * Complex64::from(p_y / p) + alpha_z() * Complex64::from(p_z / p);
    identity + beta() * direction * Complex64::from(half.sin())
}

fn apply(op: &Matrix, psi: &Spinor) -> Spinor {
    Spinor::from_vector(&(op * psi.to_vector()))
}

fn max_abs(m: &Matrix) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Residuals of the FW transformation on the `|↑⟩` incident spinor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FwCheck {
    /// `|N − sec²(α/2)|`.
    pub normalization: f64,
    /// `max |U U† − 1|`.
    pub unitarity: f64,
    /// `max |U H U† − β E|`.
    pub diagonalization: f64,
    /// `max |U ψ − (√N, 0, 0, 0)|`.
    pub spinor: f64,
    pub spin_direct: f64,
    /// `⟨Uψ| U Σ_z U† |Uψ⟩`.
    pub spin_conjugated: f64,
    pub spin_closed_form: f64,
    /// `⟨Uψ| p_y² Σ_z / (E(E+m)) |Uψ⟩`, the spin-orbit part of `L_z`.
    pub spin_orbit_fw: f64,
    /// `(N/2) Δ`.
    pub spin_orbit_closed_form: f64,
}

impl FwCheck {
    pub fn max_residual(&self) -> f64 {
        [
            self.normalization,
            self.unitarity,
            self.diagonalization,
            self.spinor,
            (self.spin_direct - self.spin_conjugated).abs(),
            (self.spin_direct - self.spin_closed_form).abs(),
            (self.spin_orbit_fw - self.spin_orbit_closed_form).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn fw_transform_check(params: &StepParams) -> Result<FwCheck> {
    let kin = derive_kinematics(params)?;
    let (e, m) = (kin.energy(), kin.mass());
    let u = fw_transform(kin.p_y, kin.p_z, m);
    let u_dag = u.adjoint();
    let psi = SpinorWave::new(&kin, WaveRole::Incident(Spin::Up)).components;
    let fw_psi = apply(&u, &psi);
    let n = normalization(params);

    let mut expected = Spinor::ZERO;
    expected.0[0] = Complex64::from(n.sqrt());

    let spin = sigma_z();
    let spin_orbit = spin * Complex64::from(kin.p_y * kin.p_y / (e * (e + m)));
    let secant = (0.5 * fw_angle(params)).cos().powi(-2);
    Ok(FwCheck {
        normalization: (n - secant).abs(),
        unitarity: max_abs(&(u * u_dag - Matrix::identity())),
        diagonalization: max_abs(&(u * hamiltonian(kin.p_y, kin.p_z, m) * u_dag - beta() * Complex64::from(e))),
        spinor: fw_psi.max_abs_diff(&expected),
        spin_direct: psi.expectation(&spin),
        spin_conjugated: fw_psi.expectation(&(u * spin * u_dag)),
        spin_closed_form: spin_expectation_incident(params)?,
        spin_orbit_fw: fw_psi.expectation(&spin_orbit),
        spin_orbit_closed_form: n / 2.0 * spin_orbit_parameter(params),
    })
}

/// `J_z = L_z + Σ_z` for the incident and reflected beams of a `|↑⟩`
/// incident wave under total reflection. The incident centroid sits at
/// `x = 0`; the reflected offset is fixed by `J_z` conservation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngularBudget {
    pub normalization: f64,
    pub spin_orbit: f64,
    pub spin_in: f64,
    pub orbital_in: f64,
    pub total_in: f64,
    pub spin_r: f64,
    pub orbital_r: f64,
    pub total_r: f64,
    pub x0_in: f64,
    pub x0_r: f64,
}

impl AngularBudget {
    /// Transverse displacement of the reflected centroid, `x0_r − x0_in`.
    pub fn shift(&self) -> f64 {
        self.x0_r - self.x0_in
    }

    /// `J_z^in − J_z^r`.
    pub fn closure(&self) -> f64 {
        self.total_in - self.total_r
    }
}

pub fn tam_budget(amps: &ScatterAmplitudes, kin: &Kinematics) -> Result<AngularBudget> {
    require_tunneling(kin)?;
    if kin.p_y == 0.0 {
        return Err(ShiftError::NormalIncidence);
    }
    let n = normalization(&kin.params);
    let delta = spin_orbit_parameter(&kin.params);
    let imbalance = amps.spin_imbalance();
    let x0_in = 0.0;

    let spin_in = n / 2.0 * (1.0 - delta);
    let orbital_in = n / 2.0 * delta + x0_in * kin.p_y;
    let total_in = spin_in + orbital_in;

    let spin_r = n / 2.0 * (1.0 - delta) * imbalance;
    let spin_orbit_r = n / 2.0 * delta * imbalance;
    let x0_r = (total_in - spin_r - spin_orbit_r) / kin.p_y;
    let orbital_r = spin_orbit_r + x0_r * kin.p_y;

    Ok(AngularBudget {
        normalization: n,
        spin_orbit: delta,
        spin_in,
        orbital_in,
        total_in,
        spin_r,
        orbital_r,
        total_r: spin_r + orbital_r,
        x0_in,
        x0_r,
    })
}
