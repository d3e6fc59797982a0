//! Spinor plane waves, scattering amplitudes and Dirac currents at the step.
//!
//! Amplitudes follow the un-normalized spinor columns of the free and step
//! regions, with `|↑⟩` incidence:
//!
//! ```text
//! ψ_in = (1, 0, p_z/(E+m), i p_y/(E+m)) e^{i p_z z}
//! ψ_r  = r  (1, 0, −p_z/(E+m), i p_y/(E+m)) e^{−i p_z z}
//!      + r′ (0, 1, −i p_y/(E+m), p_z/(E+m)) e^{−i p_z z}
//! ψ_t  = t  (1, 0, q_z/(E−V0+m), i q_y/(E−V0+m)) e^{i q_z z}
//!      + t′ (0, 1, −i q_y/(E−V0+m), −q_z/(E−V0+m)) e^{i q_z z}
//! ```

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dirac::{CurrentVector, Spinor};
use crate::error::{Result, ShiftError};
use crate::kinematics::{Kinematics, Zone};

/// Below this, `|p_z² + p_z q_z − V0 E|` relative to `|V0 E|` is treated
/// as a pole of the amplitudes.
pub const ANOMALY_THRESHOLD: f64 = 1e-12;

/// Smallest accepted `σ_min / σ_max` of the boundary-matching matrix.
pub const SINGULAR_RATIO: f64 = 1e-13;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Spin projection along `z` of a spinor basis state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub fn flipped(self) -> Spin {
        match self {
            Spin::Up => Spin::Down,
            Spin::Down => Spin::Up,
        }
    }

    /// `σ_z` eigenvalue, ±1.
    pub fn sign(self) -> f64 {
        match self {
            Spin::Up => 1.0,
            Spin::Down => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WaveRole {
    Incident(Spin),
    Reflected(Spin),
    Transmitted(Spin),
}

/// Basis spinor `(χ, σ·k χ / d)` for momentum `(0, q_y, k_z)`.
fn basis_spinor(spin: Spin, q_y: f64, k_z: Complex64, denominator: f64) -> Spinor {
    let d = Complex64::from(denominator);
    let q_y = Complex64::from(q_y);
    let (zero, one) = (Complex64::from(0.0), Complex64::from(1.0));
    match spin {
        Spin::Up => Spinor([one, zero, k_z / d, I * q_y / d]),
        Spin::Down => Spinor([zero, one, -I * q_y / d, -k_z / d]),
    }
}

/// One plane-wave component with unit amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpinorWave {
    pub components: Spinor,
    /// Longitudinal wavenumber; complex for evanescent waves.
    pub k_z: Complex64,
    pub role: WaveRole,
}

impl SpinorWave {
    pub fn new(kin: &Kinematics, role: WaveRole) -> Self {
        let free = kin.free_denominator();
        let (spin, k_z, denominator) = match role {
            WaveRole::Incident(spin) => (spin, Complex64::from(kin.p_z), free),
            WaveRole::Reflected(spin) => (spin, Complex64::from(-kin.p_z), free),
            WaveRole::Transmitted(spin) => (spin, kin.q_z, kin.step_denominator()),
        };
        Self {
            components: basis_spinor(spin, kin.q_y, k_z, denominator),
            k_z,
            role,
        }
    }

    pub fn at(&self, z: f64) -> Spinor {
        (I * self.k_z * z).exp() * self.components
    }
}

/// Closed-form amplitudes for `|↑⟩` incidence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatterAmplitudes {
    pub r: Complex64,
    /// Spin-flip reflection `r′`.
    pub r_flip: Complex64,
    pub t: Complex64,
    /// Spin-flip transmission `t′`, identical to `r′`.
    pub t_flip: Complex64,
    /// `r′ / p_y`, finite at normal incidence.
    pub r_flip_reduced: Complex64,
    /// Principal argument of `r`, in `(−π, π]`.
    pub phase_r: f64,
    /// Principal argument of `r′`.
    pub phase_r_flip: f64,
    /// Shared denominator `(E+m)(p_z² + p_z q_z − V0 E)`.
    pub denominator: Complex64,
}

/// Reflected and transmitted amplitudes per output spin channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelAmplitudes {
    pub reflected_up: Complex64,
    pub reflected_down: Complex64,
    pub transmitted_up: Complex64,
    pub transmitted_down: Complex64,
}

impl ChannelAmplitudes {
    pub fn reflected_weight(&self) -> f64 {
        self.reflected_up.norm_sqr() + self.reflected_down.norm_sqr()
    }

    pub fn transmitted_weight(&self) -> f64 {
        self.transmitted_up.norm_sqr() + self.transmitted_down.norm_sqr()
    }
}

/// Superposition `up |↑⟩ + down |↓⟩` of incident spin states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IncidentState {
    pub up: Complex64,
    pub down: Complex64,
}

impl IncidentState {
    pub fn pure(spin: Spin) -> Self {
        let (one, zero) = (Complex64::from(1.0), Complex64::from(0.0));
        match spin {
            Spin::Up => Self { up: one, down: zero },
            Spin::Down => Self { up: zero, down: one },
        }
    }

    pub fn weight(&self) -> f64 {
        self.up.norm_sqr() + self.down.norm_sqr()
    }
}

impl ScatterAmplitudes {
    /// Output channels for a pure incident spin. A `|↓⟩` incident wave is
    /// reflected into `|↓⟩` with `r` and flipped into `|↑⟩` with `r′`.
    pub fn channels(&self, spin: Spin) -> ChannelAmplitudes {
        match spin {
            Spin::Up => ChannelAmplitudes {
                reflected_up: self.r,
                reflected_down: self.r_flip,
                transmitted_up: self.t,
                transmitted_down: self.t_flip,
            },
            Spin::Down => ChannelAmplitudes {
                reflected_up: self.r_flip,
                reflected_down: self.r,
                transmitted_up: self.t_flip,
                transmitted_down: self.t,
            },
        }
    }

    pub fn channels_for(&self, state: &IncidentState) -> ChannelAmplitudes {
        let up = self.channels(Spin::Up);
        let down = self.channels(Spin::Down);
        ChannelAmplitudes {
            reflected_up: state.up * up.reflected_up + state.down * down.reflected_up,
            reflected_down: state.up * up.reflected_down + state.down * down.reflected_down,
            transmitted_up: state.up * up.transmitted_up + state.down * down.transmitted_up,
            transmitted_down: state.up * up.transmitted_down
                + state.down * down.transmitted_down,
        }
    }

    /// `|r|² − |r′|²`.
    pub fn spin_imbalance(&self) -> f64 {
        self.r.norm_sqr() - self.r_flip.norm_sqr()
    }
}

fn require_scattering_zone(kin: &Kinematics) -> Result<()> {
    match kin.zone {
        Zone::Diffusion | Zone::Tunneling => Ok(()),
        Zone::Degenerate => Err(ShiftError::Degenerate),
        Zone::Klein => Err(ShiftError::WrongZone {
            required: "D or T",
            found: kin.zone,
        }),
    }
}

fn check_step_denominator(kin: &Kinematics) -> Result<()> {
    let d = kin.step_denominator();
    if d.abs() <= ANOMALY_THRESHOLD * kin.energy() {
        return Err(ShiftError::Anomalous { magnitude: d.abs() });
    }
    Ok(())
}

/// Closed-form amplitudes `r`, `r′`, `t`, `t′` for `|↑⟩` incidence in the
/// diffusion or tunneling zone.
pub fn amplitudes_closed_form(kin: &Kinematics) -> Result<ScatterAmplitudes> {
    require_scattering_zone(kin)?;
    check_step_denominator(kin)?;
    let (e, m, v0) = (kin.energy(), kin.mass(), kin.step());
    let p_z = Complex64::from(kin.p_z);
    let shared = p_z * p_z + p_z * kin.q_z - v0 * e;
    if shared.norm() == 0.0 || shared.norm() < ANOMALY_THRESHOLD * (v0 * e).abs() {
        return Err(ShiftError::Anomalous {
            magnitude: shared.norm(),
        });
    }
    let denominator = (e + m) * shared;
    let r = (kin.p_y * kin.p_y + m * m + m * e) * v0 / denominator;
    let t = (p_z * p_z * kin.step_denominator() + p_z * kin.q_z * (e + m)) / denominator;
    let r_flip_reduced = I * kin.p_z * v0 / denominator;
    let r_flip = kin.p_y * r_flip_reduced;
    Ok(ScatterAmplitudes {
        r,
        r_flip,
        t,
        t_flip: r_flip,
        r_flip_reduced,
        phase_r: r.arg(),
        phase_r_flip: r_flip.arg(),
        denominator,
    })
}

/// Amplitudes from a direct numerical solve of the interface continuity
/// `ψ_in(0) + ψ_r(0) = ψ_t(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundarySolution {
    pub incident: Spin,
    /// Same-spin reflection, `r` for either incident spin.
    pub r_same: Complex64,
    pub r_flip: Complex64,
    pub t_same: Complex64,
    pub t_flip: Complex64,
    /// `max |ψ_in(0) + ψ_r(0) − ψ_t(0)|`.
    pub residual: f64,
}

impl BoundarySolution {
    /// Largest componentwise difference from the closed form.
    pub fn max_deviation(&self, amps: &ScatterAmplitudes) -> f64 {
        [
            self.r_same - amps.r,
            self.r_flip - amps.r_flip,
            self.t_same - amps.t,
            self.t_flip - amps.t_flip,
        ]
        .iter()
        .map(|d| d.norm())
        .fold(0.0, f64::max)
    }
}

/// Solves the four continuity equations at `z = 0` as a 4×4 complex linear
/// system in the reflected and transmitted amplitudes.
pub fn boundary_match_oracle(kin: &Kinematics, incident: Spin) -> Result<BoundarySolution> {
    require_scattering_zone(kin)?;
    check_step_denominator(kin)?;
    let column = |role| SpinorWave::new(kin, role).components.to_vector();
    let reflected = [
        column(WaveRole::Reflected(Spin::Up)),
        column(WaveRole::Reflected(Spin::Down)),
    ];
    let transmitted = [
        column(WaveRole::Transmitted(Spin::Up)),
        column(WaveRole::Transmitted(Spin::Down)),
    ];
    let system = Matrix4::from_columns(&[
        reflected[0],
        reflected[1],
        -transmitted[0],
        -transmitted[1],
    ]);
    let psi_in = column(WaveRole::Incident(incident));

    let singular = system.singular_values();
    let ratio = singular.min() / singular.max();
    if !(ratio > SINGULAR_RATIO) {
        return Err(ShiftError::SingularSystem { ratio });
    }
    let x: Vector4<Complex64> = system
        .lu()
        .solve(&(-psi_in))
        .ok_or(ShiftError::SingularSystem { ratio })?;

    let lhs = psi_in + reflected[0] * x[0] + reflected[1] * x[1];
    let rhs = transmitted[0] * x[2] + transmitted[1] * x[3];
    let residual = (lhs - rhs).iter().map(|c| c.norm()).fold(0.0, f64::max);

    let (same, flip) = match incident {
        Spin::Up => (0, 1),
        Spin::Down => (1, 0),
    };
    Ok(BoundarySolution {
        incident,
        r_same: x[same],
        r_flip: x[flip],
        t_same: x[2 + same],
        t_flip: x[2 + flip],
        residual,
    })
}

/// Which part of the field a current is evaluated for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WaveCombination {
    Incident,
    Reflected,
    Transmitted,
    /// Cross term between incident and reflected waves.
    Interference,
}

/// Incident, reflected and transmitted fields for one incident state.
#[derive(Debug, Clone, Copy)]
pub struct ScatteringState {
    pub incident: IncidentState,
    pub channels: ChannelAmplitudes,
    waves: [SpinorWave; 6],
}

impl ScatteringState {
    pub fn new(kin: &Kinematics, amps: &ScatterAmplitudes, incident: IncidentState) -> Self {
        let wave = |role| SpinorWave::new(kin, role);
        Self {
            incident,
            channels: amps.channels_for(&incident),
            waves: [
                wave(WaveRole::Incident(Spin::Up)),
                wave(WaveRole::Incident(Spin::Down)),
                wave(WaveRole::Reflected(Spin::Up)),
                wave(WaveRole::Reflected(Spin::Down)),
                wave(WaveRole::Transmitted(Spin::Up)),
                wave(WaveRole::Transmitted(Spin::Down)),
            ],
        }
    }

    pub fn incident_at(&self, z: f64) -> Spinor {
        self.incident.up * self.waves[0].at(z) + self.incident.down * self.waves[1].at(z)
    }

    pub fn reflected_at(&self, z: f64) -> Spinor {
        self.channels.reflected_up * self.waves[2].at(z)
            + self.channels.reflected_down * self.waves[3].at(z)
    }

    pub fn transmitted_at(&self, z: f64) -> Spinor {
        self.channels.transmitted_up * self.waves[4].at(z)
            + self.channels.transmitted_down * self.waves[5].at(z)
    }

    /// Dirac current `ψ†αψ` of the chosen combination at `z`. The
    /// interference current is `Re[ψ_in†αψ_r + ψ_r†αψ_in]`.
    pub fn current(&self, combination: WaveCombination, z: f64) -> CurrentVector {
        match combination {
            WaveCombination::Incident => self.incident_at(z).current(),
            WaveCombination::Reflected => self.reflected_at(z).current(),
            WaveCombination::Transmitted => self.transmitted_at(z).current(),
            WaveCombination::Interference => {
                self.incident_at(z).cross_current(&self.reflected_at(z))
            }
        }
    }
}

/// Dirac current for `|↑⟩` incidence.
pub fn current(
    kin: &Kinematics,
    amps: &ScatterAmplitudes,
    combination: WaveCombination,
    z: f64,
) -> CurrentVector {
    ScatteringState::new(kin, amps, IncidentState::pure(Spin::Up)).current(combination, z)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConservationIdentity {
    /// `|r|² + |r′|² = 1` in the tunneling zone.
    Unitarity,
    /// Flux balance with the propagating transmitted wave in the diffusion zone.
    FluxBalance,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConservationReport {
    pub identity: ConservationIdentity,
    pub residual: f64,
}

/// Residual of longitudinal current conservation.
pub fn conservation_check(amps: &ScatterAmplitudes, kin: &Kinematics) -> Result<ConservationReport> {
    require_scattering_zone(kin)?;
    let reflected = amps.r.norm_sqr() + amps.r_flip.norm_sqr();
    let report = match kin.zone {
        Zone::Tunneling => ConservationReport {
            identity: ConservationIdentity::Unitarity,
            residual: reflected - 1.0,
        },
        _ => {
            let weight =
                kin.q_z.re * kin.free_denominator() / (kin.p_z * kin.step_denominator());
            let transmitted = amps.t.norm_sqr() + amps.t_flip.norm_sqr();
            ConservationReport {
                identity: ConservationIdentity::FluxBalance,
                residual: reflected + weight * transmitted - 1.0,
            }
        }
    };
    Ok(report)
}
