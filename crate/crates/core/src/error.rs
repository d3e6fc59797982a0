use thiserror::Error;

use crate::kinematics::Zone;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ShiftError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParams { name: &'static str, reason: String },

    #[error("no propagating incident wave: E = {energy} does not exceed m = {mass}")]
    NotPropagating { energy: f64, mass: f64 },

    #[error("degenerate kinematics: E lies on a zone boundary E = V0 ± m*")]
    Degenerate,

    #[error("operation requires zone {required}, got {found}")]
    WrongZone { required: &'static str, found: Zone },

    #[error("scattering denominator vanishes (|d| = {magnitude:e}); resonance anomaly")]
    Anomalous { magnitude: f64 },

    #[error("boundary-matching system is numerically singular (σ_min/σ_max = {ratio:e})")]
    SingularSystem { ratio: f64 },

    #[error("no transverse momentum (p_y = 0): lateral shift undefined")]
    NormalIncidence,

    #[error("shift identity violated: relative residual {residual:e} exceeds {tolerance:e}")]
    IdentityViolation { residual: f64, tolerance: f64 },

    #[error("finite-difference levels disagree (relative gap {gap:e})")]
    StepSizeFailure { gap: f64 },

    #[error("beam spectrum overlaps the critical angle or leaves the tunneling zone")]
    SpectrumOverlap,

    #[error("invalid beam: {0}")]
    InvalidBeam(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

pub type Result<T> = std::result::Result<T, ShiftError>;
