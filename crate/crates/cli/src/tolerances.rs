//! Validation thresholds. Each one can be overridden from the command line
//! with `--tolerance KEY=VALUE`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::config::ConfigError;

/// `critical_angle(8.5, 1, 5)` against the quoted 0.408638 rad, which is
/// given to six decimals.
pub const CRITICAL_ANGLE_QUOTED: f64 = 1e-6;

/// `critical_angle = π/2` where the tunneling zone covers every angle.
pub const CRITICAL_ANGLE_GRAZING: f64 = 1e-12;

/// Closed-form amplitudes against the 4×4 boundary solve. Both are
/// evaluated in f64; the observed agreement is around 1e-14.
pub const ORACLE_AGREEMENT: f64 = 1e-12;

/// `|r|² + |r′|² = 1` in the tunneling zone.
pub const UNITARITY: f64 = 1e-10;

/// Reflected plus transmitted flux in the diffusion zone.
pub const FLUX_BALANCE: f64 = 1e-10;

/// Relative residual of `S_e + S_ir = S_p`.
pub const GH_IDENTITY: f64 = 1e-8;

/// Closed-form `S_p` against the Richardson-extrapolated central difference
/// of `arg r`. The difference error is `O(h⁴)` with `h ≤ 1e-6 p`.
pub const SPM_DERIVATIVE: f64 = 1e-6;

/// `|S_x(↑) + S_x(↓)|`, absolute below 1 and relative above.
pub const IF_ANTISYMMETRY: f64 = 1e-12;

/// Relative agreement of the current and angular-momentum transverse
/// shifts required for the routes to count as identical.
pub const IF_CROSS_METHOD: f64 = 1e-6;

/// Relative spread of `S_x / δS_x` around `(E+m)² / (2 V0 E)` that still
/// counts as the documented deviation profile.
pub const IF_PROFILE: f64 = 1e-9;

/// `max |U U† − 1|` for the FW transformation.
pub const FW_UNITARITY: f64 = 1e-12;

/// `|⟨Σ_z⟩ − 1/2|` at `E/m = 1.001`.
pub const FW_NONRELATIVISTIC: f64 = 1e-3;

/// `|J_z^in − J_z^r|` after inserting the angular-momentum shift.
pub const TAM_CLOSURE: f64 = 1e-14;

/// Relative gap of the Gaussian-beam centroid shift at `w p = 100`.
pub const BEAM_GAP: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tolerances {
    values: BTreeMap<&'static str, f64>,
}

const KEYS: [(&str, f64); 14] = [
    ("critical_angle", CRITICAL_ANGLE_QUOTED),
    ("critical_angle_grazing", CRITICAL_ANGLE_GRAZING),
    ("oracle", ORACLE_AGREEMENT),
    ("unitarity", UNITARITY),
    ("flux", FLUX_BALANCE),
    ("gh_identity", GH_IDENTITY),
    ("spm", SPM_DERIVATIVE),
    ("if_antisymmetry", IF_ANTISYMMETRY),
    ("if_cross", IF_CROSS_METHOD),
    ("if_profile", IF_PROFILE),
    ("fw_unitarity", FW_UNITARITY),
    ("fw_nonrelativistic", FW_NONRELATIVISTIC),
    ("tam_closure", TAM_CLOSURE),
    ("beam_gap", BEAM_GAP),
];

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            values: KEYS.into_iter().collect(),
        }
    }
}

impl Tolerances {
    pub fn keys() -> impl Iterator<Item = &'static str> {
        KEYS.iter().map(|(k, _)| *k)
    }

    pub fn get(&self, key: &str) -> f64 {
        self.values[key]
    }

    pub fn set(&mut self, key: &str, value: f64) -> Result<(), ConfigError> {
        let Some((name, _)) = KEYS.iter().find(|(k, _)| *k == key) else {
            return Err(ConfigError::Tolerance {
                key: key.to_string(),
                reason: format!("unknown key; expected one of {}", Self::keys().collect::<Vec<_>>().join(", ")),
            });
        };
        if !(value.is_finite() && value > 0.0) {
            return Err(ConfigError::Tolerance {
                key: key.to_string(),
                reason: format!("must be positive and finite, got {value}"),
            });
        }
        self.values.insert(name, value);
        Ok(())
    }
}
