//! Finite-width beam reconstruction and a finite-difference phase
//! derivative, both independent of the closed-form shift expressions.
//!
//! A Gaussian beam is a superposition of `|↑⟩` plane waves at fixed energy,
//! `A(k) ∝ exp(−(k − k0)² w² / 2)` in the transverse momentum `k`. Each mode
//! is reflected with its own closed-form amplitudes, and the shift is the
//! difference of the reflected and incident density centroids along the
//! interface. It approaches the stationary-phase value as `1/(w p)²`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, ShiftError};
use crate::gh_shift::gh_stationary_phase;
use crate::kinematics::{derive_kinematics, Kinematics, StepParams, Zone};
use crate::scattering::{amplitudes_closed_form, ScatterAmplitudes, Spin};

pub const MIN_WAIST_MOMENTUM: f64 = 50.0;
pub const MIN_MODES: usize = 256;
pub const MIN_SPAN: f64 = 4.0;

pub const DEFAULT_MODES: usize = 512;
pub const DEFAULT_SPAN: f64 = 6.0;

/// Number of samples of the transverse coordinate.
const Y_SAMPLES: usize = 2048;
/// Half-width of the sampled transverse range, in waists.
const Y_EXTENT: f64 = 8.0;
/// Half-width of the centroid window around the density peak, in waists.
const CENTROID_WINDOW: f64 = 6.0;
/// Smallest accepted `(θ0 − θ_c) · w p`.
const CRITICAL_CLEARANCE: f64 = 3.0;

/// Largest relative disagreement tolerated between the two step levels of
/// the Richardson extrapolation.
pub const RICHARDSON_GAP: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BeamSpec {
    /// Central incidence angle.
    pub theta0: f64,
    /// Beam waist, in units of `1/m`.
    pub waist: f64,
    pub n_modes: usize,
    /// Half-width of the sampled spectrum, in units of `1/w`.
    pub span: f64,
}

impl BeamSpec {
    pub fn new(theta0: f64, waist: f64) -> Self {
        Self {
            theta0,
            waist,
            n_modes: DEFAULT_MODES,
            span: DEFAULT_SPAN,
        }
    }

    /// Beam whose waist is `waist_momentum / p`.
    pub fn with_waist_momentum(theta0: f64, waist_momentum: f64, params: &StepParams) -> Self {
        Self::new(theta0, waist_momentum / params.momentum())
    }

    pub fn validate(&self, params: &StepParams) -> Result<()> {
        let wp = self.waist * params.momentum();
        if !self.theta0.is_finite() || !self.waist.is_finite() {
            return Err(ShiftError::InvalidBeam("non-finite angle or waist".into()));
        }
        if wp < MIN_WAIST_MOMENTUM {
            return Err(ShiftError::InvalidBeam(format!(
                "w·p = {wp} is below {MIN_WAIST_MOMENTUM}"
            )));
        }
        if self.n_modes < MIN_MODES {
            return Err(ShiftError::InvalidBeam(format!(
                "{} modes, need at least {MIN_MODES}",
                self.n_modes
            )));
        }
        if !(self.span >= MIN_SPAN) {
            return Err(ShiftError::InvalidBeam(format!(
                "span {} is below {MIN_SPAN}",
                self.span
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CentroidResult {
    pub y_centroid_in: f64,
    pub y_centroid_r: f64,
    pub gh_numeric: f64,
    pub spm_reference: f64,
    pub relative_gap: f64,
    /// Trapezoidal `∫|A|² dk` of the normalized spectrum.
    pub spectrum_norm: f64,
    /// Largest `| |r|² + |r′|² − 1 |` over the modes.
    pub max_mode_unitarity: f64,
}

struct Mode {
    k: f64,
    weight: Complex64,
    kin: Kinematics,
    amps: ScatterAmplitudes,
}

fn trapezoid_weights(n: usize, step: f64) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| if i == 0 || i == n - 1 { 0.5 * step } else { step })
}

fn modes(spec: &BeamSpec, params: &StepParams) -> Result<Vec<Mode>> {
    let p = params.momentum();
    let k0 = p * spec.theta0.sin();
    let half = spec.span / spec.waist;
    let dk = 2.0 * half / (spec.n_modes - 1) as f64;

    let mut out = Vec::with_capacity(spec.n_modes);
    let mut norm = 0.0;
    for (i, quad) in trapezoid_weights(spec.n_modes, dk).enumerate() {
        let k = k0 - half + i as f64 * dk;
        if !(0.0..p).contains(&k) {
            return Err(ShiftError::SpectrumOverlap);
        }
        let kin = Kinematics::at_transverse_momentum(params, k)?;
        if kin.zone != Zone::Tunneling {
            return Err(ShiftError::SpectrumOverlap);
        }
        let amps = amplitudes_closed_form(&kin)?;
        let envelope = (-0.5 * ((k - k0) * spec.waist).powi(2)).exp();
        norm += quad * envelope * envelope;
        out.push(Mode {
            k,
            weight: Complex64::from(quad * envelope),
            kin,
            amps,
        });
    }
    if !(norm.is_finite() && norm > 0.0) {
        return Err(ShiftError::InvalidBeam("spectrum is not normalizable".into()));
    }
    let scale = norm.sqrt().recip();
    for mode in &mut out {
        mode.weight *= scale;
    }
    Ok(out)
}

/// Centroid of the normalized density over `|y − y_peak| ≤ 6w`.
fn centroid(ys: &[f64], density: &[f64], dy: f64, waist: f64) -> f64 {
    let peak = density
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map_or(0, |(i, _)| i);
    let half = CENTROID_WINDOW * waist;
    let inside: Vec<usize> = (0..ys.len())
        .filter(|&i| (ys[i] - ys[peak]).abs() <= half)
        .collect();
    let weights: Vec<f64> = trapezoid_weights(inside.len(), dy).collect();
    let mass: f64 = inside.iter().zip(&weights).map(|(&i, w)| density[i] * w).sum();
    let moment: f64 = inside
        .iter()
        .zip(&weights)
        .map(|(&i, w)| ys[i] * density[i] * w)
        .sum();
    moment / mass
}

/// Synthesizes a `|↑⟩` Gaussian beam at the interface and measures the
/// longitudinal displacement of the reflected centroid.
pub fn synthesize_and_measure(spec: &BeamSpec, params: &StepParams) -> Result<CentroidResult> {
    spec.validate(params)?;
    if let Some(theta_c) = crate::kinematics::critical_angle(params) {
        if (spec.theta0 - theta_c) * spec.waist * params.momentum() <= CRITICAL_CLEARANCE {
            return Err(ShiftError::SpectrumOverlap);
        }
    }
    let central = params.with_theta(spec.theta0)?;
    let central_kin = derive_kinematics(&central)?;
    let spm_reference = gh_stationary_phase(&central_kin)?;
    let modes = modes(spec, params)?;
    let k0 = params.momentum() * spec.theta0.sin();

    let y_max = Y_EXTENT * spec.waist;
    let dy = 2.0 * y_max / (Y_SAMPLES - 1) as f64;
    let ys: Vec<f64> = (0..Y_SAMPLES).map(|i| -y_max + i as f64 * dy).collect();

    // Spinor components at z = 0 per mode, for the incident and reflected
    // waves. The common carrier e^{i k0 y} drops out of the density.
    let components: Vec<([Complex64; 4], [Complex64; 4])> = modes
        .iter()
        .map(|mode| {
            let d = mode.kin.free_denominator();
            let (p_z, k) = (mode.kin.p_z, mode.k);
            let i = Complex64::i();
            let incident = [
                Complex64::from(1.0),
                Complex64::from(0.0),
                Complex64::from(p_z / d),
                i * k / d,
            ];
            let (r, rf) = (mode.amps.r, mode.amps.r_flip);
            let reflected = [r, rf, -r * p_z / d - rf * i * k / d, r * i * k / d + rf * p_z / d];
            (incident, reflected)
        })
        .collect();

    let mut density_in = Vec::with_capacity(Y_SAMPLES);
    let mut density_r = Vec::with_capacity(Y_SAMPLES);
    for &y in &ys {
        let mut field_in = [Complex64::from(0.0); 4];
        let mut field_r = [Complex64::from(0.0); 4];
        for (mode, (inc, refl)) in modes.iter().zip(&components) {
            let phase = mode.weight * Complex64::cis((mode.k - k0) * y);
            for c in 0..4 {
                field_in[c] += phase * inc[c];
                field_r[c] += phase * refl[c];
            }
        }
        density_in.push(field_in.iter().map(|c| c.norm_sqr()).sum());
        density_r.push(field_r.iter().map(|c| c.norm_sqr()).sum());
    }

    let y_centroid_in = centroid(&ys, &density_in, dy, spec.waist);
    let y_centroid_r = centroid(&ys, &density_r, dy, spec.waist);
    let dk = 2.0 * spec.span / spec.waist / (spec.n_modes - 1) as f64;
    let spectrum_norm = modes
        .iter()
        .zip(trapezoid_weights(modes.len(), dk))
        .map(|(m, quad)| m.weight.norm_sqr() / quad)
        .sum();
    let gh_numeric = y_centroid_r - y_centroid_in;
    let max_mode_unitarity = modes
        .iter()
        .map(|m| (m.amps.r.norm_sqr() + m.amps.r_flip.norm_sqr() - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(CentroidResult {
        y_centroid_in,
        y_centroid_r,
        gh_numeric,
        spm_reference,
        relative_gap: (gh_numeric - spm_reference).abs() / spm_reference.abs(),
        spectrum_norm,
        max_mode_unitarity,
    })
}

/// `−∂ arg a / ∂p_y` at fixed energy by central differences, where `a` is
/// `r` for [`Spin::Up`] and `r′` for [`Spin::Down`].
///
/// The step is `min(1e-6 p, 1e-3 d)` with `d` the distance to the nearest
/// end of the tunneling interval in `p_y` (and to `p_y = 0` for `r′`, whose
/// phase jumps there). Two levels `h` and `h/2` are combined by Richardson
/// extrapolation.
pub fn phase_derivative_oracle(params: &StepParams, channel: Spin) -> Result<f64> {
    let kin = derive_kinematics(params)?;
    if kin.zone != Zone::Tunneling {
        return Err(ShiftError::WrongZone {
            required: "T",
            found: kin.zone,
        });
    }
    let p_y = kin.p_y;
    let mut distance = kin.p - p_y;
    if let Some(p_c) = kin.critical_transverse_momentum() {
        distance = distance.min(p_y - p_c);
    }
    if channel == Spin::Down {
        distance = distance.min(p_y);
    }
    let h = (1e-6 * kin.p).min(1e-3 * distance);
    if !(h > 0.0) {
        return Err(ShiftError::StepSizeFailure { gap: f64::INFINITY });
    }

    let amplitude = |k: f64| -> Result<Complex64> {
        let kin = Kinematics::at_transverse_momentum(params, k)?;
        let amps = amplitudes_closed_form(&kin)?;
        Ok(match channel {
            Spin::Up => amps.r,
            Spin::Down => amps.r_flip,
        })
    };
    let difference = |h: f64| -> Result<f64> {
        let ratio = amplitude(p_y + h)? * amplitude(p_y - h)?.conj();
        Ok(-ratio.arg() / (2.0 * h))
    };

    let coarse = difference(h)?;
    let fine = difference(0.5 * h)?;
    let extrapolated = (4.0 * fine - coarse) / 3.0;
    let gap = (extrapolated - fine).abs() / extrapolated.abs().max(f64::MIN_POSITIVE);
    if gap > RICHARDSON_GAP {
        return Err(ShiftError::StepSizeFailure { gap });
    }
    Ok(extrapolated)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> StepParams {
        StepParams::new(8.5, 1.0, 5.0, 0.7).unwrap()
    }

    #[test]
    fn rejects_narrow_beams_and_coarse_grids() {
        let p = params();
        let narrow = BeamSpec::with_waist_momentum(0.7, 20.0, &p);
        assert!(matches!(synthesize_and_measure(&narrow, &p), Err(ShiftError::InvalidBeam(_))));
        let mut coarse = BeamSpec::with_waist_momentum(0.7, 100.0, &p);
        coarse.n_modes = 64;
        assert!(matches!(synthesize_and_measure(&coarse, &p), Err(ShiftError::InvalidBeam(_))));
    }

    #[test]
    fn rejects_spectrum_across_critical_angle() {
        let p = params();
        let theta_c = crate::kinematics::critical_angle(&p).unwrap();
        let spec = BeamSpec::with_waist_momentum(theta_c + 0.02, 100.0, &p);
        assert_eq!(synthesize_and_measure(&spec, &p), Err(ShiftError::SpectrumOverlap));
        // Clear by the angular criterion, but the sampled spectrum still
        // reaches below the critical transverse momentum.
        let mut wide = BeamSpec::with_waist_momentum(theta_c + 0.04, 100.0, &p);
        wide.span = 12.0;
        assert_eq!(synthesize_and_measure(&wide, &p), Err(ShiftError::SpectrumOverlap));
    }

    #[test]
    fn centroid_shift_matches_stationary_phase() {
        let p = params();
        let spec = BeamSpec::with_waist_momentum(0.7, 100.0, &p);
        let result = synthesize_and_measure(&spec, &p).unwrap();
        assert!(result.relative_gap < 1e-3, "{result:?}");
        assert!(result.y_centroid_in.abs() < 1e-10);
        assert!(result.max_mode_unitarity < 1e-13);
        assert!((result.spectrum_norm - 1.0).abs() < 1e-10);
    }

    #[test]
    fn finite_difference_agrees_with_closed_form() {
        let p = params();
        let kin = derive_kinematics(&p).unwrap();
        let exact = gh_stationary_phase(&kin).unwrap();
        for channel in [Spin::Up, Spin::Down] {
            let fd = phase_derivative_oracle(&p, channel).unwrap();
            assert!((fd - exact).abs() < 1e-6 * exact.abs(), "{channel:?}: {fd} vs {exact}");
        }
    }

    #[test]
    fn finite_difference_needs_tunneling() {
        let p = StepParams::new(8.5, 1.0, 5.0, 0.2).unwrap();
        assert!(matches!(
            phase_derivative_oracle(&p, Spin::Up),
            Err(ShiftError::WrongZone { .. })
        ));
    }
}
