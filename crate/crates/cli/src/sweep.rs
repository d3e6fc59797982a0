//! Per-angle rows of amplitudes and shifts, and the tables built from them.

use dirac_step::beam_oracle::{synthesize_and_measure, BeamSpec, CentroidResult};
use dirac_step::gh_shift::{gh_evanescent, gh_interference, gh_stationary_phase, DIVERGENCE_WINDOW};
use dirac_step::if_shift::{if_report_from, Polarization};
use dirac_step::kinematics::{boundary_energies, zone_map};
use dirac_step::{amplitudes_closed_form, derive_kinematics, ShiftError, StepParams, Zone};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::SweepConfig;
use crate::output::{cell, Table};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub theta_rad: f64,
    pub zone: String,
    pub r_re: f64,
    pub r_im: f64,
    pub rp_re: f64,
    pub rp_im: f64,
    pub t_re: f64,
    pub t_im: f64,
    pub tp_re: f64,
    pub tp_im: f64,
    pub phi_r: f64,
    pub phi_rp: f64,
    #[serde(rename = "Sy_e")]
    pub sy_e: f64,
    #[serde(rename = "Sy_ir")]
    pub sy_ir: f64,
    #[serde(rename = "Sy_total")]
    pub sy_total: f64,
    #[serde(rename = "Sy_spm")]
    pub sy_spm: f64,
    #[serde(rename = "Sx_up")]
    pub sx_up: f64,
    #[serde(rename = "Sx_down")]
    pub sx_down: f64,
    #[serde(rename = "Sx_helicity")]
    pub sx_helicity: f64,
    #[serde(rename = "dSx_tam")]
    pub dsx_tam: f64,
    /// `|`-separated markers explaining missing or special values.
    pub flags: String,
}

pub const SWEEP_COLUMNS: [&str; 21] = [
    "theta_rad", "zone", "r_re", "r_im", "rp_re", "rp_im", "t_re", "t_im", "tp_re", "tp_im",
    "phi_r", "phi_rp", "Sy_e", "Sy_ir", "Sy_total", "Sy_spm", "Sx_up", "Sx_down", "Sx_helicity",
    "dSx_tam", "flags",
];

impl Table for SweepRow {
    fn columns() -> &'static [&'static str] {
        &SWEEP_COLUMNS
    }

    fn cells(&self) -> Vec<String> {
        let mut out = vec![cell(self.theta_rad), self.zone.clone()];
        out.extend(
            [
                self.r_re, self.r_im, self.rp_re, self.rp_im, self.t_re, self.t_im, self.tp_re,
                self.tp_im, self.phi_r, self.phi_rp, self.sy_e, self.sy_ir, self.sy_total,
                self.sy_spm, self.sx_up, self.sx_down, self.sx_helicity, self.dsx_tam,
            ]
            .map(cell),
        );
        out.push(self.flags.clone());
        out
    }
}

fn flag_for(err: &ShiftError) -> &'static str {
    match err {
        ShiftError::Degenerate => "degenerate",
        ShiftError::WrongZone { .. } => "out-of-zone",
        ShiftError::Anomalous { .. } => "anomalous",
        ShiftError::NormalIncidence => "normal-incidence",
        ShiftError::IdentityViolation { .. } => "identity-violation",
        _ => "invalid",
    }
}

fn note(flags: &mut Vec<&'static str>, flag: &'static str) {
    if !flags.contains(&flag) {
        flags.push(flag);
    }
}

impl SweepRow {
    fn blank(theta: f64) -> Self {
        let nan = f64::NAN;
        Self {
            theta_rad: theta,
            zone: String::new(),
            r_re: nan,
            r_im: nan,
            rp_re: nan,
            rp_im: nan,
            t_re: nan,
            t_im: nan,
            tp_re: nan,
            tp_im: nan,
            phi_r: nan,
            phi_rp: nan,
            sy_e: nan,
            sy_ir: nan,
            sy_total: nan,
            sy_spm: nan,
            sx_up: nan,
            sx_down: nan,
            sx_helicity: nan,
            dsx_tam: nan,
            flags: String::new(),
        }
    }

    /// Evaluates every column at one angle. Failures leave `NaN` in the
    /// affected columns and record a flag; they never abort the sweep.
    pub fn compute(base: &StepParams, theta: f64, polarization: Polarization) -> Self {
        let mut row = Self::blank(theta);
        let mut flags: Vec<&'static str> = Vec::new();

        let kin = match base.with_theta(theta).and_then(|p| derive_kinematics(&p)) {
            Ok(kin) => kin,
            Err(e) => {
                note(&mut flags, flag_for(&e));
                row.flags = flags.join("|");
                return row;
            }
        };
        row.zone = kin.zone.tag().to_string();
        if kin.zone == Zone::Klein {
            note(&mut flags, "klein");
        }

        let amps = match amplitudes_closed_form(&kin) {
            Ok(amps) => amps,
            Err(e) => {
                note(&mut flags, flag_for(&e));
                if !matches!(e, ShiftError::WrongZone { .. }) {
                    note(&mut flags, "out-of-zone");
                }
                row.flags = flags.join("|");
                return row;
            }
        };
        row.r_re = amps.r.re;
        row.r_im = amps.r.im;
        row.rp_re = amps.r_flip.re;
        row.rp_im = amps.r_flip.im;
        row.t_re = amps.t.re;
        row.t_im = amps.t.im;
        row.tp_re = amps.t_flip.re;
        row.tp_im = amps.t_flip.im;
        row.phi_r = amps.phase_r;
        row.phi_rp = amps.phase_r_flip;

        if kin.zone != Zone::Tunneling {
            note(&mut flags, "out-of-zone");
            row.flags = flags.join("|");
            return row;
        }
        if kin
            .critical_angle
            .is_some_and(|c| (theta - c).abs() < DIVERGENCE_WINDOW)
        {
            note(&mut flags, "divergent");
        }

        match gh_evanescent(&amps, &kin) {
            Ok(v) => row.sy_e = v,
            Err(e) => note(&mut flags, flag_for(&e)),
        }
        match gh_interference(&amps, &kin) {
            Ok(v) => row.sy_ir = v,
            Err(e) => note(&mut flags, flag_for(&e)),
        }
        match gh_stationary_phase(&kin) {
            Ok(v) => row.sy_spm = v,
            Err(e) => note(&mut flags, flag_for(&e)),
        }
        row.sy_total = row.sy_e + row.sy_ir;

        match if_report_from(&amps, &kin, polarization) {
            Ok(r) => {
                row.sx_up = r.up;
                row.sx_down = r.down;
                row.sx_helicity = r.helicity;
                row.dsx_tam = r.tam;
            }
            Err(e) => note(&mut flags, flag_for(&e)),
        }
        row.flags = flags.join("|");
        row
    }
}

/// Rows for every angle of the configured grid, evaluated in parallel and
/// returned in grid order.
pub fn sweep(config: &SweepConfig) -> Vec<SweepRow> {
    let base = config.base_params();
    config
        .theta
        .values()
        .into_par_iter()
        .map(|theta| SweepRow::compute(&base, theta, config.polarization))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZoneRow {
    pub energy: f64,
    pub theta_rad: f64,
    pub zone: String,
    /// Critical angle at this energy, `NaN` where there is none.
    pub critical_angle: f64,
    /// T/K boundary energy `V0 − m*` at this angle.
    pub lower_boundary: f64,
    /// D/T boundary energy `V0 + m*` at this angle.
    pub upper_boundary: f64,
}

impl Table for ZoneRow {
    fn columns() -> &'static [&'static str] {
        &["energy", "theta_rad", "zone", "critical_angle", "lower_boundary", "upper_boundary"]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            cell(self.energy),
            cell(self.theta_rad),
            self.zone.clone(),
            cell(self.critical_angle),
            cell(self.lower_boundary),
            cell(self.upper_boundary),
        ]
    }
}

pub fn zone_table(config: &SweepConfig) -> Result<Vec<ZoneRow>, ShiftError> {
    let energies = config.energies.values();
    let angles = config.theta.values();
    let map = zone_map(&energies, &angles, config.step, config.mass)?;
    let mut rows = Vec::with_capacity(energies.len() * angles.len());
    for (i, &energy) in energies.iter().enumerate() {
        for (j, &theta) in angles.iter().enumerate() {
            let (lower, upper) = boundary_energies(config.step, config.mass, theta);
            rows.push(ZoneRow {
                energy,
                theta_rad: theta,
                zone: map.zone(i, j).tag().to_string(),
                critical_angle: map.critical_angles[i].unwrap_or(f64::NAN),
                lower_boundary: lower,
                upper_boundary: upper,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BeamRow {
    pub theta0: f64,
    pub waist_momentum: f64,
    pub waist: f64,
    pub y_centroid_in: f64,
    pub y_centroid_r: f64,
    pub gh_numeric: f64,
    pub spm_reference: f64,
    pub relative_gap: f64,
}

impl Table for BeamRow {
    fn columns() -> &'static [&'static str] {
        &[
            "theta0", "waist_momentum", "waist", "y_centroid_in", "y_centroid_r", "gh_numeric",
            "spm_reference", "relative_gap",
        ]
    }

    fn cells(&self) -> Vec<String> {
        [
            self.theta0, self.waist_momentum, self.waist, self.y_centroid_in, self.y_centroid_r,
            self.gh_numeric, self.spm_reference, self.relative_gap,
        ]
        .map(cell)
        .to_vec()
    }
}

pub fn beam_rows(
    base: &StepParams,
    theta0: f64,
    waist_momenta: &[f64],
    n_modes: usize,
    span: f64,
) -> Result<Vec<BeamRow>, ShiftError> {
    waist_momenta
        .par_iter()
        .map(|&wp| {
            let mut spec = BeamSpec::with_waist_momentum(theta0, wp, base);
            spec.n_modes = n_modes;
            spec.span = span;
            let CentroidResult {
                y_centroid_in,
                y_centroid_r,
                gh_numeric,
                spm_reference,
                relative_gap,
                ..
            } = synthesize_and_measure(&spec, base)?;
            Ok(BeamRow {
                theta0,
                waist_momentum: wp,
                waist: spec.waist,
                y_centroid_in,
                y_centroid_r,
                gh_numeric,
                spm_reference,
                relative_gap,
            })
        })
        .collect()
}
