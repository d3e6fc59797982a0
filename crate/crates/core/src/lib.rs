//! Relativistic (Dirac) electron scattering at a one-dimensional step potential.
//!
//! The crate computes the closed-form reflection and transmission amplitudes,
//! the Dirac currents of the scattered waves, and the beam shifts that follow
//! from them:
//!
//! - [`gh_shift`]: the longitudinal Goos-Hänchen shift, by the evanescent
//!   flux, the incident/reflected interference flux and the stationary phase.
//! - [`if_shift`]: the transverse Imbert-Fedorov shift, from the transmitted
//!   transverse current and from total-angular-momentum conservation.
//! - [`fw_angular`]: Foldy-Wouthuysen expectation values behind the angular
//!   momentum budget.
//! - [`beam_oracle`]: a finite-width Gaussian beam used as an independent
//!   numerical check of the stationary-phase shift.
//!
//! Natural units are used throughout (ħ = c = 1). Energies are multiples of
//! the rest mass, lengths multiples of 1/m.

pub mod beam_oracle;
pub mod dirac;
pub mod error;
pub mod fw_angular;
pub mod gh_shift;
pub mod if_shift;
pub mod kinematics;
pub mod scattering;

pub use error::{Result, ShiftError};
pub use kinematics::{critical_angle, derive_kinematics, Kinematics, StepParams, Zone};
pub use scattering::{amplitudes_closed_form, boundary_match_oracle, ScatterAmplitudes, Spin};
