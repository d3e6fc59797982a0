//! Parameter sweeps, figure data and validation for the `dirac-step`
//! library, behind the `dirac-step` binary.

pub mod app;
pub mod config;
pub mod output;
pub mod sweep;
pub mod tolerances;
pub mod validate;

pub use app::{run, Cli};
