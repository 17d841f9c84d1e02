//! Semiclassical simulation engine and analytic theory for hybrid photon
//! echo rephasing (HYPER) quantum memories in inhomogeneously broadened
//! two-level ensembles.
//!
//! The crate has three layers:
//!
//! * [`oracle`] — closed-form results of the linearised theory (transmission,
//!   echo gains, suppression, timing, backward retrieval),
//! * [`solver`] — a fixed-step Maxwell-Bloch integrator on a (z, detuning)
//!   grid that reproduces those results for finite pulses and gradients,
//! * [`protocol`] / [`noise`] — sequence builders, parameter scans and the
//!   mode-matched heterodyne noise estimator.
//!
//! Units: time in us, angular frequency in rad/us, position dimensionless on
//! `[0, 1]`, optical depth as the dimensionless product `alpha_l`.

pub mod error;
pub mod model;
pub mod noise;
pub mod oracle;
mod par;
pub mod protocol;
pub mod solver;

pub use error::{Error, Result};
pub use par::Execution;
