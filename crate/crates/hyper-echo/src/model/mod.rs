//! Shared domain types: grids, states, envelopes, pulses, gradients and
//! sequences.
//!
//! Unit conventions used throughout the crate: time in us, angular
//! frequencies and Rabi-type amplitudes in rad/us, position dimensionless on
//! `[0, 1]`, optical depth as the dimensionless product `alpha_l`.

mod field;
mod grid;
mod pulse;
mod sequence;
mod state;
mod stark;

pub use field::{Direction, FieldEnvelope};
pub use grid::{make_grid, GaussianHole, SimulationGrid, SpectralMask};
pub use pulse::{OpticalPulse, PulseShape};
pub use sequence::{PiPulse, PulseSequence, SequenceEvent};
pub use stark::{stark_phase_map, PhaseSlope, StarkProfile, StarkWindow};
pub use state::{ground_state, EnsembleState};
