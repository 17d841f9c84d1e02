//! Solver configuration.

use crate::par::Execution;

/// Fixed-step time integration scheme.
///
/// Both variants use the same Strang splitting per step — half-step detuning
/// rotation, spatial field solve, full-step Rabi drive, half-step detuning
/// rotation — and differ only in how the drive sub-step is propagated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TimeIntegrator {
    /// Exact Rodrigues rotation of each Bloch vector about the local field
    /// axis. Norm-conserving to rounding; the default.
    #[default]
    SplitRotation,
    /// Classic fourth-order Runge-Kutta on the drive sub-step with the field
    /// frozen over the step.
    SplitRk4,
}

/// How rephasing pi-pulses are realised by sequence builders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PiPulseMode {
    /// Delta-like conjugation + inversion between steps; matches the
    /// assumptions of the analytic theory.
    #[default]
    Instantaneous,
    /// Finite-duration pulses propagated through the medium.
    Resolved,
}

/// Spatial quadrature for the field equation. Only the trapezoid rule is
/// implemented; the enum exists so configs can state it explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FieldZIntegrator {
    #[default]
    Trapezoid,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub time_integrator: TimeIntegrator,
    pub field_z_integrator: FieldZIntegrator,
    pub pi_pulse_mode: PiPulseMode,
    pub execution: Execution,
    /// Resolved pulses must satisfy `t_step <= fwhm / min_steps_per_fwhm`.
    pub min_steps_per_fwhm: f64,
    /// Resolved pulses must satisfy `peak Rabi * t_step <= max_rabi_step`.
    pub max_rabi_step: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            time_integrator: TimeIntegrator::default(),
            field_z_integrator: FieldZIntegrator::default(),
            pi_pulse_mode: PiPulseMode::default(),
            execution: Execution::default(),
            min_steps_per_fwhm: 20.0,
            max_rabi_step: 0.1,
        }
    }
}

impl SolverConfig {
    pub fn sequential(mut self) -> Self {
        self.execution = Execution::Sequential;
        self
    }

    pub fn with_execution(mut self, exec: Execution) -> Self {
        self.execution = exec;
        self
    }

    pub fn with_integrator(mut self, ti: TimeIntegrator) -> Self {
        self.time_integrator = ti;
        self
    }
}
