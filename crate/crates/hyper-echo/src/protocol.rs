//! Sequence builders, validated experiment plans and echo metrology.
//!
//! A plan fixes the pulse geometry and sweeps one variable (optical depth,
//! gradient strength or input area), producing one row of [`EchoMetrics`]
//! per value. Rows are independent and may run on the worker pool; the
//! result table is always assembled in sweep order, so output is
//! deterministic for a given plan and seed.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{
    make_grid, stark_phase_map, OpticalPulse, PiPulse, PulseSequence, SequenceEvent,
    SimulationGrid, StarkProfile, StarkWindow,
};
use crate::oracle::echo_arrival_time;
use crate::par;
use crate::solver::{PiPulseMode, RunOutput, Solver, SolverConfig};

/// Which echo an experiment produces and measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProtocolKind {
    /// Input plus one pi-pulse; echo at `2 t2 - t1`.
    TwoPulseEcho,
    /// Full sequence, but the metrics window sits on the three-pulse-echo
    /// time `t4 + (t2 - t1)`.
    ThreePulseContext,
    /// Full balanced sequence, forward recall at `t1 + 2 t4 - 2 t2`.
    HyperForward,
    /// As forward, but the second pi-pulse counter-propagates and the echo
    /// leaves through the entry face.
    HyperBackward,
}

/// Swept quantity of a plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    /// Optical depth `alpha_l`.
    AlphaL,
    /// Window-1 gradient, rad/us per unit z.
    Gradient,
    /// Input pulse area in rad.
    InputArea,
}

/// Fixed sequence geometry shared by every row of a plan.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceParams {
    pub t1: f64,
    pub t2: f64,
    /// Second pi-pulse; `None` for plain two-pulse echoes.
    pub t4: Option<f64>,
    pub input: OpticalPulse,
    /// Window-1 gradient, rad/us per unit z. Zero disables the broadening.
    pub gradient: f64,
    /// Clearance between pi-pulses and window edges, us.
    pub gap: f64,
    pub alpha_l: f64,
    /// Fractional error imposed on the balancing gradient (0 = balanced).
    pub balance_error: f64,
}

/// Grid resolution used for every row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub num_z: usize,
    pub num_detunings: usize,
    /// Line halfwidth as a multiple of the widest pulse bandwidth.
    pub halfwidth_factor: f64,
    pub t_step: f64,
    /// Extra time simulated past the last measurement window, us.
    pub t_pad: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            num_z: 96,
            num_detunings: 601,
            halfwidth_factor: 20.0,
            t_step: 0.05,
            t_pad: 0.5,
        }
    }
}

/// A validated, reproducible scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPlan {
    pub kind: ProtocolKind,
    pub sweep: SweepVariable,
    pub values: Vec<f64>,
    pub base: SequenceParams,
    pub grid: GridSpec,
    pub solver: SolverConfig,
    /// Run a zero-field reference per row and report suppression ratios.
    pub with_reference: bool,
    pub seed: u64,
    pub label: String,
}

/// Scalar observables of one measured echo.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EchoMetrics {
    /// `sum |a|^2 dt` over the measurement window.
    pub echo_energy: f64,
    /// `sum |a| dt` over the measurement window.
    pub echo_area: f64,
    /// Time of the largest sample in the window.
    pub peak_time: f64,
    /// `echo_energy / input_energy`, when the input energy is known.
    pub efficiency: Option<f64>,
    /// Echo energy relative to a zero-field reference run.
    pub suppression_ratio: Option<f64>,
}

/// One row of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub metrics: EchoMetrics,
}

/// Everything a plan run produces.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanResult {
    pub rows: Vec<SweepRow>,
    /// Expected echo time of the base geometry (first row's geometry).
    pub expected_time: f64,
    pub label: String,
}

/// Validation output for a plan: the exact balance residual and advisory
/// notes, without any solver work.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    /// Accumulated phase-per-z over input -> echo; zero when balanced.
    pub balance_slope: f64,
    pub echo_time: f64,
    pub three_pulse_echo_time: Option<f64>,
    pub warnings: Vec<String>,
}

/// Result of [`build_hyper_sequence`].
#[derive(Debug, Clone)]
pub struct BuiltSequence {
    pub sequence: PulseSequence,
    pub stark: StarkProfile,
    pub echo_time: f64,
    pub warnings: Vec<String>,
}

const WEAK_INPUT_LIMIT: f64 = 0.1 * PI;

/// Search the gradient's floating-point neighbourhood so the stored window
/// products cancel bit-exactly in [`stark_phase_map`].
fn tune_balance(eta1: f64, d1: f64, d2: f64) -> Result<f64> {
    let target = eta1 * d1;
    let mut eta2 = target / d2;
    if eta2 * d2 == target {
        return Ok(eta2);
    }
    for _ in 0..8 {
        let up = f64::from_bits(eta2.to_bits() + 1);
        if up * d2 == target {
            return Ok(up);
        }
        let down = f64::from_bits(eta2.to_bits() - 1);
        if down * d2 == target {
            return Ok(down);
        }
        if eta2 * d2 < target {
            eta2 = up;
        } else {
            eta2 = down;
        }
        if eta2 * d2 == target {
            return Ok(eta2);
        }
    }
    Err(Error::InvalidPlan(format!(
        "could not balance window gradients exactly (eta1 = {eta1}, d1 = {d1}, d2 = {d2})"
    )))
}

/// Build the full rephasing sequence: input at `t1`, pi-pulses at `t2` and
/// `t4`, a short strong gradient window between input and `t2` and a long
/// balancing window between the pulses.
///
/// With `asymmetric_3pe_guard` the construction is rejected when the echo at
/// `t1 + 2 t4 - 2 t2` falls within two input-FWHM of the three-pulse echo at
/// `t4 + (t2 - t1)`.
pub fn build_hyper_sequence(
    t1: f64,
    t2: f64,
    t4: f64,
    input: &OpticalPulse,
    gradient_strength: f64,
    gap: f64,
    asymmetric_3pe_guard: bool,
    pi_mode: PiPulseMode,
    backward: bool,
    balance_error: f64,
) -> Result<BuiltSequence> {
    if !(t1 < t2 && t2 < t4) {
        return Err(Error::InvalidPlan(format!(
            "pulse times must satisfy t1 < t2 < t4 (got {t1}, {t2}, {t4})"
        )));
    }
    if t4 - t2 <= t2 - t1 {
        return Err(Error::InvalidPlan(format!(
            "degenerate geometry: t4 - t2 = {} must exceed t2 - t1 = {} or the echo \
             collides with the input side of the sequence",
            t4 - t2,
            t2 - t1
        )));
    }
    let echo_time = echo_arrival_time(t1, t2, t4)?;
    if echo_time - t4 < 2.0 * input.fwhm {
        return Err(Error::InvalidPlan(format!(
            "echo at {echo_time} us is within two input FWHM of the second pi-pulse at {t4} us"
        )));
    }
    let t3pe = t4 + (t2 - t1);
    if asymmetric_3pe_guard && (echo_time - t3pe).abs() < 2.0 * input.fwhm {
        return Err(Error::InvalidPlan(format!(
            "echo at {echo_time} us overlaps the three-pulse echo at {t3pe} us; \
             place the pi-pulses asymmetrically"
        )));
    }

    let mut warnings = Vec::new();
    if input.area > WEAK_INPUT_LIMIT {
        warnings.push(format!(
            "input area {:.3} rad exceeds the weak-input regime (0.1 pi); \
             the linearised theory will not apply quantitatively",
            input.area
        ));
    }

    let mut windows = Vec::new();
    if gradient_strength != 0.0 {
        let w1_start = t1 + 2.0 * input.fwhm;
        let w1_end = t2 - gap;
        if w1_end - w1_start <= 0.0 {
            return Err(Error::InvalidPlan(format!(
                "no room for the pre-pulse gradient window between the input tail at \
                 {w1_start} us and the pi-pulse at {t2} us"
            )));
        }
        let w2_start = t2 + gap;
        let w2_end = t4 - gap;
        if w2_end - w2_start <= 0.0 {
            return Err(Error::InvalidPlan(
                "no room for the balancing gradient window between the pi-pulses".into(),
            ));
        }
        let d1 = w1_end - w1_start;
        let d2 = w2_end - w2_start;
        let mut eta2 = tune_balance(gradient_strength, d1, d2)?;
        if balance_error != 0.0 {
            eta2 *= 1.0 + balance_error;
        }
        windows.push(StarkWindow {
            t_start: w1_start,
            t_end: w1_end,
            gradient: gradient_strength,
        });
        windows.push(StarkWindow {
            t_start: w2_start,
            t_end: w2_end,
            gradient: eta2,
        });
    } else {
        warnings.push(
            "zero gradient requested: plain double-pi sequence, no echo suppression".into(),
        );
    }
    let stark = StarkProfile::new(windows)?;

    let make_pi = |time: f64, flip: bool| -> Result<PiPulse> {
        Ok(match pi_mode {
            PiPulseMode::Instantaneous => PiPulse::Instantaneous {
                time,
                area: PI,
                phase: 0.0,
                direction_flip: flip,
            },
            PiPulseMode::Resolved => {
                if flip {
                    return Err(Error::InvalidPlan(
                        "backward recall requires instantaneous pi-pulses".into(),
                    ));
                }
                PiPulse::Resolved(OpticalPulse::gaussian(time, input.fwhm, PI)?)
            }
        })
    };
    let sequence = PulseSequence::new(vec![
        SequenceEvent::Input(*input),
        SequenceEvent::Pi(make_pi(t2, false)?),
        SequenceEvent::Pi(make_pi(t4, backward)?),
    ])?;

    // The generated profile must be exactly balanced unless an error was
    // deliberately imposed.
    if balance_error == 0.0 {
        let map = stark_phase_map(&stark, &sequence.pi_times())?;
        if !map.is_balanced() {
            return Err(Error::InvalidPlan(format!(
                "internal: generated profile is unbalanced (slope {})",
                map.slope
            )));
        }
    }

    Ok(BuiltSequence {
        sequence,
        stark,
        echo_time,
        warnings,
    })
}

/// Two-pulse echo sequence: input at `t1`, one pi-pulse at `t2`, optional
/// gradient window (total phase `gradient * duration` per unit z) before the
/// pulse. The echo forms at `2 t2 - t1`.
pub fn build_two_pulse_sequence(
    t1: f64,
    t2: f64,
    input: &OpticalPulse,
    gradient_strength: f64,
    gap: f64,
) -> Result<BuiltSequence> {
    if !(t1 < t2) {
        return Err(Error::InvalidPlan(format!(
            "input must precede the pi-pulse (got t1 = {t1}, t2 = {t2})"
        )));
    }
    let mut windows = Vec::new();
    if gradient_strength != 0.0 {
        let w_start = t1 + 2.0 * input.fwhm;
        let w_end = t2 - gap;
        if w_end - w_start <= 0.0 {
            return Err(Error::InvalidPlan(
                "no room for the gradient window before the pi-pulse".into(),
            ));
        }
        windows.push(StarkWindow {
            t_start: w_start,
            t_end: w_end,
            gradient: gradient_strength,
        });
    }
    let stark = StarkProfile::new(windows)?;
    let sequence = PulseSequence::new(vec![
        SequenceEvent::Input(*input),
        SequenceEvent::Pi(PiPulse::instantaneous(t2)),
    ])?;
    Ok(BuiltSequence {
        sequence,
        stark,
        echo_time: 2.0 * t2 - t1,
        warnings: Vec::new(),
    })
}

impl ExperimentPlan {
    fn params_for(&self, value: f64) -> SequenceParams {
        let mut p = self.base.clone();
        match self.sweep {
            SweepVariable::AlphaL => p.alpha_l = value,
            SweepVariable::Gradient => p.gradient = value,
            SweepVariable::InputArea => p.input.area = value,
        }
        p
    }

    /// Build the sequence + profile for one row.
    fn build_row(&self, value: f64) -> Result<(BuiltSequence, SequenceParams)> {
        let p = self.params_for(value);
        let built = match self.kind {
            ProtocolKind::TwoPulseEcho => {
                build_two_pulse_sequence(p.t1, p.t2, &p.input, p.gradient, p.gap)?
            }
            ProtocolKind::ThreePulseContext | ProtocolKind::HyperForward
            | ProtocolKind::HyperBackward => {
                let t4 = p.t4.ok_or_else(|| {
                    Error::InvalidPlan("this protocol needs a second pi-pulse time t4".into())
                })?;
                build_hyper_sequence(
                    p.t1,
                    p.t2,
                    t4,
                    &p.input,
                    p.gradient,
                    p.gap,
                    true,
                    self.solver.pi_pulse_mode,
                    self.kind == ProtocolKind::HyperBackward,
                    p.balance_error,
                )?
            }
        };
        Ok((built, p))
    }

    fn measurement_time(&self, built: &BuiltSequence, p: &SequenceParams) -> f64 {
        match self.kind {
            ProtocolKind::ThreePulseContext => p.t4.unwrap() + (p.t2 - p.t1),
            _ => built.echo_time,
        }
    }

    fn grid_for(&self, p: &SequenceParams, built: &BuiltSequence, measure_at: f64) -> Result<SimulationGrid> {
        let bandwidth = built.sequence.widest_bandwidth().max(p.input.bandwidth());
        let halfwidth = self.grid.halfwidth_factor * bandwidth;
        let t_end = measure_at + 3.0 * p.input.fwhm + self.grid.t_pad;
        make_grid(
            self.grid.num_z,
            self.grid.num_detunings,
            halfwidth,
            self.grid.t_step,
            (0.0, t_end),
            p.alpha_l,
        )
    }

    /// Validate every row without running the solver.
    pub fn validate(&self) -> Result<ValidationReport> {
        if self.values.is_empty() {
            return Err(Error::InvalidPlan("sweep value list is empty".into()));
        }
        let mut warnings = Vec::new();
        let mut balance_slope = 0.0;
        let mut echo_time = 0.0;
        let mut t3pe = None;
        for (i, &value) in self.values.iter().enumerate() {
            let (built, p) = self.build_row(value)?;
            let measure_at = self.measurement_time(&built, &p);
            let grid = self.grid_for(&p, &built, measure_at)?;
            let map = stark_phase_map(&built.stark, &built.sequence.pi_times())?;
            if i == 0 {
                balance_slope = map.slope;
                echo_time = built.echo_time;
                t3pe = p.t4.map(|t4| t4 + (p.t2 - p.t1));
                warnings.extend(built.warnings.clone());
                warnings.extend(grid.soundness_warnings(built.sequence.widest_bandwidth()));
            }
            if matches!(self.kind, ProtocolKind::HyperForward | ProtocolKind::HyperBackward)
                && p.balance_error == 0.0
                && !map.is_balanced()
            {
                return Err(Error::InvalidPlan(format!(
                    "row {value}: stark profile is unbalanced (slope {})",
                    map.slope
                )));
            }
        }
        Ok(ValidationReport {
            balance_slope,
            echo_time,
            three_pulse_echo_time: t3pe,
            warnings,
        })
    }

    /// Run every row (and, when requested, a zero-field reference per row).
    pub fn run(&self) -> Result<PlanResult> {
        self.validate()?;
        let exec = self.solver.execution;
        let rows = par::try_map_indexed(exec, self.values.len(), |i| {
            let value = self.values[i];
            self.run_row(value)
                .map_err(|e| Error::InvalidPlan(format!("sweep value {value}: {e}")))
        })?;
        let (built, p) = self.build_row(self.values[0])?;
        Ok(PlanResult {
            rows,
            expected_time: self.measurement_time(&built, &p),
            label: self.label.clone(),
        })
    }

    fn run_row(&self, value: f64) -> Result<SweepRow> {
        let (built, p) = self.build_row(value)?;
        let measure_at = self.measurement_time(&built, &p);
        let grid = self.grid_for(&p, &built, measure_at)?;
        let window = 3.0 * p.input.fwhm;

        let output = Solver::new(grid.clone(), self.solver).run_sequence(&built.sequence, &built.stark)?;
        let trace = self.trace_of(&output);
        let input_energy = p.input.energy();
        let mut metrics = measure_echo(trace, measure_at, window, Some(input_energy), None)?;

        if self.with_reference {
            let reference = match self.kind {
                ProtocolKind::TwoPulseEcho => {
                    build_two_pulse_sequence(p.t1, p.t2, &p.input, 0.0, p.gap)?
                }
                _ => {
                    let t4 = p.t4.unwrap();
                    build_hyper_sequence(
                        p.t1,
                        p.t2,
                        t4,
                        &p.input,
                        0.0,
                        p.gap,
                        true,
                        self.solver.pi_pulse_mode,
                        self.kind == ProtocolKind::HyperBackward,
                        0.0,
                    )?
                }
            };
            let ref_out =
                Solver::new(grid, self.solver).run_sequence(&reference.sequence, &reference.stark)?;
            let ref_metrics =
                measure_echo(self.trace_of(&ref_out), measure_at, window, None, None)?;
            metrics.suppression_ratio = if ref_metrics.echo_energy > 0.0 {
                Some(metrics.echo_energy / ref_metrics.echo_energy)
            } else {
                None
            };
        }
        Ok(SweepRow { value, metrics })
    }

    fn trace_of<'a>(&self, output: &'a RunOutput) -> &'a crate::model::FieldEnvelope {
        match self.kind {
            ProtocolKind::HyperBackward => output
                .backward_trace
                .as_ref()
                .unwrap_or(&output.forward_trace),
            _ => &output.forward_trace,
        }
    }
}

/// Pieces needed to run noise shots: the built sequence with its input
/// stripped, the gradient profile, and a grid sized for the geometry.
#[derive(Debug, Clone)]
pub struct NoiseRow {
    pub sequence: PulseSequence,
    pub stark: StarkProfile,
    pub grid: SimulationGrid,
    pub first_pi_time: f64,
    /// Where the two-pulse echo would form if an input were present; the
    /// default detection mode sits here.
    pub would_be_2pe_time: f64,
}

impl ExperimentPlan {
    /// Assemble the single-row geometry used by noise runs. The input pulse
    /// in the plan only fixes the virtual timing; it is stripped from the
    /// returned sequence.
    pub fn noise_row(&self) -> Result<NoiseRow> {
        if self.values.is_empty() {
            return Err(Error::InvalidPlan("sweep value list is empty".into()));
        }
        let (built, p) = self.build_row(self.values[0])?;
        let measure_at = self.measurement_time(&built, &p);
        let grid = self.grid_for(&p, &built, measure_at)?;
        Ok(NoiseRow {
            sequence: built.sequence.without_inputs(),
            stark: built.stark,
            grid,
            first_pi_time: p.t2,
            would_be_2pe_time: 2.0 * p.t2 - p.t1,
        })
    }
}

/// Integrate energy and area over `expected_time +- window_halfwidth` and
/// locate the peak. `input_energy` fills the efficiency; `reference` fills
/// the suppression ratio.
pub fn measure_echo(
    trace: &crate::model::FieldEnvelope,
    expected_time: f64,
    window_halfwidth: f64,
    input_energy: Option<f64>,
    reference: Option<&EchoMetrics>,
) -> Result<EchoMetrics> {
    let echo_energy = trace.energy_in_window(expected_time, window_halfwidth)?;
    let echo_area = trace.area_in_window(expected_time, window_halfwidth)?;
    let (peak_time, _) = trace.peak_in_window(expected_time, window_halfwidth)?;
    Ok(EchoMetrics {
        echo_energy,
        echo_area,
        peak_time,
        efficiency: input_energy.map(|e| echo_energy / e),
        suppression_ratio: reference.and_then(|r| {
            (r.echo_energy > 0.0).then(|| echo_energy / r.echo_energy)
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Direction;
    use crate::model::FieldEnvelope;
    use num_complex::Complex64;

    fn input() -> OpticalPulse {
        OpticalPulse::gaussian(4.0, 1.8, 0.02 * PI).unwrap()
    }

    #[test]
    fn balanced_build_has_exactly_zero_slope() {
        let built =
            build_hyper_sequence(4.0, 13.0, 26.0, &input(), 25.0, 0.3, true,
                PiPulseMode::Instantaneous, false, 0.0)
            .unwrap();
        let map = stark_phase_map(&built.stark, &built.sequence.pi_times()).unwrap();
        assert_eq!(map.slope, 0.0);
        assert_eq!(built.echo_time, 30.0);
    }

    #[test]
    fn symmetric_placement_trips_the_guard() {
        // t5 = 2 + 52 - 20 = 34 coincides with the 3PE at 26 + 8 = 34.
        let err = build_hyper_sequence(
            2.0, 10.0, 26.0, &input(), 25.0, 0.3, true, PiPulseMode::Instantaneous, false, 0.0,
        );
        assert!(err.is_err());
        assert!(format!("{}", err.unwrap_err()).contains("three-pulse"));
    }

    #[test]
    fn degenerate_intervals_are_rejected() {
        // Equal intervals push the echo onto the second pulse.
        let err = build_hyper_sequence(
            4.0, 15.0, 26.0, &input(), 25.0, 0.3, false, PiPulseMode::Instantaneous, false, 0.0,
        );
        assert!(err.is_err());
    }

    #[test]
    fn zero_gradient_is_allowed_but_flagged() {
        let built = build_hyper_sequence(
            4.0, 13.0, 26.0, &input(), 0.0, 0.3, true, PiPulseMode::Instantaneous, false, 0.0,
        )
        .unwrap();
        assert!(built.stark.is_empty());
        assert!(built.warnings.iter().any(|w| w.contains("no echo suppression")));
    }

    #[test]
    fn strong_input_is_flagged_weak_is_not() {
        let strong = OpticalPulse::gaussian(4.0, 1.8, 0.5 * PI).unwrap();
        let built = build_hyper_sequence(
            4.0, 13.0, 26.0, &strong, 25.0, 0.3, true, PiPulseMode::Instantaneous, false, 0.0,
        )
        .unwrap();
        assert!(built.warnings.iter().any(|w| w.contains("weak-input")));
    }

    #[test]
    fn measure_echo_on_synthetic_traces() {
        // Zero trace: all-zero metrics.
        let zero = FieldEnvelope::new(0.0, 0.01, vec![Complex64::new(0.0, 0.0); 4000], Direction::Forward);
        let m = measure_echo(&zero, 20.0, 5.0, None, None).unwrap();
        assert_eq!(m.echo_energy, 0.0);
        assert_eq!(m.echo_area, 0.0);

        // Unit-energy Gaussian at the expected time: energy within 0.3% for
        // a +-3 FWHM window.
        let fwhm: f64 = 1.8;
        let sigma = fwhm / (8.0 * std::f64::consts::LN_2).sqrt();
        let peak = 1.0 / (sigma * std::f64::consts::PI.sqrt() * 2.0f64.sqrt()).sqrt();
        let gauss = FieldEnvelope::from_fn(0.0, 0.01, 4000, Direction::Forward, |t| {
            Complex64::new(peak * (-(t - 20.0).powi(2) / (2.0 * sigma * sigma)).exp(), 0.0)
        });
        let m = measure_echo(&gauss, 20.0, 3.0 * fwhm, None, None).unwrap();
        assert!((m.echo_energy - 1.0).abs() < 3e-3, "energy {}", m.echo_energy);
        assert!((m.peak_time - 20.0).abs() <= 0.01);

        // A distant second pulse is excluded by the window.
        let two = FieldEnvelope::from_fn(0.0, 0.01, 4000, Direction::Forward, |t| {
            let a = (-(t - 20.0).powi(2) / (2.0 * sigma * sigma)).exp();
            let b = (-(t - 35.0).powi(2) / (2.0 * sigma * sigma)).exp();
            Complex64::new(peak * (a + b), 0.0)
        });
        let m2 = measure_echo(&two, 20.0, 3.0 * fwhm, None, None).unwrap();
        assert!((m2.echo_energy - m.echo_energy).abs() < 1e-6);

        // Window larger than the trace errors out.
        assert!(measure_echo(&gauss, 20.0, 50.0, None, None).is_err());
    }

    #[test]
    fn plan_rejects_empty_sweep() {
        let plan = ExperimentPlan {
            kind: ProtocolKind::TwoPulseEcho,
            sweep: SweepVariable::AlphaL,
            values: vec![],
            base: SequenceParams {
                t1: 4.0,
                t2: 14.0,
                t4: None,
                input: input(),
                gradient: 0.0,
                gap: 0.3,
                alpha_l: 0.5,
                balance_error: 0.0,
            },
            grid: GridSpec::default(),
            solver: SolverConfig::default(),
            with_reference: false,
            seed: 1,
            label: "test".into(),
        };
        assert!(plan.validate().is_err());
    }
}
