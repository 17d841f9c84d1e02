//! Fixed-step integrator for the 1D semiclassical Maxwell-Bloch equations on
//! the (z, detuning) grid.
//!
//! Per time step the evolution is Strang-split into
//!
//! 1. half-step detuning rotation `D -> D exp(i (Delta + eta(t) z) dt/2)`,
//! 2. spatial field solve `da/dz = +- i sum_k w_k D_k` marched from the
//!    entry face by trapezoid quadrature (the field follows the atoms
//!    adiabatically; there is no retardation term),
//! 3. full-step Rabi drive about the local field axis,
//! 4. another half-step detuning rotation.
//!
//! The detuning and drive sub-steps are exact rotations, so the Bloch norm
//! is conserved to rounding. Gradient windows are integrated exactly over
//! each sub-step (piecewise-constant algebra), so window edges need not be
//! aligned with the time grid.
//!
//! The per-point Bloch updates are data-parallel; the z-march of the field
//! solve and the per-slice detuning sums are sequential, which keeps results
//! bitwise identical across worker counts.

mod config;

pub use config::{FieldZIntegrator, PiPulseMode, SolverConfig, TimeIntegrator};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{
    ground_state, Direction, EnsembleState, FieldEnvelope, PiPulse, PulseSequence, SequenceEvent,
    SimulationGrid, StarkProfile,
};
use crate::par;

/// Detector-face traces and the final atomic state of one run.
#[derive(Debug, Clone)]
pub struct RunOutput {
    /// Field at the exit face `z = 1`, sampled at step midpoints.
    pub forward_trace: FieldEnvelope,
    /// Field at the entry face `z = 0` once the backward stage is engaged.
    pub backward_trace: Option<FieldEnvelope>,
    pub final_state: EnsembleState,
}

/// Excited-state populations resolved by detuning.
#[derive(Debug, Clone)]
pub struct ExcitedStateFraction {
    /// `(w + 1) / 2` averaged over z, one entry per grid detuning.
    pub per_detuning: Vec<f64>,
    /// Mean over the requested detuning window.
    pub aggregate: f64,
}

/// Maxwell-Bloch stepper bound to one grid and configuration.
pub struct Solver {
    grid: SimulationGrid,
    config: SolverConfig,
    // Cached half-step rotation table, keyed by the gradient integral of the
    // sub-step it was built for. The key is NaN until first use.
    table_gradient_integral: f64,
    cos_table: Vec<f64>,
    sin_table: Vec<f64>,
}

impl Solver {
    pub fn new(grid: SimulationGrid, config: SolverConfig) -> Self {
        Solver {
            grid,
            config,
            table_gradient_integral: f64::NAN,
            cos_table: Vec::new(),
            sin_table: Vec::new(),
        }
    }

    pub fn grid(&self) -> &SimulationGrid {
        &self.grid
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn ground_state(&self) -> EnsembleState {
        ground_state(&self.grid)
    }

    fn check_state(&self, state: &EnsembleState) -> Result<()> {
        if state.num_z() != self.grid.num_z() || state.num_detunings() != self.grid.num_detunings()
        {
            return Err(Error::InvalidSequence(format!(
                "state shape ({}, {}) does not match grid ({}, {})",
                state.num_z(),
                state.num_detunings(),
                self.grid.num_z(),
                self.grid.num_detunings()
            )));
        }
        Ok(())
    }

    /// Rebuild the rotation table if the gradient integral changed. The
    /// angle at (j, k) is `Delta_k * h + z_j * p` with `h = dt/2` and `p`
    /// the exact integral of the gradient over the sub-step.
    fn ensure_table(&mut self, p: f64) {
        if self.table_gradient_integral == p && !self.cos_table.is_empty() {
            return;
        }
        let h = 0.5 * self.grid.t_step();
        let nz = self.grid.num_z();
        let nd = self.grid.num_detunings();
        self.cos_table.resize(nz * nd, 0.0);
        self.sin_table.resize(nz * nd, 0.0);
        let z = self.grid.z();
        let detunings = self.grid.detunings();
        let (cos_t, sin_t) = (&mut self.cos_table, &mut self.sin_table);
        for j in 0..nz {
            let zp = z[j] * p;
            let base = j * nd;
            for k in 0..nd {
                let (s, c) = (detunings[k] * h + zp).sin_cos();
                cos_t[base + k] = c;
                sin_t[base + k] = s;
            }
        }
        self.table_gradient_integral = p;
    }

    /// Half-step phase rotation with gradient integral `p` over the sub-step.
    fn rotate_phase_half(&mut self, state: &mut EnsembleState, p: f64) {
        self.ensure_table(p);
        let nd = self.grid.num_detunings();
        let cos_t = &self.cos_table;
        let sin_t = &self.sin_table;
        par::for_each_chunk_mut(self.config.execution, state.bloch_mut(), nd, |j, chunk| {
            let base = j * nd;
            for (k, b) in chunk.iter_mut().enumerate() {
                let c = cos_t[base + k];
                let s = sin_t[base + k];
                let (u, v) = (b[0], b[1]);
                b[0] = c * u - s * v;
                b[1] = s * u + c * v;
            }
        });
    }

    /// Weighted coherence sum per z slice, `S_j = sum_k w_k (u + i v)/2`.
    fn slice_sums(&self, state: &EnsembleState) -> Vec<Complex64> {
        let nz = self.grid.num_z();
        let nd = self.grid.num_detunings();
        let weights = self.grid.weights();
        let bloch = state.bloch();
        par::map_indexed(self.config.execution, nz, move |j| {
            let base = j * nd;
            let mut sr = 0.0;
            let mut si = 0.0;
            for k in 0..nd {
                let b = &bloch[base + k];
                sr += weights[k] * b[0];
                si += weights[k] * b[1];
            }
            Complex64::new(0.5 * sr, 0.5 * si)
        })
    }

    /// Solve the spatial field equation from the current coherences and the
    /// entry-face boundary value. Returns the field profile over z and the
    /// exit-face sample.
    fn solve_field(
        &self,
        state: &EnsembleState,
        boundary: Complex64,
    ) -> (Vec<Complex64>, Complex64) {
        let sums = self.slice_sums(state);
        let z = self.grid.z();
        let nz = z.len();
        let mut profile = vec![Complex64::new(0.0, 0.0); nz];
        match state.emission_direction() {
            Direction::Forward => {
                // da/dz = +i S, marched from z = 0.
                profile[0] = boundary;
                for j in 0..nz - 1 {
                    let dz = z[j + 1] - z[j];
                    let incr = Complex64::i() * ((sums[j] + sums[j + 1]) * (0.5 * dz));
                    profile[j + 1] = profile[j] + incr;
                }
                let exit = profile[nz - 1];
                (profile, exit)
            }
            Direction::Backward => {
                // da/dz = -i S, marched down from z = 1 where nothing enters.
                profile[nz - 1] = boundary;
                for j in (0..nz - 1).rev() {
                    let dz = z[j + 1] - z[j];
                    let incr = Complex64::i() * ((sums[j] + sums[j + 1]) * (0.5 * dz));
                    profile[j] = profile[j + 1] + incr;
                }
                let exit = profile[0];
                (profile, exit)
            }
        }
    }

    /// Full-step Rabi drive under the frozen field profile.
    fn drive(&self, state: &mut EnsembleState, field: &[Complex64], dt: f64) {
        let nd = self.grid.num_detunings();
        let integrator = self.config.time_integrator;
        par::for_each_chunk_mut(self.config.execution, state.bloch_mut(), nd, |j, chunk| {
            let a = field[j];
            let m = a.norm();
            if m == 0.0 {
                return;
            }
            match integrator {
                TimeIntegrator::SplitRotation => {
                    // Exact rotation about the in-plane axis (a_re, a_im)/|a|
                    // by 2 |a| dt.
                    let theta = 2.0 * m * dt;
                    let (st, ct) = theta.sin_cos();
                    let n1 = a.re / m;
                    let n2 = a.im / m;
                    let omc = 1.0 - ct;
                    for b in chunk.iter_mut() {
                        let (u, v, w) = (b[0], b[1], b[2]);
                        let ndot = n1 * u + n2 * v;
                        b[0] = u * ct + n2 * w * st + n1 * ndot * omc;
                        b[1] = v * ct - n1 * w * st + n2 * ndot * omc;
                        b[2] = w * ct + (n1 * v - n2 * u) * st;
                    }
                }
                TimeIntegrator::SplitRk4 => {
                    for b in chunk.iter_mut() {
                        rk4_drive(b, a, dt);
                    }
                }
            }
        });
    }

    /// Advance one time step: the state is updated in place and the
    /// exit-face field sample (taken at the step midpoint) is returned.
    pub fn step(
        &mut self,
        state: &mut EnsembleState,
        boundary_field: Complex64,
        stark: &StarkProfile,
    ) -> Result<Complex64> {
        self.check_state(state)?;
        if !boundary_field.is_finite() {
            return Err(Error::Numerical {
                time: state.time_stamp(),
                context: "non-finite boundary field".into(),
            });
        }
        let dt = self.grid.t_step();
        let t = state.time_stamp();
        let p1 = stark.phase_integral(t, t + 0.5 * dt);
        self.rotate_phase_half(state, p1);
        let (field, exit) = self.solve_field(state, boundary_field);
        self.drive(state, &field, dt);
        let p2 = stark.phase_integral(t + 0.5 * dt, t + dt);
        self.rotate_phase_half(state, p2);
        state.set_time_stamp(t + dt);
        if !exit.is_finite() {
            return Err(Error::Numerical {
                time: t,
                context: self.locate_blowup(state),
            });
        }
        Ok(exit)
    }

    fn locate_blowup(&self, state: &EnsembleState) -> String {
        let nd = self.grid.num_detunings();
        let mut worst = (0usize, 0.0f64);
        for (i, b) in state.bloch().iter().enumerate() {
            let mag = b.iter().map(|x| x.abs()).fold(0.0, f64::max);
            if !mag.is_finite() {
                worst = (i, f64::INFINITY);
                break;
            }
            if mag > worst.1 {
                worst = (i, mag);
            }
        }
        let (j, k) = (worst.0 / nd, worst.0 % nd);
        format!(
            "non-finite exit field; worst grid point z = {:.4}, detuning = {:.4} rad/us (|B| = {:.3e})",
            self.grid.z()[j],
            self.grid.detunings()[k],
            worst.1
        )
    }

    /// Idealised pi-pulse: rotation by `area` about the in-plane axis at
    /// angle `phase`. For an exact pi about the u-axis this is
    /// `(u, v, w) -> (u, -v, -w)`: coherence conjugation plus inversion.
    ///
    /// With `direction_flip` the counter-propagating geometry is modelled by
    /// re-tagging the phase-matched emission direction; subsequent field
    /// solves use the backward equation.
    pub fn apply_instantaneous_pi(
        &self,
        state: &mut EnsembleState,
        area: f64,
        phase: f64,
        direction_flip: bool,
    ) {
        apply_instantaneous_pi(state, area, phase, direction_flip, self.config.execution);
    }

    /// Multiply every coherence by `exp(i phase_per_z * z)`: the idealised
    /// short-strong gradient window.
    pub fn apply_stark_kick(&self, state: &mut EnsembleState, phase_per_z: f64) {
        apply_stark_kick(&self.grid, state, phase_per_z, self.config.execution);
    }

    /// Run a whole pulse sequence from the ground state over the grid span.
    pub fn run_sequence(
        &mut self,
        sequence: &PulseSequence,
        stark: &StarkProfile,
    ) -> Result<RunOutput> {
        self.validate_run(sequence, stark)?;
        let (t_start, _) = self.grid.t_span();
        let dt = self.grid.t_step();
        let n_steps = self.grid.num_steps();

        // Instantaneous events snapped to the nearest step boundary.
        let mut instant: Vec<(usize, PiPulse)> = sequence
            .pi_pulses()
            .filter(|p| matches!(p, PiPulse::Instantaneous { .. }))
            .map(|p| {
                let idx = ((p.time() - t_start) / dt).round().max(0.0) as usize;
                (idx.min(n_steps), *p)
            })
            .collect();
        instant.sort_by_key(|(i, _)| *i);

        let resolved = sequence.resolved_pulses();
        let mut state = self.ground_state();
        let mut forward = vec![Complex64::new(0.0, 0.0); n_steps];
        let mut backward = vec![Complex64::new(0.0, 0.0); n_steps];
        let mut backward_engaged = false;
        let mut next_event = 0usize;

        for k in 0..n_steps {
            while next_event < instant.len() && instant[next_event].0 == k {
                let (_, p) = instant[next_event];
                if let PiPulse::Instantaneous {
                    area,
                    phase,
                    direction_flip,
                    ..
                } = p
                {
                    self.apply_instantaneous_pi(&mut state, area, phase, direction_flip);
                    backward_engaged |= direction_flip;
                }
                next_event += 1;
            }
            let t = t_start + k as f64 * dt;
            state.set_time_stamp(t);
            let boundary = if state.emission_direction() == Direction::Forward {
                let t_mid = t + 0.5 * dt;
                resolved
                    .iter()
                    .map(|p| p.amplitude(t_mid))
                    .fold(Complex64::new(0.0, 0.0), |acc, a| acc + a)
            } else {
                Complex64::new(0.0, 0.0)
            };
            let exit = self.step(&mut state, boundary, stark)?;
            match state.emission_direction() {
                Direction::Forward => forward[k] = exit,
                Direction::Backward => backward[k] = exit,
            }
        }
        // Events scheduled exactly at the end of the span.
        while next_event < instant.len() {
            let (_, p) = instant[next_event];
            if let PiPulse::Instantaneous {
                area,
                phase,
                direction_flip,
                ..
            } = p
            {
                self.apply_instantaneous_pi(&mut state, area, phase, direction_flip);
                backward_engaged |= direction_flip;
            }
            next_event += 1;
        }

        let t0 = t_start + 0.5 * dt;
        Ok(RunOutput {
            forward_trace: FieldEnvelope::new(t0, dt, forward, Direction::Forward),
            backward_trace: backward_engaged
                .then(|| FieldEnvelope::new(t0, dt, backward, Direction::Backward)),
            final_state: state,
        })
    }

    fn validate_run(&self, sequence: &PulseSequence, stark: &StarkProfile) -> Result<()> {
        let (t_start, t_end) = self.grid.t_span();
        let dt = self.grid.t_step();
        if let Some((lo, hi)) = sequence.time_extent() {
            if lo < t_start || hi > t_end {
                return Err(Error::InvalidSequence(format!(
                    "sequence extent [{lo:.3}, {hi:.3}] exceeds the grid span \
                     [{t_start:.3}, {t_end:.3}]"
                )));
            }
        }
        for w in stark.windows() {
            if w.t_start < t_start || w.t_end > t_end {
                return Err(Error::InvalidStark(format!(
                    "stark window [{}, {}] exceeds the grid span",
                    w.t_start, w.t_end
                )));
            }
        }
        for p in sequence.resolved_pulses() {
            if dt > p.fwhm / self.config.min_steps_per_fwhm {
                return Err(Error::InvalidSequence(format!(
                    "t_step {} too coarse for a resolved pulse of fwhm {} \
                     (need at least {} steps per fwhm)",
                    dt, p.fwhm, self.config.min_steps_per_fwhm
                )));
            }
            let rabi_step = 2.0 * p.peak_amplitude() * dt;
            if rabi_step > self.config.max_rabi_step {
                return Err(Error::InvalidSequence(format!(
                    "peak Rabi rotation per step {rabi_step:.3} rad exceeds the limit {}",
                    self.config.max_rabi_step
                )));
            }
        }
        // Pi-pulses must keep one step of clearance from gradient windows;
        // whether the experimental window overlapped the pulses is left
        // open, so overlap is rejected rather than guessed at.
        for pi in sequence.pi_pulses() {
            let t = pi.time();
            for w in stark.windows() {
                if t > w.t_start - dt && t < w.t_end + dt {
                    return Err(Error::InvalidSequence(format!(
                        "pi-pulse at {t} overlaps the stark window [{}, {}] \
                         (one t_step of clearance required)",
                        w.t_start, w.t_end
                    )));
                }
            }
        }
        Ok(())
    }

    /// Excited-state fraction `(w + 1)/2` averaged over z, resolved by
    /// detuning, plus the aggregate over a detuning window.
    pub fn excited_state_fraction(
        &self,
        state: &EnsembleState,
        detuning_window: (f64, f64),
    ) -> Result<ExcitedStateFraction> {
        self.check_state(state)?;
        let (lo, hi) = detuning_window;
        let nz = self.grid.num_z();
        let nd = self.grid.num_detunings();
        let bloch = state.bloch();
        let per_detuning: Vec<f64> = (0..nd)
            .map(|k| {
                let sum: f64 = (0..nz).map(|j| 0.5 * (bloch[j * nd + k][2] + 1.0)).sum();
                sum / nz as f64
            })
            .collect();
        let selected: Vec<f64> = self
            .grid
            .detunings()
            .iter()
            .zip(&per_detuning)
            .filter(|(&d, _)| d >= lo && d <= hi)
            .map(|(_, &f)| f)
            .collect();
        if selected.is_empty() {
            return Err(Error::InvalidPlan(format!(
                "no grid detunings inside the window [{lo}, {hi}]"
            )));
        }
        let aggregate = selected.iter().sum::<f64>() / selected.len() as f64;
        Ok(ExcitedStateFraction {
            per_detuning,
            aggregate,
        })
    }
}

/// RK4 update of one Bloch vector under a frozen complex drive `a`.
fn rk4_drive(b: &mut [f64; 3], a: Complex64, dt: f64) {
    let f = |r: [f64; 3]| {
        [
            2.0 * a.im * r[2],
            -2.0 * a.re * r[2],
            2.0 * (a.re * r[1] - a.im * r[0]),
        ]
    };
    let r0 = *b;
    let k1 = f(r0);
    let add = |r: [f64; 3], k: [f64; 3], h: f64| [r[0] + h * k[0], r[1] + h * k[1], r[2] + h * k[2]];
    let k2 = f(add(r0, k1, 0.5 * dt));
    let k3 = f(add(r0, k2, 0.5 * dt));
    let k4 = f(add(r0, k3, dt));
    for i in 0..3 {
        b[i] = r0[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

/// Free-function form of the idealised pi-pulse (no grid needed).
pub fn apply_instantaneous_pi(
    state: &mut EnsembleState,
    area: f64,
    phase: f64,
    direction_flip: bool,
    exec: crate::par::Execution,
) {
    let nd = state.num_detunings();
    if area == std::f64::consts::PI && phase == 0.0 {
        // Exact ideal pulse: conjugation plus inversion, no rounding.
        par::for_each_chunk_mut(exec, state.bloch_mut(), nd, |_, chunk| {
            for b in chunk.iter_mut() {
                b[1] = -b[1];
                b[2] = -b[2];
            }
        });
    } else {
        let (st, ct) = area.sin_cos();
        let (n2, n1) = phase.sin_cos();
        let omc = 1.0 - ct;
        par::for_each_chunk_mut(exec, state.bloch_mut(), nd, |_, chunk| {
            for b in chunk.iter_mut() {
                let (u, v, w) = (b[0], b[1], b[2]);
                let ndot = n1 * u + n2 * v;
                b[0] = u * ct + n2 * w * st + n1 * ndot * omc;
                b[1] = v * ct - n1 * w * st + n2 * ndot * omc;
                b[2] = w * ct + (n1 * v - n2 * u) * st;
            }
        });
    }
    if direction_flip {
        state.set_emission_direction(Direction::Backward);
    }
}

/// Free-function form of the idealised gradient kick.
pub fn apply_stark_kick(
    grid: &SimulationGrid,
    state: &mut EnsembleState,
    phase_per_z: f64,
    exec: crate::par::Execution,
) {
    let nd = grid.num_detunings();
    let z = grid.z().to_vec();
    par::for_each_chunk_mut(exec, state.bloch_mut(), nd, |j, chunk| {
        let (s, c) = (phase_per_z * z[j]).sin_cos();
        for b in chunk.iter_mut() {
            let (u, v) = (b[0], b[1]);
            b[0] = c * u - s * v;
            b[1] = s * u + c * v;
        }
    });
}

/// One-shot convenience wrapper: build a solver and run the sequence.
pub fn run_sequence(
    sequence: &PulseSequence,
    stark: &StarkProfile,
    grid: &SimulationGrid,
    config: SolverConfig,
) -> Result<RunOutput> {
    Solver::new(grid.clone(), config).run_sequence(sequence, stark)
}
