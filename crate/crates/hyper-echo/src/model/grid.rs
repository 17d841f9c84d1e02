//! Spatial/spectral grid for the atomic ensemble.
//!
//! Positions are dimensionless, `z in [0, 1]` (the sample length is scaled
//! out, absorption enters as the product `alpha_l`). Detunings are angular
//! frequencies in rad/us on a flat (top-hat) inhomogeneous line, optionally
//! shaped by a [`SpectralMask`]. Each detuning sample carries a quadrature
//! weight chosen so that the linearised field equation reproduces amplitude
//! absorption `alpha_l / 2` per unit length (Beer's law), i.e. the weights
//! are `alpha_l / (2 pi) * dDelta` with trapezoid end-point halving.

use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// A Gaussian dip in the inhomogeneous line's spectral density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianHole {
    /// Centre detuning, rad/us.
    pub center: f64,
    /// Half width at half maximum of the hole, rad/us.
    pub hwhm: f64,
    /// Fractional depth in `[0, 1]`; 1 burns the line to zero at the centre.
    pub depth: f64,
}

/// Multiplicative structure applied to the flat line density.
///
/// The default line is flat (`Flat`); holes model the spectral structure
/// left behind by optical pumping, which is what turns an imperfect pulse
/// into a long-lived free induction decay.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum SpectralMask {
    #[default]
    Flat,
    Holes(Vec<GaussianHole>),
}

impl SpectralMask {
    /// Evaluate the mask at a detuning, clamped to be non-negative.
    pub fn eval(&self, detuning: f64) -> f64 {
        match self {
            SpectralMask::Flat => 1.0,
            SpectralMask::Holes(holes) => {
                let mut m = 1.0;
                for h in holes {
                    // Gaussian with the requested HWHM.
                    let sigma = h.hwhm / (2.0 * std::f64::consts::LN_2).sqrt();
                    let x = (detuning - h.center) / sigma;
                    m -= h.depth * (-0.5 * x * x).exp();
                }
                m.max(0.0)
            }
        }
    }
}

/// Discretisation of the ensemble: positions, detunings, weights and the
/// fixed time step used by the solver.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationGrid {
    z: Vec<f64>,
    detunings: Vec<f64>,
    weights: Vec<f64>,
    alpha_l: f64,
    t_step: f64,
    t_start: f64,
    t_end: f64,
}

/// Build a grid with `num_z` positions on `[0, 1]`, `num_detunings` samples
/// of a flat line on `[-detuning_halfwidth, +detuning_halfwidth]`, and a
/// fixed step `t_step` over `t_span`.
///
/// `alpha_l` is the dimensionless optical depth across the whole sample;
/// it scales the detuning weights so the weak-field energy transmission is
/// `exp(-alpha_l)`.
pub fn make_grid(
    num_z: usize,
    num_detunings: usize,
    detuning_halfwidth: f64,
    t_step: f64,
    t_span: (f64, f64),
    alpha_l: f64,
) -> Result<SimulationGrid> {
    if num_z < 2 || num_detunings < 2 {
        return Err(Error::InvalidGrid(format!(
            "need at least 2 points per axis (got num_z = {num_z}, num_detunings = {num_detunings})"
        )));
    }
    if !(detuning_halfwidth > 0.0) {
        return Err(Error::InvalidGrid(format!(
            "detuning_halfwidth must be positive (got {detuning_halfwidth})"
        )));
    }
    if !(t_step > 0.0) {
        return Err(Error::InvalidGrid(format!(
            "t_step must be positive (got {t_step})"
        )));
    }
    let (t_start, t_end) = t_span;
    if !(t_start < t_end) {
        return Err(Error::InvalidGrid(format!(
            "t_span must be a non-empty interval (got [{t_start}, {t_end}])"
        )));
    }
    if t_start > 0.0 || t_end < 0.0 {
        return Err(Error::InvalidGrid(format!(
            "t_span must cover t = 0 (got [{t_start}, {t_end}])"
        )));
    }
    if !(alpha_l >= 0.0) {
        return Err(Error::InvalidGrid(format!(
            "alpha_l must be non-negative (got {alpha_l})"
        )));
    }

    let z: Vec<f64> = (0..num_z)
        .map(|j| j as f64 / (num_z - 1) as f64)
        .collect();
    let d_delta = 2.0 * detuning_halfwidth / (num_detunings - 1) as f64;
    let detunings: Vec<f64> = (0..num_detunings)
        .map(|k| -detuning_halfwidth + k as f64 * d_delta)
        .collect();
    // alpha_l/(2 pi) * integral dDelta, trapezoid rule on the flat line.
    let base = alpha_l / TAU * d_delta;
    let weights: Vec<f64> = (0..num_detunings)
        .map(|k| {
            if k == 0 || k == num_detunings - 1 {
                0.5 * base
            } else {
                base
            }
        })
        .collect();

    Ok(SimulationGrid {
        z,
        detunings,
        weights,
        alpha_l,
        t_step,
        t_start,
        t_end,
    })
}

impl SimulationGrid {
    pub fn num_z(&self) -> usize {
        self.z.len()
    }

    pub fn num_detunings(&self) -> usize {
        self.detunings.len()
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn detunings(&self) -> &[f64] {
        &self.detunings
    }

    /// Quadrature weights (already scaled by `alpha_l / 2 pi` and any mask).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn alpha_l(&self) -> f64 {
        self.alpha_l
    }

    pub fn t_step(&self) -> f64 {
        self.t_step
    }

    pub fn t_span(&self) -> (f64, f64) {
        (self.t_start, self.t_end)
    }

    pub fn detuning_halfwidth(&self) -> f64 {
        self.detunings.last().copied().unwrap_or(0.0)
    }

    pub fn num_steps(&self) -> usize {
        ((self.t_end - self.t_start) / self.t_step).round() as usize
    }

    /// Time after which the discrete detuning comb rephases and the ensemble
    /// spuriously "revives". Simulations must finish well before this.
    pub fn revival_time(&self) -> f64 {
        let d_delta = self.detunings[1] - self.detunings[0];
        TAU / d_delta
    }

    /// Return a copy with the spectral density reshaped by `mask`.
    pub fn masked(&self, mask: &SpectralMask) -> SimulationGrid {
        let mut out = self.clone();
        for (w, &d) in out.weights.iter_mut().zip(&self.detunings) {
            *w *= mask.eval(d);
        }
        out
    }

    /// Non-fatal soundness checks against the sequence content this grid is
    /// about to carry: the flat-line guideline (span at least 20x the widest
    /// pulse bandwidth) and the revival-time margin.
    pub fn soundness_warnings(&self, widest_pulse_bandwidth: f64) -> Vec<String> {
        let mut warnings = Vec::new();
        if widest_pulse_bandwidth > 0.0
            && self.detuning_halfwidth() < 20.0 * widest_pulse_bandwidth
        {
            warnings.push(format!(
                "detuning halfwidth {:.3} rad/us is below 20x the widest pulse bandwidth \
                 ({:.3} rad/us); the flat-line assumption is degraded",
                self.detuning_halfwidth(),
                widest_pulse_bandwidth
            ));
        }
        let revival = self.revival_time();
        if revival < 1.25 * (self.t_end - self.t_start) {
            warnings.push(format!(
                "detuning grid revival time {:.1} us is too close to the simulated span \
                 {:.1} us; increase num_detunings",
                revival,
                self.t_end - self.t_start
            ));
        }
        warnings
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_grid() {
        let g = make_grid(2, 2, 1.0, 0.1, (0.0, 1.0), 1.0).unwrap();
        assert_eq!(g.z(), &[0.0, 1.0]);
        assert_eq!(g.num_detunings(), 2);
        assert_eq!(g.detunings(), &[-1.0, 1.0]);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(make_grid(1, 2, 1.0, 0.1, (0.0, 1.0), 1.0).is_err());
        assert!(make_grid(2, 2, 0.0, 0.1, (0.0, 1.0), 1.0).is_err());
        assert!(make_grid(2, 2, 1.0, -0.1, (0.0, 1.0), 1.0).is_err());
        assert!(make_grid(2, 2, 1.0, 0.1, (1.0, 2.0), 1.0).is_err());
        assert!(make_grid(2, 2, 1.0, 0.1, (2.0, 1.0), 1.0).is_err());
        assert!(make_grid(2, 2, 1.0, 0.1, (0.0, 1.0), -1.0).is_err());
    }

    #[test]
    fn weights_integrate_the_flat_line() {
        let g = make_grid(4, 101, 10.0, 0.1, (0.0, 1.0), 2.0).unwrap();
        let total: f64 = g.weights().iter().sum();
        // Sum of weights = alpha_l/(2 pi) * full line width.
        let expect = 2.0 / TAU * 20.0;
        assert!((total - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn narrow_line_is_flagged() {
        let g = make_grid(4, 101, 3.0, 0.1, (0.0, 1.0), 1.0).unwrap();
        let w = g.soundness_warnings(1.5);
        assert_eq!(w.len(), 1);
        assert!(w[0].contains("20x"));
        let g = make_grid(4, 801, 31.0, 0.1, (0.0, 1.0), 1.0).unwrap();
        assert!(g.soundness_warnings(1.5).is_empty());
    }

    #[test]
    fn mask_carves_a_hole() {
        let mask = SpectralMask::Holes(vec![GaussianHole {
            center: 0.0,
            hwhm: 1.0,
            depth: 0.5,
        }]);
        assert!((mask.eval(0.0) - 0.5).abs() < 1e-15);
        assert!((mask.eval(1.0) - 0.75).abs() < 1e-15);
        assert!((mask.eval(50.0) - 1.0).abs() < 1e-12);
        let g = make_grid(4, 101, 10.0, 0.1, (0.0, 1.0), 1.0).unwrap();
        let gm = g.masked(&mask);
        let mid = 50; // detuning 0
        assert!((gm.weights()[mid] - 0.5 * g.weights()[mid]).abs() < 1e-15);
    }
}
