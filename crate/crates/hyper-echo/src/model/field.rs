//! Complex slowly-varying optical envelopes sampled on a uniform time grid.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Propagation direction of an optical field or pulse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Direction {
    #[default]
    Forward,
    Backward,
}

/// A complex field envelope `a(t)` at a fixed position (typically a sample
/// face), sampled at `t0 + k * dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldEnvelope {
    t0: f64,
    dt: f64,
    samples: Vec<Complex64>,
    direction: Direction,
    /// Heterodyne beat frequency in rad/us; only used at detection.
    carrier_offset: f64,
}

impl FieldEnvelope {
    pub fn new(t0: f64, dt: f64, samples: Vec<Complex64>, direction: Direction) -> Self {
        FieldEnvelope {
            t0,
            dt,
            samples,
            direction,
            carrier_offset: 0.0,
        }
    }

    pub fn with_carrier_offset(mut self, beat: f64) -> Self {
        self.carrier_offset = beat;
        self
    }

    /// Sample a time-dependent function onto a fresh envelope.
    pub fn from_fn(
        t0: f64,
        dt: f64,
        n: usize,
        direction: Direction,
        f: impl Fn(f64) -> Complex64,
    ) -> Self {
        let samples = (0..n).map(|k| f(t0 + k as f64 * dt)).collect();
        FieldEnvelope::new(t0, dt, samples, direction)
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    pub fn t_end(&self) -> f64 {
        self.time(self.samples.len().saturating_sub(1))
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn carrier_offset(&self) -> f64 {
        self.carrier_offset
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Total energy `sum |a|^2 dt`.
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.dt
    }

    /// Time-integrated magnitude `sum |a| dt`.
    pub fn area(&self) -> f64 {
        self.samples.iter().map(|a| a.norm()).sum::<f64>() * self.dt
    }

    fn window_range(&self, center: f64, halfwidth: f64) -> Result<std::ops::Range<usize>> {
        let lo = center - halfwidth;
        let hi = center + halfwidth;
        if lo < self.t0 - 0.5 * self.dt || hi > self.t_end() + 0.5 * self.dt {
            return Err(Error::InvalidPlan(format!(
                "window [{lo:.3}, {hi:.3}] exceeds trace span [{:.3}, {:.3}]",
                self.t0,
                self.t_end()
            )));
        }
        let first = ((lo - self.t0) / self.dt).ceil().max(0.0) as usize;
        let last = (((hi - self.t0) / self.dt).floor() as usize).min(self.samples.len() - 1);
        Ok(first..last + 1)
    }

    pub fn energy_in_window(&self, center: f64, halfwidth: f64) -> Result<f64> {
        let r = self.window_range(center, halfwidth)?;
        Ok(self.samples[r].iter().map(|a| a.norm_sqr()).sum::<f64>() * self.dt)
    }

    pub fn area_in_window(&self, center: f64, halfwidth: f64) -> Result<f64> {
        let r = self.window_range(center, halfwidth)?;
        Ok(self.samples[r].iter().map(|a| a.norm()).sum::<f64>() * self.dt)
    }

    /// Time and magnitude of the largest sample inside the window.
    pub fn peak_in_window(&self, center: f64, halfwidth: f64) -> Result<(f64, f64)> {
        let r = self.window_range(center, halfwidth)?;
        let mut best = (self.time(r.start), 0.0);
        for k in r {
            let m = self.samples[k].norm();
            if m > best.1 {
                best = (self.time(k), m);
            }
        }
        Ok(best)
    }

    /// Normalised real overlap with `other` over a window, a shape-and-sign
    /// fidelity in `[-1, 1]`. Both envelopes must share the time grid.
    pub fn overlap_in_window(
        &self,
        other: &FieldEnvelope,
        center: f64,
        halfwidth: f64,
    ) -> Result<f64> {
        if (self.dt - other.dt).abs() > 1e-12 {
            return Err(Error::InvalidPlan(
                "overlap requires matching sample steps".into(),
            ));
        }
        let r = self.window_range(center, halfwidth)?;
        let mut inner = Complex64::new(0.0, 0.0);
        let mut n_self = 0.0;
        let mut n_other = 0.0;
        for k in r {
            let t = self.time(k);
            let ko = ((t - other.t0) / other.dt).round() as isize;
            if ko < 0 || ko as usize >= other.len() {
                continue;
            }
            let a = self.samples[k];
            let b = other.samples[ko as usize];
            inner += a * b.conj();
            n_self += a.norm_sqr();
            n_other += b.norm_sqr();
        }
        if n_self == 0.0 || n_other == 0.0 {
            return Ok(0.0);
        }
        Ok(inner.re / (n_self.sqrt() * n_other.sqrt()))
    }

    pub fn scaled(&self, c: Complex64) -> FieldEnvelope {
        let mut out = self.clone();
        for a in &mut out.samples {
            *a *= c;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(t0: f64, dt: f64, n: usize, center: f64) -> FieldEnvelope {
        FieldEnvelope::from_fn(t0, dt, n, Direction::Forward, |t| {
            Complex64::new((-(t - center).powi(2)).exp(), 0.0)
        })
    }

    #[test]
    fn energy_is_linear_in_intensity() {
        let f = gaussian(0.0, 0.01, 1000, 5.0);
        let g = f.scaled(Complex64::new(2.0, 0.0));
        assert!((g.energy() - 4.0 * f.energy()).abs() < 1e-12);
        assert!((g.area() - 2.0 * f.area()).abs() < 1e-12);
    }

    #[test]
    fn window_rejects_out_of_span() {
        let f = gaussian(0.0, 0.01, 1000, 5.0);
        assert!(f.energy_in_window(5.0, 3.0).is_ok());
        assert!(f.energy_in_window(9.9, 3.0).is_err());
    }

    #[test]
    fn overlap_detects_sign() {
        let f = gaussian(0.0, 0.01, 1000, 5.0);
        let g = f.scaled(Complex64::new(-0.5, 0.0));
        let o = f.overlap_in_window(&g, 5.0, 3.0).unwrap();
        assert!((o + 1.0).abs() < 1e-12);
    }

    #[test]
    fn peak_finds_the_center() {
        let f = gaussian(0.0, 0.01, 1000, 5.0);
        let (t, _) = f.peak_in_window(5.0, 2.0).unwrap();
        assert!((t - 5.0).abs() <= 0.01);
    }
}
