//! Optical pulse descriptions.
//!
//! The pulse area is the total Bloch rotation angle `theta = 2 integral |a| dt`
//! in rad; a resonant pulse of area pi fully inverts an atom. `fwhm` is the
//! full width at half maximum of the pulse *power*.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::field::Direction;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PulseShape {
    Gaussian,
    Square,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpticalPulse {
    pub shape: PulseShape,
    pub center_time: f64,
    pub fwhm: f64,
    /// Pulse area in rad.
    pub area: f64,
    /// Optical phase in rad.
    pub phase: f64,
    pub direction: Direction,
}

impl OpticalPulse {
    pub fn gaussian(center_time: f64, fwhm: f64, area: f64) -> Result<Self> {
        Self::new(PulseShape::Gaussian, center_time, fwhm, area, 0.0)
    }

    pub fn square(center_time: f64, fwhm: f64, area: f64) -> Result<Self> {
        Self::new(PulseShape::Square, center_time, fwhm, area, 0.0)
    }

    pub fn new(
        shape: PulseShape,
        center_time: f64,
        fwhm: f64,
        area: f64,
        phase: f64,
    ) -> Result<Self> {
        if !(fwhm > 0.0) {
            return Err(Error::InvalidPulse(format!(
                "fwhm must be positive (got {fwhm})"
            )));
        }
        if !(area >= 0.0) {
            return Err(Error::InvalidPulse(format!(
                "area must be non-negative (got {area})"
            )));
        }
        Ok(OpticalPulse {
            shape,
            center_time,
            fwhm,
            area,
            phase,
            direction: Direction::Forward,
        })
    }

    pub fn with_phase(mut self, phase: f64) -> Self {
        self.phase = phase;
        self
    }

    /// Integral of the unit-peak envelope over all time.
    fn envelope_integral(&self) -> f64 {
        match self.shape {
            // amplitude envelope exp(-2 ln2 t^2 / fwhm^2)
            PulseShape::Gaussian => self.fwhm * (PI / (2.0 * std::f64::consts::LN_2)).sqrt(),
            PulseShape::Square => self.fwhm,
        }
    }

    /// Peak Rabi-type amplitude, rad/us (so that `2 integral a dt = area`).
    pub fn peak_amplitude(&self) -> f64 {
        self.area / (2.0 * self.envelope_integral())
    }

    /// Complex envelope at time `t`.
    pub fn amplitude(&self, t: f64) -> Complex64 {
        let x = t - self.center_time;
        let env = match self.shape {
            PulseShape::Gaussian => {
                (-2.0 * std::f64::consts::LN_2 * x * x / (self.fwhm * self.fwhm)).exp()
            }
            PulseShape::Square => {
                if x.abs() <= 0.5 * self.fwhm {
                    1.0
                } else {
                    0.0
                }
            }
        };
        Complex64::from_polar(self.peak_amplitude() * env, self.phase)
    }

    /// FWHM of the power spectrum, rad/us.
    pub fn bandwidth(&self) -> f64 {
        match self.shape {
            // Gaussian time-bandwidth product (power FWHMs): dt * dw = 4 ln2.
            PulseShape::Gaussian => 4.0 * std::f64::consts::LN_2 / self.fwhm,
            // sinc^2 power spectrum: dw ~ 2 pi * 0.886 / T.
            PulseShape::Square => 2.0 * PI * 0.8859 / self.fwhm,
        }
    }

    /// Pulse energy `integral |a|^2 dt` in closed form.
    pub fn energy(&self) -> f64 {
        let a0 = self.peak_amplitude();
        match self.shape {
            PulseShape::Gaussian => {
                a0 * a0 * self.fwhm * (PI / (4.0 * std::f64::consts::LN_2)).sqrt()
            }
            PulseShape::Square => a0 * a0 * self.fwhm,
        }
    }

    /// Interval outside which the envelope is negligible.
    pub fn support(&self) -> (f64, f64) {
        let half = match self.shape {
            PulseShape::Gaussian => 3.0 * self.fwhm,
            PulseShape::Square => 0.5 * self.fwhm,
        };
        (self.center_time - half, self.center_time + half)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn area_is_twice_the_amplitude_integral() {
        // Riemann-sum the envelope and compare against the closed form.
        let p = OpticalPulse::gaussian(10.0, 1.8, PI).unwrap();
        let dt = 1e-4;
        let sum: f64 = (0..200_000)
            .map(|k| p.amplitude(k as f64 * dt).norm() * dt)
            .sum();
        assert!((2.0 * sum - PI).abs() < 1e-6);

        let q = OpticalPulse::square(10.0, 2.0, PI).unwrap();
        assert!((2.0 * q.peak_amplitude() * 2.0 - PI).abs() < 1e-12);
    }

    #[test]
    fn energy_matches_quadrature() {
        let p = OpticalPulse::gaussian(10.0, 1.8, 0.3).unwrap();
        let dt = 1e-4;
        let sum: f64 = (0..200_000)
            .map(|k| p.amplitude(k as f64 * dt).norm_sqr() * dt)
            .sum();
        assert!((sum - p.energy()).abs() < 1e-9);
    }

    #[test]
    fn rejects_degenerate_parameters() {
        assert!(OpticalPulse::gaussian(0.0, 0.0, 1.0).is_err());
        assert!(OpticalPulse::gaussian(0.0, 1.0, -1.0).is_err());
    }
}
