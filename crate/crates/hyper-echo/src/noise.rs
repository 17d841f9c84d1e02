//! Shot-ensemble simulation with imperfect pi-pulses and the mode-matched
//! heterodyne variance estimator.
//!
//! The detector model is phase-sensitive heterodyne detection: each shot
//! records the real beat signal `Re[a(t) exp(i w_b t)]` at the exit face
//! plus synthetic white noise standing in for the shot-noise floor (the
//! semiclassical fields carry no vacuum fluctuations of their own). Each
//! trace is projected onto a temporal mode at the beat frequency; the
//! variance of that amplitude across shots, normalised by the same estimator
//! applied in the quiet region before the first pi-pulse, is the reported
//! noise level.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::model::SpectralMask;
use crate::par;
use crate::protocol::ExperimentPlan;
use crate::solver::{RunOutput, Solver};

/// Distribution of per-shot pulse-area multipliers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AreaDistribution {
    /// Every pulse has exactly area pi.
    Ideal,
    /// Multiplier density proportional to `1/m` on `[min_multiplier, 1]`,
    /// as produced by uniform sampling of a Gaussian transverse intensity
    /// profile over the detection area.
    GaussianBeam { min_multiplier: f64 },
}

impl AreaDistribution {
    fn sample(&self, rng: &mut impl Rng) -> f64 {
        match *self {
            AreaDistribution::Ideal => 1.0,
            AreaDistribution::GaussianBeam { min_multiplier } => {
                let u: f64 = rng.gen();
                min_multiplier.powf(1.0 - u)
            }
        }
    }
}

/// Sources of excess noise applied per shot.
#[derive(Debug, Clone, PartialEq)]
pub struct ImperfectionModel {
    pub pulse_area_distribution: AreaDistribution,
    pub spectral_mask: SpectralMask,
    /// Variance of the white detector noise per trace sample.
    pub detector_noise_variance: f64,
    pub seed: u64,
}

impl ImperfectionModel {
    /// Perfect pulses, flat line, no detector noise: a silent detector.
    pub fn ideal(seed: u64) -> Self {
        ImperfectionModel {
            pulse_area_distribution: AreaDistribution::Ideal,
            spectral_mask: SpectralMask::Flat,
            detector_noise_variance: 0.0,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if let AreaDistribution::GaussianBeam { min_multiplier } = self.pulse_area_distribution {
            if !(min_multiplier > 0.0 && min_multiplier <= 1.0) {
                return Err(Error::NoiseEstimation(format!(
                    "min_multiplier must lie in (0, 1] (got {min_multiplier})"
                )));
            }
        }
        if !(self.detector_noise_variance >= 0.0) {
            return Err(Error::NoiseEstimation(
                "detector_noise_variance must be non-negative".into(),
            ));
        }
        Ok(())
    }
}

/// Temporal mode the traces are projected onto.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemporalMode {
    pub center: f64,
    pub fwhm: f64,
}

impl TemporalMode {
    fn envelope(&self, t: f64) -> f64 {
        let x = t - self.center;
        (-2.0 * std::f64::consts::LN_2 * x * x / (self.fwhm * self.fwhm)).exp()
    }
}

/// One simulated detector record.
#[derive(Debug, Clone)]
pub struct ShotRecord {
    pub t0: f64,
    pub dt: f64,
    /// Real heterodyne signal per sample.
    pub samples: Vec<f64>,
    pub area_multiplier: f64,
    /// Demodulated amplitude in the default mode this batch was taken with.
    pub mode_amplitude: Complex64,
}

impl ShotRecord {
    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    /// Project the trace onto a temporal mode at the beat frequency:
    /// `s = sum_t y(t) env(t) exp(-i w_b t) dt`.
    pub fn demodulate(&self, mode: &TemporalMode, beat_frequency: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, &y) in self.samples.iter().enumerate() {
            let t = self.time(k);
            let env = mode.envelope(t);
            if env < 1e-12 {
                continue;
            }
            acc += Complex64::from_polar(y * env, -beat_frequency * t);
        }
        acc * self.dt
    }
}

/// Variance estimate of a temporal mode across shots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeEstimate {
    pub mode_variance: f64,
    pub shot_noise_variance: f64,
    pub normalized_variance: f64,
    pub shots: usize,
    /// One relative standard error of the variance, `sqrt(2 / N)`.
    pub std_error: f64,
}

/// Fig-8-style curve: variance of a sliding mode vs its centre time.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseTimeline {
    pub points: Vec<(f64, f64)>,
    pub shot_noise_floor: f64,
}

fn child_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&index.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Simulate `n` independent shots of the plan's sequence with its input
/// pulses stripped. Per shot a pulse-area multiplier is drawn, the solver is
/// run on the mask-shaped line, and white detector noise is added to the
/// heterodyne record. Shot `i` always uses the same derived seed, so runs
/// are reproducible and arms sharing a model seed are paired shot-for-shot.
pub fn simulate_shots(
    n: usize,
    plan: &ExperimentPlan,
    model: &ImperfectionModel,
    default_mode: &TemporalMode,
    beat_frequency: f64,
) -> Result<Vec<ShotRecord>> {
    if n < 2 {
        return Err(Error::NoiseEstimation(format!(
            "need at least 2 shots (got {n})"
        )));
    }
    model.validate()?;
    if plan.values.len() != 1 {
        return Err(Error::NoiseEstimation(
            "noise runs use a single-value plan, not a sweep".into(),
        ));
    }
    let row = plan.noise_row()?;
    if row.sequence.has_inputs() {
        return Err(Error::NoiseEstimation(
            "noise shots are recorded with no input pulse; strip the input from the plan".into(),
        ));
    }
    let grid = row.grid.masked(&model.spectral_mask);
    let sigma = model.detector_noise_variance.sqrt();
    // Shots are the parallel unit; each solver runs sequentially inside its
    // worker. Results are bitwise identical either way.
    let shot_config = plan.solver.sequential();

    par::try_map_indexed(plan.solver.execution, n, |i| {
        let mut rng = child_rng(model.seed, i as u64);
        let multiplier = model.pulse_area_distribution.sample(&mut rng);
        let sequence = row.sequence.with_pi_area_scale(multiplier);
        let output: RunOutput =
            Solver::new(grid.clone(), shot_config).run_sequence(&sequence, &row.stark)?;
        let trace = &output.forward_trace;
        let normal = Normal::new(0.0, 1.0).map_err(|e| Error::NoiseEstimation(e.to_string()))?;
        let samples: Vec<f64> = trace
            .samples()
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let t = trace.time(k);
                let beat = Complex64::from_polar(1.0, beat_frequency * t);
                let signal = (a * beat).re;
                if sigma > 0.0 {
                    signal + sigma * normal.sample(&mut rng)
                } else {
                    signal
                }
            })
            .collect();
        let mut record = ShotRecord {
            t0: trace.t0(),
            dt: trace.dt(),
            samples,
            area_multiplier: multiplier,
            mode_amplitude: Complex64::new(0.0, 0.0),
        };
        record.mode_amplitude = record.demodulate(default_mode, beat_frequency);
        Ok(record)
    })
}

fn complex_variance(amplitudes: &[Complex64]) -> f64 {
    let n = amplitudes.len() as f64;
    let mean = amplitudes.iter().sum::<Complex64>() / n;
    amplitudes.iter().map(|s| (s - mean).norm_sqr()).sum::<f64>() / (n - 1.0)
}

/// Variance of the mode amplitude across shots, normalised by the identical
/// estimator evaluated in the quiet region centred at `shot_noise_center`
/// (before the first pi-pulse).
pub fn mode_variance(
    shots: &[ShotRecord],
    mode: &TemporalMode,
    beat_frequency: f64,
    shot_noise_center: f64,
) -> Result<ModeEstimate> {
    if shots.len() < 2 {
        return Err(Error::NoiseEstimation("need at least 2 shots".into()));
    }
    let span_end = shots[0].time(shots[0].samples.len().saturating_sub(1));
    for c in [mode.center, shot_noise_center] {
        if c < shots[0].t0 || c > span_end {
            return Err(Error::NoiseEstimation(format!(
                "mode centre {c} lies outside the trace span [{}, {span_end}]",
                shots[0].t0
            )));
        }
    }
    let signal: Vec<Complex64> = shots
        .iter()
        .map(|s| s.demodulate(mode, beat_frequency))
        .collect();
    let reference_mode = TemporalMode {
        center: shot_noise_center,
        fwhm: mode.fwhm,
    };
    let reference: Vec<Complex64> = shots
        .iter()
        .map(|s| s.demodulate(&reference_mode, beat_frequency))
        .collect();
    let mode_var = complex_variance(&signal);
    let shot_noise_var = complex_variance(&reference);
    let normalized = if mode_var == 0.0 && shot_noise_var == 0.0 {
        // Silent detector (ideal model, no injected floor): no excess noise.
        0.0
    } else if shot_noise_var == 0.0 {
        return Err(Error::NoiseEstimation(
            "zero shot-noise variance; add a detector noise floor to normalise against".into(),
        ));
    } else {
        mode_var / shot_noise_var
    };
    Ok(ModeEstimate {
        mode_variance: mode_var,
        shot_noise_variance: shot_noise_var,
        normalized_variance: normalized,
        shots: shots.len(),
        std_error: (2.0 / shots.len() as f64).sqrt(),
    })
}

/// Slide the mode centre across the trace and report the raw variance at
/// each position, plus the shot-noise floor from the quiet reference.
pub fn noise_timeline(
    shots: &[ShotRecord],
    envelope_fwhm: f64,
    beat_frequency: f64,
    step: f64,
    shot_noise_center: f64,
) -> Result<NoiseTimeline> {
    if shots.len() < 2 {
        return Err(Error::NoiseEstimation("need at least 2 shots".into()));
    }
    if !(step > 0.0) {
        return Err(Error::NoiseEstimation("timeline step must be positive".into()));
    }
    let t0 = shots[0].t0;
    let t_end = shots[0].time(shots[0].samples.len() - 1);
    let margin = envelope_fwhm;
    let mut points = Vec::new();
    let mut center = t0 + margin;
    while center <= t_end - margin {
        let mode = TemporalMode {
            center,
            fwhm: envelope_fwhm,
        };
        let amplitudes: Vec<Complex64> = shots
            .iter()
            .map(|s| s.demodulate(&mode, beat_frequency))
            .collect();
        points.push((center, complex_variance(&amplitudes)));
        center += step;
    }
    let reference = TemporalMode {
        center: shot_noise_center,
        fwhm: envelope_fwhm,
    };
    let floor_amplitudes: Vec<Complex64> = shots
        .iter()
        .map(|s| s.demodulate(&reference, beat_frequency))
        .collect();
    Ok(NoiseTimeline {
        points,
        shot_noise_floor: complex_variance(&floor_amplitudes),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplier_density_follows_one_over_m() {
        let dist = AreaDistribution::GaussianBeam {
            min_multiplier: 0.5,
        };
        let mut rng = child_rng(7, 0);
        let n = 200_000;
        let samples: Vec<f64> = (0..n).map(|_| dist.sample(&mut rng)).collect();
        assert!(samples.iter().all(|&m| (0.5..=1.0).contains(&m)));
        // For p(m) ~ 1/m, the fraction below m0 is ln(m0/0.5)/ln(2).
        let below: f64 = samples.iter().filter(|&&m| m < 0.7).count() as f64 / n as f64;
        let expect = (0.7f64 / 0.5).ln() / 2.0f64.ln();
        assert!((below - expect).abs() < 0.01, "{below} vs {expect}");
    }

    #[test]
    fn child_seeds_are_stable_and_distinct() {
        let a: u64 = child_rng(1, 0).gen();
        let b: u64 = child_rng(1, 0).gen();
        let c: u64 = child_rng(1, 1).gen();
        let d: u64 = child_rng(2, 0).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn variance_of_identical_amplitudes_is_zero() {
        let v = complex_variance(&[Complex64::new(1.0, 2.0); 5]);
        assert_eq!(v, 0.0);
    }

    #[test]
    fn demodulation_picks_up_a_matched_tone() {
        let mode = TemporalMode {
            center: 10.0,
            fwhm: 2.0,
        };
        let beat = 30.0;
        let dt = 0.01;
        let n = 2000;
        let samples: Vec<f64> = (0..n)
            .map(|k| {
                let t = k as f64 * dt;
                (beat * t).cos() * mode.envelope(t)
            })
            .collect();
        let shot = ShotRecord {
            t0: 0.0,
            dt,
            samples,
            area_multiplier: 1.0,
            mode_amplitude: Complex64::new(0.0, 0.0),
        };
        let s = shot.demodulate(&mode, beat);
        // cos = (e^{i w t} + e^{-i w t})/2; the matched rotating term
        // integrates the squared envelope.
        let expect: f64 = (0..n)
            .map(|k| mode.envelope(k as f64 * dt).powi(2))
            .sum::<f64>()
            * dt
            / 2.0;
        assert!((s.re - expect).abs() < 0.02 * expect);
        assert!(s.im.abs() < 0.01 * expect);
    }
}
