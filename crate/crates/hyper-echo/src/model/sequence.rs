//! Timed pulse sequences: weak inputs, rephasing pi-pulses and their
//! idealisation.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::field::Direction;
use crate::model::pulse::OpticalPulse;

/// How a rephasing pi-pulse is realised.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PiPulse {
    /// Idealised delta-like pulse: coherence conjugation plus inversion,
    /// applied between solver steps.
    Instantaneous {
        time: f64,
        /// Rotation angle in rad (pi for an ideal pulse).
        area: f64,
        /// Rotation-axis phase in rad.
        phase: f64,
        /// Counter-propagating pulse: subsequent emission is re-tagged to the
        /// backward direction and the solver switches to the backward stage.
        direction_flip: bool,
    },
    /// Finite-duration pulse fed through the boundary and propagated.
    Resolved(OpticalPulse),
}

impl PiPulse {
    pub fn instantaneous(time: f64) -> Self {
        PiPulse::Instantaneous {
            time,
            area: PI,
            phase: 0.0,
            direction_flip: false,
        }
    }

    pub fn instantaneous_flipped(time: f64) -> Self {
        PiPulse::Instantaneous {
            time,
            area: PI,
            phase: 0.0,
            direction_flip: true,
        }
    }

    pub fn time(&self) -> f64 {
        match self {
            PiPulse::Instantaneous { time, .. } => *time,
            PiPulse::Resolved(p) => p.center_time,
        }
    }

    pub fn flips_direction(&self) -> bool {
        matches!(self, PiPulse::Instantaneous {
            direction_flip: true,
            ..
        })
    }

    /// Scale the pulse area (imperfect-pulse modelling).
    pub fn scaled_area(&self, factor: f64) -> PiPulse {
        match *self {
            PiPulse::Instantaneous {
                time,
                area,
                phase,
                direction_flip,
            } => PiPulse::Instantaneous {
                time,
                area: area * factor,
                phase,
                direction_flip,
            },
            PiPulse::Resolved(p) => PiPulse::Resolved(OpticalPulse {
                area: p.area * factor,
                ..p
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SequenceEvent {
    Input(OpticalPulse),
    Pi(PiPulse),
}

impl SequenceEvent {
    pub fn time(&self) -> f64 {
        match self {
            SequenceEvent::Input(p) => p.center_time,
            SequenceEvent::Pi(p) => p.time(),
        }
    }
}

/// An ordered series of optical events making up one shot.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PulseSequence {
    events: Vec<SequenceEvent>,
}

impl PulseSequence {
    pub fn new(mut events: Vec<SequenceEvent>) -> Result<Self> {
        events.sort_by(|a, b| a.time().total_cmp(&b.time()));
        let seq = PulseSequence { events };
        seq.validate()?;
        Ok(seq)
    }

    fn validate(&self) -> Result<()> {
        let mut backward = false;
        for e in &self.events {
            match e {
                SequenceEvent::Input(p) => {
                    if backward {
                        return Err(Error::InvalidSequence(
                            "input pulse after a direction-flip pi-pulse".into(),
                        ));
                    }
                    if p.direction == Direction::Backward {
                        return Err(Error::InvalidSequence(
                            "backward-propagating input pulses are not supported".into(),
                        ));
                    }
                }
                SequenceEvent::Pi(p) => {
                    if backward {
                        return Err(Error::InvalidSequence(
                            "optical events after a direction-flip pi-pulse".into(),
                        ));
                    }
                    if let PiPulse::Resolved(pulse) = p {
                        if pulse.direction == Direction::Backward {
                            return Err(Error::InvalidSequence(
                                "resolved counter-propagating pi-pulses are not supported; \
                                 use an instantaneous direction-flip pulse"
                                    .into(),
                            ));
                        }
                    }
                    if p.flips_direction() {
                        backward = true;
                    }
                }
            }
        }
        Ok(())
    }

    pub fn events(&self) -> &[SequenceEvent] {
        &self.events
    }

    pub fn input_pulses(&self) -> impl Iterator<Item = &OpticalPulse> {
        self.events.iter().filter_map(|e| match e {
            SequenceEvent::Input(p) => Some(p),
            _ => None,
        })
    }

    pub fn pi_pulses(&self) -> impl Iterator<Item = &PiPulse> {
        self.events.iter().filter_map(|e| match e {
            SequenceEvent::Pi(p) => Some(p),
            _ => None,
        })
    }

    pub fn pi_times(&self) -> Vec<f64> {
        self.pi_pulses().map(|p| p.time()).collect()
    }

    /// All finite-duration pulses that enter through the boundary.
    pub fn resolved_pulses(&self) -> Vec<OpticalPulse> {
        self.events
            .iter()
            .filter_map(|e| match e {
                SequenceEvent::Input(p) => Some(*p),
                SequenceEvent::Pi(PiPulse::Resolved(p)) => Some(*p),
                _ => None,
            })
            .collect()
    }

    /// Widest power-spectrum bandwidth among the resolved pulses, rad/us.
    pub fn widest_bandwidth(&self) -> f64 {
        self.resolved_pulses()
            .iter()
            .map(|p| p.bandwidth())
            .fold(0.0, f64::max)
    }

    /// Copy with every pi-pulse area multiplied by `factor`.
    pub fn with_pi_area_scale(&self, factor: f64) -> PulseSequence {
        let events = self
            .events
            .iter()
            .map(|e| match e {
                SequenceEvent::Pi(p) => SequenceEvent::Pi(p.scaled_area(factor)),
                other => other.clone(),
            })
            .collect();
        PulseSequence { events }
    }

    /// Copy with all input pulses removed (noise shots store no input).
    pub fn without_inputs(&self) -> PulseSequence {
        let events = self
            .events
            .iter()
            .filter(|e| !matches!(e, SequenceEvent::Input(_)))
            .cloned()
            .collect();
        PulseSequence { events }
    }

    pub fn has_inputs(&self) -> bool {
        self.input_pulses().next().is_some()
    }

    /// Earliest and latest time at which any event needs the solver running.
    pub fn time_extent(&self) -> Option<(f64, f64)> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for e in &self.events {
            let (a, b) = match e {
                SequenceEvent::Input(p) | SequenceEvent::Pi(PiPulse::Resolved(p)) => p.support(),
                SequenceEvent::Pi(p) => (p.time(), p.time()),
            };
            lo = lo.min(a);
            hi = hi.max(b);
        }
        (lo <= hi).then_some((lo, hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn events_sort_by_time() {
        let seq = PulseSequence::new(vec![
            SequenceEvent::Pi(PiPulse::instantaneous(10.0)),
            SequenceEvent::Input(OpticalPulse::gaussian(2.0, 1.8, 0.05).unwrap()),
        ])
        .unwrap();
        assert!((seq.events()[0].time() - 2.0).abs() < 1e-12);
        assert_eq!(seq.pi_times(), vec![10.0]);
    }

    #[test]
    fn rejects_events_after_direction_flip() {
        let err = PulseSequence::new(vec![
            SequenceEvent::Pi(PiPulse::instantaneous_flipped(5.0)),
            SequenceEvent::Pi(PiPulse::instantaneous(10.0)),
        ]);
        assert!(err.is_err());
    }

    #[test]
    fn area_scaling_touches_only_pi_pulses() {
        let seq = PulseSequence::new(vec![
            SequenceEvent::Input(OpticalPulse::gaussian(2.0, 1.8, 0.05).unwrap()),
            SequenceEvent::Pi(PiPulse::instantaneous(10.0)),
        ])
        .unwrap();
        let scaled = seq.with_pi_area_scale(0.9);
        let pi = scaled.pi_pulses().next().unwrap();
        match pi {
            PiPulse::Instantaneous { area, .. } => {
                assert!((area - 0.9 * PI).abs() < 1e-12)
            }
            _ => panic!("expected instantaneous"),
        }
        assert!((scaled.input_pulses().next().unwrap().area - 0.05).abs() < 1e-12);
    }
}
