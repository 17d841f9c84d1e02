//! Bloch-vector state of the ensemble on the (z, detuning) grid.
//!
//! Each grid point carries `(u, v, w)` with the optical coherence defined as
//! `D = (u + i v) / 2` and the inversion `w` (`-1` ground, `+1` excited).
//! Storage is z-major so the field solve reads all detunings of one slice
//! contiguously.

use num_complex::Complex64;

use crate::model::field::Direction;
use crate::model::grid::SimulationGrid;

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleState {
    bloch: Vec<[f64; 3]>,
    num_z: usize,
    num_detunings: usize,
    time_stamp: f64,
    emission: Direction,
}

/// All atoms in the ground state `(0, 0, -1)` at the start of the grid span.
pub fn ground_state(grid: &SimulationGrid) -> EnsembleState {
    EnsembleState {
        bloch: vec![[0.0, 0.0, -1.0]; grid.num_z() * grid.num_detunings()],
        num_z: grid.num_z(),
        num_detunings: grid.num_detunings(),
        time_stamp: grid.t_span().0,
        emission: Direction::Forward,
    }
}

impl EnsembleState {
    pub fn num_z(&self) -> usize {
        self.num_z
    }

    pub fn num_detunings(&self) -> usize {
        self.num_detunings
    }

    pub fn time_stamp(&self) -> f64 {
        self.time_stamp
    }

    pub fn set_time_stamp(&mut self, t: f64) {
        self.time_stamp = t;
    }

    /// Direction the coherence is phase-matched to emit into.
    pub fn emission_direction(&self) -> Direction {
        self.emission
    }

    pub fn set_emission_direction(&mut self, d: Direction) {
        self.emission = d;
    }

    pub fn bloch(&self) -> &[[f64; 3]] {
        &self.bloch
    }

    pub fn bloch_mut(&mut self) -> &mut [[f64; 3]] {
        &mut self.bloch
    }

    #[inline]
    pub fn index(&self, z_idx: usize, detuning_idx: usize) -> usize {
        z_idx * self.num_detunings + detuning_idx
    }

    pub fn point(&self, z_idx: usize, detuning_idx: usize) -> [f64; 3] {
        self.bloch[self.index(z_idx, detuning_idx)]
    }

    /// Optical coherence `D = (u + i v) / 2` at one grid point.
    pub fn coherence(&self, z_idx: usize, detuning_idx: usize) -> Complex64 {
        let [u, v, _] = self.point(z_idx, detuning_idx);
        Complex64::new(0.5 * u, 0.5 * v)
    }

    /// Sum of |D| over the whole grid; zero in the ground state.
    pub fn total_coherence(&self) -> f64 {
        self.bloch
            .iter()
            .map(|&[u, v, _]| 0.5 * (u * u + v * v).sqrt())
            .sum()
    }

    /// Mean excited-state population `(w + 1) / 2` over the whole grid.
    pub fn excited_state_fraction(&self) -> f64 {
        let sum: f64 = self.bloch.iter().map(|&[_, _, w]| 0.5 * (w + 1.0)).sum();
        sum / self.bloch.len() as f64
    }

    /// Largest deviation of `u^2 + v^2 + w^2` from 1 over the grid. Ideal
    /// lossless evolution conserves the Bloch norm.
    pub fn max_norm_residual(&self) -> f64 {
        self.bloch
            .iter()
            .map(|&[u, v, w]| (u * u + v * v + w * w - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::grid::make_grid;

    #[test]
    fn ground_state_definitions() {
        let grid = make_grid(3, 5, 1.0, 0.1, (0.0, 1.0), 1.0).unwrap();
        let s = ground_state(&grid);
        assert!(s.bloch().iter().all(|&b| b == [0.0, 0.0, -1.0]));
        assert_eq!(s.total_coherence(), 0.0);
        assert_eq!(s.excited_state_fraction(), 0.0);
        assert_eq!(s.max_norm_residual(), 0.0);
        assert_eq!(s.time_stamp(), 0.0);
        assert_eq!(s.emission_direction(), Direction::Forward);
    }
}
