//! Interaction-picture amplitudes over the labeled eigenbasis.

use num_complex::Complex64;

use crate::{Error, Label, Result};

const NORM_TOL: f64 = 1e-10;

/// `C_n` indexed by label, plus the global clock.
///
/// The lab-frame state is `Σ_n C_n e^{-i E_n t} |n>`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    amplitudes: Vec<Complex64>,
    time: f64,
}

impl QuantumState {
    /// Normalized state; the norm must be 1 within 1e-10.
    pub fn new(amplitudes: Vec<Complex64>, time: f64) -> Result<Self> {
        if !amplitudes.len().is_power_of_two() || amplitudes.len() < 4 {
            return Err(Error::InvalidState(format!(
                "dimension {} is not 2^L with L >= 2",
                amplitudes.len()
            )));
        }
        let state = QuantumState { amplitudes, time };
        let drift = state.norm_drift();
        if drift > NORM_TOL {
            return Err(Error::InvalidState(format!("norm differs from 1 by {drift:e}")));
        }
        Ok(state)
    }

    pub(crate) fn from_raw(amplitudes: Vec<Complex64>, time: f64) -> Self {
        QuantumState { amplitudes, time }
    }

    /// The labeled level `label` at `t = 0`.
    pub fn basis(dim: usize, label: Label) -> Result<Self> {
        if label.0 >= dim {
            return Err(Error::InvalidState(format!("label {label} outside dimension {dim}")));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[label.0] = Complex64::new(1.0, 0.0);
        Self::new(amplitudes, 0.0)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, label: Label) -> Complex64 {
        self.amplitudes[label.0]
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn with_time(mut self, time: f64) -> Self {
        self.time = time;
        self
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm_drift(&self) -> f64 {
        (1.0 - self.norm_sqr()).abs()
    }

    /// `|C_n|²` indexed by label.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect()
    }

    /// Euclidean distance between amplitude vectors.
    pub fn distance(&self, other: &QuantumState) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}
