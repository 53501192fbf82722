//! Physical parameters of the chain.

use crate::{Error, Result};

/// Chain length, coupling, per-spin Larmor frequencies and the default
/// driving amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainConfig {
    coupling: f64,
    larmor: Vec<f64>,
    rabi: f64,
}

impl ChainConfig {
    pub fn new(coupling: f64, larmor: Vec<f64>, rabi: f64) -> Result<Self> {
        let cfg = ChainConfig {
            coupling,
            larmor,
            rabi,
        };
        cfg.validate()?;
        if !cfg.is_strictly_monotone() {
            log::warn!(
                "Larmor frequencies {:?} are not strictly monotone; some levels may be unreachable",
                cfg.larmor
            );
        }
        Ok(cfg)
    }

    /// Linear field gradient `ω_k = ω0 + k·δω`.
    pub fn linear(
        spins: usize,
        coupling: f64,
        omega0: f64,
        delta_omega: f64,
        rabi: f64,
    ) -> Result<Self> {
        let larmor = (0..spins).map(|k| omega0 + k as f64 * delta_omega).collect();
        Self::new(coupling, larmor, rabi)
    }

    /// Two spins with `ω1 = ω0 + δω`.
    pub fn two_spin(coupling: f64, omega0: f64, delta_omega: f64, rabi: f64) -> Result<Self> {
        Self::linear(2, coupling, omega0, delta_omega, rabi)
    }

    fn validate(&self) -> Result<()> {
        if self.larmor.len() < 2 {
            return Err(Error::InvalidConfig(format!(
                "need at least 2 spins, got {}",
                self.larmor.len()
            )));
        }
        if !self.coupling.is_finite() || self.coupling < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "coupling J must be finite and non-negative, got {}",
                self.coupling
            )));
        }
        if let Some(w) = self.larmor.iter().find(|w| !w.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "Larmor frequency {w} is not finite"
            )));
        }
        if !self.rabi.is_finite() || self.rabi <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "Rabi frequency must be finite and positive, got {}",
                self.rabi
            )));
        }
        Ok(())
    }

    pub fn spins(&self) -> usize {
        self.larmor.len()
    }

    pub fn dim(&self) -> usize {
        1 << self.larmor.len()
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn larmor(&self) -> &[f64] {
        &self.larmor
    }

    pub fn rabi(&self) -> f64 {
        self.rabi
    }

    pub fn with_rabi(&self, rabi: f64) -> Result<Self> {
        let cfg = ChainConfig {
            rabi,
            ..self.clone()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn is_uniform(&self) -> bool {
        self.larmor.windows(2).all(|w| w[0] == w[1])
    }

    pub fn is_strictly_monotone(&self) -> bool {
        self.larmor.windows(2).all(|w| w[1] > w[0]) || self.larmor.windows(2).all(|w| w[1] < w[0])
    }
}
