//! Propagation engines and sequence execution.
//!
//! All engines act on interaction-picture amplitudes over the labeled
//! eigenbasis and share one absolute clock, so the lab-frame drive phase of
//! a pulse starting at `t_0` is `ν t + φ` with `t ≥ t_0`.

mod exact;
mod oracle;
mod rwa;

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub use exact::evolve_exact;
pub use oracle::{evolve_oracle, evolve_oracle_converged, MAX_STEP_PRODUCT};
pub use rwa::{evolve_rwa, RESONANCE_TOL};

use crate::{
    ChainConfig, Error, Label, LabelStrategy, LabeledSpectrum, Pulse, PulseSequence, QuantumState,
    Result, TransitionTable,
};

const CLOCK_SLACK: f64 = 1e-9;

fn check_clock(state: &QuantumState, pulse: &Pulse) -> Result<()> {
    pulse.validate()?;
    if state.time() > pulse.start_time + CLOCK_SLACK * pulse.start_time.abs().max(1.0) {
        return Err(Error::InvalidPulse(format!(
            "pulse starts at {} but the state is already at t = {}",
            pulse.start_time,
            state.time()
        )));
    }
    Ok(())
}

/// Numerical settings of the exact and oracle engines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// Agreement required between successive oracle extrapolants.
    pub oracle_tol: f64,
    pub oracle_max_levels: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rtol: 1e-10,
            atol: 1e-12,
            max_steps: 50_000_000,
            oracle_tol: 1e-10,
            oracle_max_levels: 8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    /// Resonant two-level rotations.
    Rwa,
    /// Adaptive integration of the full interaction-picture equations.
    Exact,
    /// Lab-frame time slicing, step-extrapolated.
    Oracle,
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rwa" => Ok(Engine::Rwa),
            "exact" => Ok(Engine::Exact),
            "oracle" => Ok(Engine::Oracle),
            other => Err(Error::InvalidConfig(format!(
                "unknown engine '{other}' (expected rwa, exact or oracle)"
            ))),
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Rwa => "rwa",
            Engine::Exact => "exact",
            Engine::Oracle => "oracle",
        })
    }
}

/// Final state of a sequence with `|1 − Σ|C|²|` after every pulse.
#[derive(Debug, Clone)]
pub struct SequenceOutcome {
    pub state: QuantumState,
    pub norm_drift: Vec<f64>,
}

impl SequenceOutcome {
    pub fn max_norm_drift(&self) -> f64 {
        self.norm_drift.iter().copied().fold(0.0, f64::max)
    }
}

/// A chain with its labeled spectrum and transition table.
#[derive(Debug, Clone)]
pub struct Device {
    config: ChainConfig,
    spectrum: LabeledSpectrum,
    table: TransitionTable,
    tolerances: Tolerances,
}

impl Device {
    pub fn new(config: ChainConfig, strategy: LabelStrategy) -> Result<Self> {
        let spectrum = LabeledSpectrum::from_config(&config, strategy)?;
        let table = TransitionTable::new(&spectrum, config.rabi());
        Ok(Device {
            config,
            spectrum,
            table,
            tolerances: Tolerances::default(),
        })
    }

    pub fn with_tolerances(mut self, tolerances: Tolerances) -> Self {
        self.tolerances = tolerances;
        self
    }

    pub fn config(&self) -> &ChainConfig {
        &self.config
    }

    pub fn spectrum(&self) -> &LabeledSpectrum {
        &self.spectrum
    }

    pub fn table(&self) -> &TransitionTable {
        &self.table
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tolerances
    }

    pub fn dim(&self) -> usize {
        self.spectrum.dim()
    }

    pub fn ground(&self) -> QuantumState {
        QuantumState::basis(self.dim(), Label(0)).expect("label 0 exists")
    }

    pub fn evolve(&self, state: &QuantumState, pulse: &Pulse, engine: Engine) -> Result<QuantumState> {
        match engine {
            Engine::Rwa => evolve_rwa(state, &self.spectrum, &self.table, pulse),
            Engine::Exact => evolve_exact(state, &self.spectrum, pulse, &self.tolerances),
            Engine::Oracle => evolve_oracle_converged(
                state,
                &self.config,
                &self.spectrum,
                pulse,
                self.tolerances.oracle_tol,
                self.tolerances.oracle_max_levels,
            ),
        }
    }

    /// Applies the pulses of `seq` in order.
    pub fn run_sequence(
        &self,
        state: &QuantumState,
        seq: &PulseSequence,
        engine: Engine,
    ) -> Result<SequenceOutcome> {
        let mut current = state.clone();
        let mut norm_drift = Vec::with_capacity(seq.len());
        for (j, pulse) in seq.pulses().iter().enumerate() {
            current = self.evolve(&current, pulse, engine)?;
            let drift = current.norm_drift();
            log::debug!("pulse {j}: {pulse}; norm drift {drift:e}");
            norm_drift.push(drift);
        }
        Ok(SequenceOutcome {
            state: current,
            norm_drift,
        })
    }

    /// Matrix of the rwa-engine action of `seq`; column `n` is the image of
    /// the labeled level `n`.
    pub fn rwa_propagator(&self, seq: &PulseSequence) -> Result<DMatrix<Complex64>> {
        let dim = self.dim();
        let mut u = DMatrix::<Complex64>::zeros(dim, dim);
        for n in 0..dim {
            let start = QuantumState::basis(dim, Label(n))?;
            let out = self.run_sequence(&start, seq, Engine::Rwa)?.state;
            for (m, c) in out.amplitudes().iter().enumerate() {
                u[(m, n)] = *c;
            }
        }
        Ok(u)
    }
}
