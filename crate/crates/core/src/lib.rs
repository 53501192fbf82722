//! Pulse-level simulation of logic gates on a spin-1/2 Heisenberg chain.
//!
//! The chain is never split into physical qubits. Every stationary state of
//! the static Hamiltonian
//!
//! ```text
//! H = -Σ_k ω_k I^z_k - 2J Σ_k I_k · I_{k+1}
//! ```
//!
//! is given a binary label, and logic gates are resonant radio-frequency
//! pulses that drive transitions between labeled levels. The crate is
//! organised bottom-up:
//!
//! - [`chain`] and [`operator`]: physical parameters and the dense Hamiltonian.
//! - [`spectrum`]: exact diagonalization, labeling, transition tables and
//!   reachability.
//! - [`pulse`] and [`state`]: pulses, schedules (with their text format) and
//!   interaction-picture amplitudes.
//! - [`dynamics`]: three propagation engines (two-level resonant rotations,
//!   adaptive integration of the full interaction-picture equations, and a
//!   lab-frame time-sliced oracle).
//! - [`compiler`]: gate intents to resonant pulse schedules, the 2πk Rabi
//!   frequency selection and the CNOT error sweep.
//! - [`shor`]: the order-finding program that factors 4 on four spins.
//!
//! Frequencies are angular frequencies with ħ = 1; time is in the inverse
//! unit.

pub mod assignment;
pub mod chain;
pub mod compiler;
pub mod dynamics;
mod error;
pub mod integrator;
pub mod operator;
pub mod pulse;
pub mod shor;
pub mod spectrum;
pub mod state;

use std::fmt;

pub use chain::ChainConfig;
pub use compiler::{GateIntent, TwoPiKSolution};
pub use dynamics::{Device, Engine, Tolerances};
pub use error::{Error, Result};
pub use operator::{build_hamiltonian, HermitianOperator};
pub use pulse::{Pulse, PulseSequence};
pub use spectrum::{
    diagonalize, LabelStrategy, LabeledSpectrum, Spectrum, Transition, TransitionTable,
};
pub use state::QuantumState;

pub use num_complex::Complex64;

/// Logical label of a stationary state.
///
/// Bit `k` of the label is spin `k` of the chain (`0` for ↑, `1` for ↓), so
/// the most significant logical bit is the last spin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(pub usize);

impl Label {
    /// Binary string of `spins` bits, most significant bit first.
    pub fn binary(self, spins: usize) -> String {
        (0..spins)
            .rev()
            .map(|k| if self.0 >> k & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    pub fn bit(self, k: usize) -> bool {
        self.0 >> k & 1 == 1
    }

    pub fn flip(self, k: usize) -> Label {
        Label(self.0 ^ (1 << k))
    }

    /// Number of down spins of the product state with this label.
    pub fn ones(self) -> u32 {
        self.0.count_ones()
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<usize> for Label {
    fn from(value: usize) -> Self {
        Label(value)
    }
}
