use thiserror::Error;

use crate::Label;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid chain configuration: {0}")]
    InvalidConfig(String),

    #[error("chain of {spins} spins exceeds the configured cap of {cap}")]
    DimensionOverflow { spins: usize, cap: usize },

    #[error("operator is not Hermitian: max |A - A^†| = {defect:e}")]
    NotHermitian { defect: f64 },

    #[error("eigensolver failed to converge (residual {residual:e})")]
    NonConvergence { residual: f64 },

    #[error("eigenstate {index} has no definite spin projection (<I^z> = {value})")]
    IndefiniteProjection { index: usize, value: f64 },

    #[error("eigenstate {index} cannot be labeled: best product-state overlap {overlap:.6}")]
    LabelAmbiguous { index: usize, overlap: f64 },

    #[error("transition {from}-{to} is not allowed (zero coupling)")]
    UnknownTransition { from: Label, to: Label },

    #[error("pulse frequency {pulse} is not resonant with {from}-{to} at {transition}")]
    NotResonant {
        from: Label,
        to: Label,
        pulse: f64,
        transition: f64,
    },

    #[error("transition {from}-{to} at {frequency} collides with {other_from}-{other_to} at {other_frequency}")]
    DegenerateTransition {
        from: Label,
        to: Label,
        frequency: f64,
        other_from: Label,
        other_to: Label,
        other_frequency: f64,
    },

    #[error("adaptive integrator could not meet the tolerance at t = {time}")]
    ToleranceNotMet { time: f64 },

    #[error("oracle step {step} too large: |H+V| * step = {product:.3e} > 1e-2")]
    StepTooLarge { step: f64, product: f64 },

    #[error("oracle did not converge after {levels} step halvings (last change {change:e})")]
    OracleNotConverged { levels: usize, change: f64 },

    #[error("no 2πk solution for k = {k}: 4k²(α1-α2)² <= (α1+α2)²")]
    NoSolution { k: u32 },

    #[error("pulse realization deviates from the ideal stage unitary by {deviation:e}")]
    DecompositionMismatch { deviation: f64 },

    #[error("invalid pulse: {0}")]
    InvalidPulse(String),

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("the rwa engine needs a target transition on every pulse")]
    MissingTarget,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
