//! Order finding for `N = 4` (base 3) on four spins.
//!
//! The label is `4x + y`: the x register is bits 3 (high) and 2, the
//! y register bits 1 and 0. The program has three stages:
//!
//! 1. superposition of the x register, three π/2-pulses;
//! 2. `|x, 0> -> |x, 3^x mod 4>`, six π-pulses;
//! 3. Fourier transform of the x register: a Hadamard-type rotation of
//!    x-qubit 1 (8 pulses), the conditional phase `i` on `x = 3` (6 pulses)
//!    and the rotation of x-qubit 0 (8 pulses). The output x register is
//!    read bit-reversed.
//!
//! Under the rwa engine the program leaves `|1>, |3>, |5>, |7>` with
//! probability 1/4 each.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::compiler::{compile_conditional_phase, compile_u1, ideal_conditional_phase, make_pulse};
use crate::{
    ChainConfig, Device, Engine, Error, Label, LabelStrategy, PulseSequence, Result,
};

/// Transitions of the superposition stage, in order.
pub const SUPERPOSITION_PAIRS: [(usize, usize); 3] = [(0, 4), (0, 8), (4, 12)];

/// Transitions of the modular exponentiation stage, in order.
pub const MODEXP_PAIRS: [(usize, usize); 6] = [(0, 1), (8, 9), (4, 5), (5, 7), (12, 13), (13, 15)];

/// Labels populated by the ideal program.
pub const TARGETS: [usize; 4] = [1, 3, 5, 7];

/// Maximal entrywise deviation tolerated between a stage's rwa action and
/// its ideal unitary.
pub const DECOMPOSITION_TOL: f64 = 1e-9;

const SPINS: usize = 4;
const DIM: usize = 16;

/// Chain parameters of the reference run: `J = 30`, `ω_k = 100 + 30k`,
/// `Ω = 0.5`.
pub fn default_config() -> ChainConfig {
    ChainConfig::linear(SPINS, 30.0, 100.0, 30.0, 0.5).expect("valid parameters")
}

#[derive(Debug, Clone)]
pub struct ShorProgram {
    pub stage1: PulseSequence,
    pub stage2: PulseSequence,
    pub stage3: PulseSequence,
    /// Gate-level unitaries of the three stages.
    pub ideal: [DMatrix<Complex64>; 3],
}

/// Two-level rotation of `(upper, lower)` embedded in the 16-level space.
fn pair_rotation(upper: usize, lower: usize, theta: f64, phi: f64) -> DMatrix<Complex64> {
    let mut u = DMatrix::<Complex64>::identity(DIM, DIM);
    let (s, c) = (theta / 2.0).sin_cos();
    u[(upper, upper)] = Complex64::new(c, 0.0);
    u[(lower, lower)] = Complex64::new(c, 0.0);
    u[(lower, upper)] = Complex64::i() * Complex64::from_polar(s, -phi);
    u[(upper, lower)] = Complex64::i() * Complex64::from_polar(s, phi);
    u
}

fn product_of_rotations(pairs: &[(usize, usize)], theta: f64) -> DMatrix<Complex64> {
    pairs.iter().fold(DMatrix::identity(DIM, DIM), |acc, &(a, b)| {
        let (upper, lower) = if a.count_ones() < b.count_ones() { (a, b) } else { (b, a) };
        pair_rotation(upper, lower, theta, 0.0) * acc
    })
}

/// `m` acting on qubit `q` of four, built from Kronecker products with
/// qubit 3 as the leftmost factor.
fn on_qubit(q: usize, m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let id = DMatrix::<Complex64>::identity(2, 2);
    (0..SPINS)
        .rev()
        .fold(DMatrix::identity(1, 1), |acc, k| acc.kronecker(if k == q { m } else { &id }))
}

/// Hadamard-type rotation `(1/√2) [[1, −i], [−i, 1]]`, i.e. a π/2 rotation
/// with phase π.
fn a_gate() -> DMatrix<Complex64> {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let mi = Complex64::new(0.0, -FRAC_1_SQRT_2);
    DMatrix::from_row_slice(2, 2, &[h, mi, mi, h])
}

/// Gate-level unitary of the Fourier stage: `A(x_0) B A(x_1)`.
pub fn ideal_fourier_stage() -> DMatrix<Complex64> {
    let a = a_gate();
    on_qubit(2, &a) * ideal_conditional_phase(SPINS, 3, 2, FRAC_PI_2) * on_qubit(3, &a)
}

pub fn ideal_superposition_stage() -> DMatrix<Complex64> {
    product_of_rotations(&SUPERPOSITION_PAIRS, FRAC_PI_2)
}

pub fn ideal_modexp_stage() -> DMatrix<Complex64> {
    product_of_rotations(&MODEXP_PAIRS, PI)
}

fn max_deviation(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

impl ShorProgram {
    /// Compiles the three stages on `device` with its configured amplitude.
    ///
    /// Each stage's rwa action is checked against its ideal unitary.
    pub fn build(device: &Device) -> Result<Self> {
        if device.dim() != DIM {
            return Err(Error::InvalidConfig(format!(
                "the program needs 4 spins, got {}",
                device.spectrum().spins()
            )));
        }
        let program = ShorProgram {
            stage1: build_superposition(device)?,
            stage2: build_modexp(device)?,
            stage3: build_fourier(device)?,
            ideal: [ideal_superposition_stage(), ideal_modexp_stage(), ideal_fourier_stage()],
        };
        for (seq, ideal) in program.stages().iter().zip(&program.ideal) {
            let deviation = max_deviation(&device.rwa_propagator(seq)?, ideal);
            if deviation > DECOMPOSITION_TOL {
                return Err(Error::DecompositionMismatch { deviation });
            }
        }
        Ok(program)
    }

    pub fn stages(&self) -> [&PulseSequence; 3] {
        [&self.stage1, &self.stage2, &self.stage3]
    }

    /// All pulses on one contiguous clock.
    pub fn sequence(&self) -> PulseSequence {
        let mut seq = PulseSequence::new();
        for stage in self.stages() {
            seq.extend(stage).expect("compiled pulses are valid");
        }
        seq
    }

    pub fn len(&self) -> usize {
        self.stages().iter().map(|s| s.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Ideal amplitudes after all stages, starting from `|0>`.
    pub fn ideal_output(&self) -> DVector<Complex64> {
        let mut v = DVector::<Complex64>::zeros(DIM);
        v[0] = Complex64::new(1.0, 0.0);
        self.ideal.iter().fold(v, |acc, u| u * acc)
    }
}

fn build_pairs(device: &Device, pairs: &[(usize, usize)], theta: f64) -> Result<PulseSequence> {
    let mut seq = PulseSequence::new();
    for &(a, b) in pairs {
        let p = make_pulse(
            device.spectrum(),
            device.table(),
            (Label(a), Label(b)),
            theta,
            0.0,
            device.config().rabi(),
        )?;
        seq.append(p)?;
    }
    Ok(seq)
}

/// π/2-pulses on `0↔4`, `0↔8`, `4↔12`.
pub fn build_superposition(device: &Device) -> Result<PulseSequence> {
    build_pairs(device, &SUPERPOSITION_PAIRS, FRAC_PI_2)
}

/// π-pulses writing `y = 3^x mod 4`; for odd `x` the low y-bit flips first.
pub fn build_modexp(device: &Device) -> Result<PulseSequence> {
    build_pairs(device, &MODEXP_PAIRS, PI)
}

/// `A(x_1)`, then the conditional phase, then `A(x_0)`.
pub fn build_fourier(device: &Device) -> Result<PulseSequence> {
    let (s, t, rabi) = (device.spectrum(), device.table(), device.config().rabi());
    let mut seq = compile_u1(s, t, 3, FRAC_PI_2, PI, rabi)?;
    seq.extend(&compile_conditional_phase(s, t, 3, 2, FRAC_PI_2, rabi)?)?;
    seq.extend(&compile_u1(s, t, 2, FRAC_PI_2, PI, rabi)?)?;
    Ok(seq)
}

/// Outcome of a full program run.
#[derive(Debug, Clone)]
pub struct ShorReport {
    pub engine: Engine,
    pub pulses: usize,
    pub probabilities: Vec<f64>,
    pub ideal_probabilities: Vec<f64>,
    /// `max |p_n − 1/4|` over the four targets.
    pub max_target_deviation: f64,
    /// Largest probability outside the targets.
    pub max_unwanted: f64,
    /// Total probability outside the targets.
    pub unwanted_sum: f64,
    pub max_norm_drift: f64,
}

impl ShorReport {
    pub fn total_probability(&self) -> f64 {
        self.probabilities.iter().sum()
    }
}

/// Builds and runs the program from `|0>` with `engine`.
pub fn run_shor(cfg: &ChainConfig, engine: Engine) -> Result<(ShorProgram, ShorReport)> {
    let device = Device::new(cfg.clone(), LabelStrategy::Matched)?;
    run_shor_on(&device, engine)
}

pub fn run_shor_on(device: &Device, engine: Engine) -> Result<(ShorProgram, ShorReport)> {
    let program = ShorProgram::build(device)?;
    let outcome = device.run_sequence(&device.ground(), &program.sequence(), engine)?;
    let probabilities = outcome.state.probabilities();
    let ideal_probabilities: Vec<f64> = program.ideal_output().iter().map(|c| c.norm_sqr()).collect();
    let mut max_target_deviation = 0.0_f64;
    let mut max_unwanted = 0.0_f64;
    let mut unwanted_sum = 0.0;
    for (n, p) in probabilities.iter().enumerate() {
        if TARGETS.contains(&n) {
            max_target_deviation = max_target_deviation.max((p - 0.25).abs());
        } else {
            max_unwanted = max_unwanted.max(*p);
            unwanted_sum += p;
        }
    }
    let report = ShorReport {
        engine,
        pulses: program.len(),
        probabilities,
        ideal_probabilities,
        max_target_deviation,
        max_unwanted,
        unwanted_sum,
        max_norm_drift: outcome.max_norm_drift(),
    };
    Ok((program, report))
}
