//! Gate intents to resonant pulse schedules.
//!
//! Qubit `q` is bit `q` of the label. Every pulse is annotated with its
//! target transition and carries a *logical* phase: the emitted physical
//! phase is offset by `arg g` of the driven coupling, so the rwa action on
//! the pair (upper level `i`, lower level `f`) is always
//!
//! ```text
//! C_f <- C_f cos(θ/2) + i e^{-iφ} C_i sin(θ/2)
//! C_i <- C_i cos(θ/2) + i e^{+iφ} C_f sin(θ/2)
//! ```

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::{
    ChainConfig, Device, Engine, Error, Label, LabelStrategy, LabeledSpectrum, Pulse,
    PulseSequence, QuantumState, Result, TransitionTable,
};

/// Relative resonance-collision threshold, in units of `Ω_eff`.
pub const DEGENERACY_FRACTION: f64 = 1e-3;

const PHASE_CLOSURE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateIntent {
    /// Rotation of one logical qubit by `theta` about an axis set by `phi`.
    Rotation { qubit: usize, theta: f64, phi: f64 },
    /// Flip of `target` when `control` is 1, with `i` phases on the swapped pair.
    Cnot { control: usize, target: usize },
    /// Phase `e^{i phi}` on the levels where qubits `a` and `b` are both 1.
    ConditionalPhase { a: usize, b: usize, phi: f64 },
}

impl GateIntent {
    pub fn validate(&self, spins: usize) -> Result<()> {
        let check = |q: usize| {
            if q < spins {
                Ok(())
            } else {
                Err(Error::InvalidGate(format!("qubit {q} out of range for {spins} spins")))
            }
        };
        match *self {
            GateIntent::Rotation { qubit, theta, phi } => {
                check(qubit)?;
                if !(theta > 0.0 && theta <= TAU) || !phi.is_finite() {
                    return Err(Error::InvalidGate(format!(
                        "rotation angle {theta} outside (0, 2π] or bad phase {phi}"
                    )));
                }
            }
            GateIntent::Cnot { control, target } => {
                check(control)?;
                check(target)?;
                if control == target {
                    return Err(Error::InvalidGate("control equals target".into()));
                }
            }
            GateIntent::ConditionalPhase { a, b, phi } => {
                check(a)?;
                check(b)?;
                if a == b || !phi.is_finite() {
                    return Err(Error::InvalidGate(format!(
                        "conditional phase needs two distinct qubits and a finite phase ({a}, {b}, {phi})"
                    )));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for GateIntent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GateIntent::Rotation { qubit, theta, phi } => {
                write!(f, "u q={qubit} theta={theta:?} phi={phi:?}")
            }
            GateIntent::Cnot { control, target } => write!(f, "cnot c={control} t={target}"),
            GateIntent::ConditionalPhase { a, b, phi } => write!(f, "cphase a={a} b={b} phi={phi:?}"),
        }
    }
}

impl FromStr for GateIntent {
    type Err = String;

    fn from_str(line: &str) -> std::result::Result<Self, String> {
        let mut words = line.split_whitespace();
        let kind = words.next().ok_or("empty gate line")?;
        let mut fields = std::collections::BTreeMap::new();
        for word in words {
            let (k, v) = word
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got '{word}'"))?;
            if fields.insert(k, v).is_some() {
                return Err(format!("duplicate key '{k}'"));
            }
        }
        let mut take = |k: &str| fields.remove(k).ok_or_else(|| format!("missing {k}"));
        let index = |v: &str| v.parse::<usize>().map_err(|_| format!("bad qubit index '{v}'"));
        let float = |v: &str| v.parse::<f64>().map_err(|_| format!("bad number '{v}'"));
        let gate = match kind {
            "u" => GateIntent::Rotation {
                qubit: index(take("q")?)?,
                theta: float(take("theta")?)?,
                phi: float(take("phi")?)?,
            },
            "cnot" => GateIntent::Cnot {
                control: index(take("c")?)?,
                target: index(take("t")?)?,
            },
            "cphase" => GateIntent::ConditionalPhase {
                a: index(take("a")?)?,
                b: index(take("b")?)?,
                phi: float(take("phi")?)?,
            },
            other => return Err(format!("unknown gate '{other}'")),
        };
        if let Some(k) = fields.keys().next() {
            return Err(format!("unknown key '{k}'"));
        }
        Ok(gate)
    }
}

/// Parses one intent per line; `#` starts a comment.
pub fn parse_gate_list(text: &str) -> Result<Vec<GateIntent>> {
    let mut gates = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        gates.push(line.parse().map_err(|message| Error::Parse {
            line: i + 1,
            message,
        })?);
    }
    Ok(gates)
}

/// Resonant pulse rotating the `a`–`b` transition by `theta` with logical
/// phase `phi`.
pub fn make_pulse(
    spectrum: &LabeledSpectrum,
    table: &TransitionTable,
    transition: (Label, Label),
    theta: f64,
    phi: f64,
    rabi: f64,
) -> Result<Pulse> {
    let (a, b) = transition;
    if a.0 >= spectrum.dim() || b.0 >= spectrum.dim() {
        return Err(Error::UnknownTransition { from: a, to: b });
    }
    let t = table.find(a, b).ok_or(Error::UnknownTransition { from: a, to: b })?;
    if !(theta >= 0.0 && theta.is_finite()) || !(rabi > 0.0 && rabi.is_finite()) {
        return Err(Error::InvalidPulse(format!("bad angle {theta} or amplitude {rabi}")));
    }
    let nu = (spectrum.energy(t.to) - spectrum.energy(t.from)).abs();
    if t.frequency <= 0.0 {
        return Err(Error::InvalidPulse(format!(
            "transition {}-{} has non-positive frequency {}",
            t.from, t.to, t.frequency
        )));
    }
    let effective = rabi * t.coupling.norm();
    for other in table.entries() {
        if (other.from, other.to) == (t.from, t.to) {
            continue;
        }
        if (other.frequency - nu).abs() < DEGENERACY_FRACTION * effective {
            return Err(Error::DegenerateTransition {
                from: a,
                to: b,
                frequency: nu,
                other_from: other.from,
                other_to: other.to,
                other_frequency: other.frequency,
            });
        }
    }
    let phase = phi + t.coupling.arg();
    Ok(Pulse::new(nu, phase, rabi, theta / effective)?.with_target(a, b))
}

/// One pulse per configuration of the spectator qubits, on the transitions
/// that flip qubit `q`.
pub fn compile_u1(
    spectrum: &LabeledSpectrum,
    table: &TransitionTable,
    q: usize,
    theta: f64,
    phi: f64,
    rabi: f64,
) -> Result<PulseSequence> {
    GateIntent::Rotation { qubit: q, theta, phi }.validate(spectrum.spins())?;
    let mut seq = PulseSequence::new();
    for s in (0..spectrum.dim()).filter(|s| s >> q & 1 == 0) {
        let pair = (Label(s), Label(s | 1 << q));
        seq.append(make_pulse(spectrum, table, pair, theta, phi, rabi)?)?;
    }
    Ok(seq)
}

/// π-pulses flipping `target` on every configuration with `control` = 1.
///
/// For two spins and `control = 1`, `target = 0` this is the single pulse
/// at `ν = E_3 − E_2`.
pub fn compile_cnot_on(
    spectrum: &LabeledSpectrum,
    table: &TransitionTable,
    control: usize,
    target: usize,
    rabi: f64,
) -> Result<PulseSequence> {
    GateIntent::Cnot { control, target }.validate(spectrum.spins())?;
    let mut seq = PulseSequence::new();
    for s in (0..spectrum.dim()).filter(|s| s >> control & 1 == 1 && s >> target & 1 == 0) {
        let pair = (Label(s), Label(s | 1 << target));
        seq.append(make_pulse(spectrum, table, pair, PI, 0.0, rabi)?)?;
    }
    Ok(seq)
}

/// The two-spin controlled flip `|10> <-> |11>`.
pub fn compile_cnot(spectrum: &LabeledSpectrum, table: &TransitionTable, rabi: f64) -> Result<PulseSequence> {
    compile_cnot_on(spectrum, table, 1, 0, rabi)
}

/// Levels with qubits `a` and `b` set, in Gray-code order of the others.
fn phase_path(spins: usize, a: usize, b: usize) -> Vec<usize> {
    let others: Vec<usize> = (0..spins).filter(|&k| k != a && k != b).collect();
    (0..1usize << others.len())
        .map(|i| {
            let gray = i ^ (i >> 1);
            others
                .iter()
                .enumerate()
                .fold(1 << a | 1 << b, |s, (j, &k)| s | (gray >> j & 1) << k)
        })
        .collect()
}

/// Whether `e^{i phi}` can be imprinted on the `a = b = 1` levels alone.
///
/// A pair of π-pulses multiplies its two levels by reciprocal phases, so
/// the product of all phases on the set is invariant: exactness needs
/// `2^(L−2) phi ≡ 0 (mod 2π)`.
pub fn conditional_phase_is_exact(spins: usize, phi: f64) -> bool {
    let total = (1usize << (spins - 2)) as f64 * phi;
    let r = total.rem_euclid(TAU);
    r.min(TAU - r) < PHASE_CLOSURE_TOL
}

/// Pair of π-pulses with logical phases `0` and `delta`: the upper level
/// gains `−e^{iδ}` and the lower `−e^{−iδ}`.
fn phase_pair(
    spectrum: &LabeledSpectrum,
    table: &TransitionTable,
    u: usize,
    v: usize,
    delta: f64,
    rabi: f64,
    seq: &mut PulseSequence,
) -> Result<()> {
    seq.append(make_pulse(spectrum, table, (Label(u), Label(v)), PI, 0.0, rabi)?)?;
    seq.append(make_pulse(spectrum, table, (Label(u), Label(v)), PI, delta, rabi)?)?;
    Ok(())
}

/// Conditional phase from pairs of π-pulses.
///
/// When [`conditional_phase_is_exact`] holds, the pairs walk a Gray-code
/// path through the `a = b = 1` levels and no other level is touched.
/// Otherwise one pair per configuration drives the `b` flip with `a = 1`,
/// realizing `e^{i phi}` on `a = b = 1` times `e^{−i phi/2}` on all `a = 1`
/// levels (see [`ideal_conditional_phase`]).
pub fn compile_conditional_phase(
    spectrum: &LabeledSpectrum,
    table: &TransitionTable,
    a: usize,
    b: usize,
    phi: f64,
    rabi: f64,
) -> Result<PulseSequence> {
    GateIntent::ConditionalPhase { a, b, phi }.validate(spectrum.spins())?;
    let spins = spectrum.spins();
    let mut seq = PulseSequence::new();
    if conditional_phase_is_exact(spins, phi) {
        let path = phase_path(spins, a, b);
        let target = Complex64::from_polar(1.0, phi);
        let mut current = vec![Complex64::new(1.0, 0.0); path.len()];
        for k in 0..path.len().saturating_sub(1) {
            let (u, v) = (path[k], path[k + 1]);
            let p = target / current[k];
            let u_is_upper = u.count_ones() < v.count_ones();
            let delta = if u_is_upper { (-p).arg() } else { -(-p).arg() };
            let (upper, lower) = if u_is_upper { (u, v) } else { (v, u) };
            phase_pair(spectrum, table, upper, lower, delta, rabi, &mut seq)?;
            current[k] *= p;
            current[k + 1] *= p.conj();
        }
    } else {
        for s in (0..spectrum.dim()).filter(|s| s >> a & 1 == 1 && s >> b & 1 == 0) {
            // upper level s (b = 0) gains e^{-iφ/2}, lower s|b gains e^{iφ/2}
            let delta = (-Complex64::from_polar(1.0, -phi / 2.0)).arg();
            phase_pair(spectrum, table, s, s | 1 << b, delta, rabi, &mut seq)?;
        }
    }
    Ok(seq)
}

/// Compiles one intent with amplitude `rabi`.
pub fn compile_gate(
    spectrum: &LabeledSpectrum,
    table: &TransitionTable,
    gate: &GateIntent,
    rabi: f64,
) -> Result<PulseSequence> {
    gate.validate(spectrum.spins())?;
    match *gate {
        GateIntent::Rotation { qubit, theta, phi } => compile_u1(spectrum, table, qubit, theta, phi, rabi),
        GateIntent::Cnot { control, target } => compile_cnot_on(spectrum, table, control, target, rabi),
        GateIntent::ConditionalPhase { a, b, phi } => {
            compile_conditional_phase(spectrum, table, a, b, phi, rabi)
        }
    }
}

/// Compiles a gate list into one contiguous schedule.
pub fn compile_program(
    spectrum: &LabeledSpectrum,
    table: &TransitionTable,
    gates: &[GateIntent],
    rabi: f64,
) -> Result<PulseSequence> {
    let mut seq = PulseSequence::new();
    for g in gates {
        seq.extend(&compile_gate(spectrum, table, g, rabi)?)?;
    }
    Ok(seq)
}

/// Ideal rotation of qubit `q`; `|0>_q` is the upper level.
pub fn ideal_rotation(spins: usize, q: usize, theta: f64, phi: f64) -> DMatrix<Complex64> {
    let dim = 1usize << spins;
    let (s, c) = (theta / 2.0).sin_cos();
    let mut u = DMatrix::<Complex64>::zeros(dim, dim);
    for n in 0..dim {
        u[(n, n)] = Complex64::new(c, 0.0);
        let m = n ^ 1 << q;
        let sign = if n >> q & 1 == 0 { -phi } else { phi };
        u[(m, n)] = Complex64::i() * Complex64::from_polar(s, sign);
    }
    u
}

pub fn ideal_cnot(spins: usize, control: usize, target: usize) -> DMatrix<Complex64> {
    let dim = 1usize << spins;
    let mut u = DMatrix::<Complex64>::zeros(dim, dim);
    for n in 0..dim {
        if n >> control & 1 == 1 {
            u[(n ^ 1 << target, n)] = Complex64::i();
        } else {
            u[(n, n)] = Complex64::new(1.0, 0.0);
        }
    }
    u
}

/// Diagonal action of [`compile_conditional_phase`].
pub fn ideal_conditional_phase(spins: usize, a: usize, b: usize, phi: f64) -> DMatrix<Complex64> {
    let exact = conditional_phase_is_exact(spins, phi);
    let dim = 1usize << spins;
    DMatrix::from_fn(dim, dim, |i, j| {
        if i != j {
            return Complex64::new(0.0, 0.0);
        }
        let on_a = i >> a & 1 == 1;
        let on_b = i >> b & 1 == 1;
        let mut theta = if on_a && on_b { phi } else { 0.0 };
        if !exact && on_a {
            theta -= phi / 2.0;
        }
        Complex64::from_polar(1.0, theta)
    })
}

pub fn ideal_gate(spins: usize, gate: &GateIntent) -> DMatrix<Complex64> {
    match *gate {
        GateIntent::Rotation { qubit, theta, phi } => ideal_rotation(spins, qubit, theta, phi),
        GateIntent::Cnot { control, target } => ideal_cnot(spins, control, target),
        GateIntent::ConditionalPhase { a, b, phi } => ideal_conditional_phase(spins, a, b, phi),
    }
}

/// Rabi frequency for which the near-resonant `|00> <-> |01>` channel
/// completes `k` full cycles during the CNOT π-pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPiKSolution {
    pub k: u32,
    pub rabi: f64,
    /// `(E_1 − E_0) − (E_3 − E_2)`.
    pub detuning: f64,
    /// `sqrt(Ω_0² + Δ²) · π/Ω_1 − 2πk`.
    pub residual: f64,
}

/// Solves `sqrt(Ω_0² + Δ²) τ = 2πk` with `τ = π/Ω_1`,
/// `Ω_0 = (α1+α2)Ω`, `Ω_1 = (α1−α2)Ω`.
pub fn two_pi_k_rabi(spectrum: &LabeledSpectrum, table: &TransitionTable, k: u32) -> Result<TwoPiKSolution> {
    if spectrum.dim() != 4 {
        return Err(Error::InvalidGate(format!(
            "2πk selection needs two spins, got {}",
            spectrum.spins()
        )));
    }
    let near = table
        .find(Label(0), Label(1))
        .ok_or(Error::UnknownTransition { from: Label(0), to: Label(1) })?;
    let res = table
        .find(Label(2), Label(3))
        .ok_or(Error::UnknownTransition { from: Label(2), to: Label(3) })?;
    let (plus, minus) = (near.coupling.norm(), res.coupling.norm());
    let e = |l| spectrum.energy(Label(l));
    let detuning = (e(1) - e(0)) - (e(3) - e(2));
    let kf = k as f64;
    let disc = 4.0 * kf * kf * minus * minus - plus * plus;
    if k == 0 || disc <= 0.0 {
        return Err(Error::NoSolution { k });
    }
    let rabi = detuning.abs() / disc.sqrt();
    let (o0, o1) = (plus * rabi, minus * rabi);
    let residual = (o0 * o0 + detuning * detuning).sqrt() * (PI / o1) - TAU * kf;
    Ok(TwoPiKSolution {
        k,
        rabi,
        detuning,
        residual,
    })
}

/// `(|00> + |10>)/√2`.
pub fn cnot_initial_state() -> QuantumState {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let z = Complex64::new(0.0, 0.0);
    QuantumState::new(vec![h, z, h, z], 0.0).expect("normalized")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub delta_omega: f64,
    pub rabi: f64,
    /// `p00, p01, p10, p11`.
    pub probabilities: [f64; 4],
}

impl SweepRow {
    /// `p01 + p10`, the population that should be empty.
    pub fn leakage(&self) -> f64 {
        self.probabilities[1] + self.probabilities[2]
    }
}

/// Final probabilities of the CNOT π-pulse applied to
/// [`cnot_initial_state`] with `engine`.
pub fn run_cnot(cfg: &ChainConfig, engine: Engine) -> Result<[f64; 4]> {
    let device = Device::new(cfg.clone(), LabelStrategy::MaxOverlap)?;
    let seq = compile_cnot(device.spectrum(), device.table(), cfg.rabi())?;
    let out = device.run_sequence(&cnot_initial_state(), &seq, engine)?;
    let p = out.state.probabilities();
    Ok([p[0], p[1], p[2], p[3]])
}

/// Exact-engine CNOT probabilities over the grid `δω × Ω`.
///
/// `template` supplies `J` and `ω_0`; rows are ordered by `(δω, Ω)` in the
/// order given.
pub fn cnot_error_sweep(template: &ChainConfig, rabis: &[f64], deltas: &[f64]) -> Result<Vec<SweepRow>> {
    cnot_sweep(template, rabis, deltas, Engine::Exact)
}

/// [`cnot_error_sweep`] with any engine.
pub fn cnot_sweep(template: &ChainConfig, rabis: &[f64], deltas: &[f64], engine: Engine) -> Result<Vec<SweepRow>> {
    let omega0 = template.larmor()[0];
    let points: Vec<(f64, f64)> = deltas
        .iter()
        .flat_map(|&d| rabis.iter().map(move |&r| (d, r)))
        .collect();
    points
        .par_iter()
        .map(|&(delta_omega, rabi)| {
            let cfg = ChainConfig::two_spin(template.coupling(), omega0, delta_omega, rabi)?;
            Ok(SweepRow {
                delta_omega,
                rabi,
                probabilities: run_cnot(&cfg, engine)?,
            })
        })
        .collect()
}
