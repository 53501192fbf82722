//! Randomized invariants shared by the property tests and the acceptance
//! suite.

#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use spinchain::compiler::{
    cnot_error_sweep, cnot_initial_state, compile_cnot, compile_gate, ideal_gate, make_pulse,
    two_pi_k_rabi,
};
use spinchain::operator::{total_spin_squared, total_sz_operator};
use spinchain::shor::{self, ShorProgram};
use spinchain::spectrum::two_spin_analytic;
use spinchain::{
    build_hamiltonian, ChainConfig, Complex64, Device, Engine, GateIntent, Label,
    LabelStrategy, LabeledSpectrum, Pulse, QuantumState,
};

pub const CASES: u32 = 100;

/// Default CNOT sweep grid: `Ω = 0.02, 0.022, …, 0.5`.
pub fn sweep_grid() -> Vec<f64> {
    (0..=240).map(|i| 0.02 + 0.002 * i as f64).collect()
}

pub struct Property {
    pub name: &'static str,
    pub check: fn() -> Result<(), String>,
}

pub const PROPERTIES: &[Property] = &[
    Property { name: "hamiltonian_commutes_with_total_sz", check: sz_commutes },
    Property { name: "total_spin_conserved_iff_uniform", check: spin_squared_iff_uniform },
    Property { name: "selection_rule", check: selection_rule },
    Property { name: "two_spin_sum_rule", check: sum_rule },
    Property { name: "two_spin_analytic_agreement", check: analytic_agreement },
    Property { name: "labeling_quality_weak_coupling", check: labeling_quality },
    Property { name: "norm_conservation", check: norm_conservation },
    Property { name: "engine_agreement", check: engine_agreement },
    Property { name: "oracle_equivalence", check: oracle_equivalence },
    Property { name: "rwa_time_reversal", check: time_reversal },
    Property { name: "monotone_rwa_convergence", check: monotone_rwa_convergence },
    Property { name: "pulse_text_round_trip", check: pulse_round_trip },
    Property { name: "two_pi_k_residual", check: two_pi_k_residual },
    Property { name: "rwa_gate_fidelity", check: rwa_gate_fidelity },
    Property { name: "cnot_error_ordering", check: error_ordering },
    Property { name: "shor_stage_fidelity", check: shor_stage_fidelity },
    Property { name: "shor_exact_probability_conservation", check: shor_probability_conservation },
    Property { name: "shor_rwa_target_symmetry", check: shor_target_symmetry },
    Property { name: "shor_exact_total_variation", check: shor_exact_total_variation },
];

pub fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        max_shrink_iters: 16,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    runner(cases).run(&strategy, test).map_err(|e| e.to_string())
}

fn fail<E: std::fmt::Display>(e: E) -> TestCaseError {
    TestCaseError::fail(e.to_string())
}

/// Pulse on a randomly chosen transition; coinciding frequencies leave
/// no addressable pulse, so such inputs are rejected rather than failed.
fn pulse(d: &Device, target: (Label, Label), theta: f64, phi: f64, rabi: f64) -> Result<Pulse, TestCaseError> {
    match make_pulse(d.spectrum(), d.table(), target, theta, phi, rabi) {
        Ok(p) => Ok(p),
        Err(e @ spinchain::Error::DegenerateTransition { .. }) => Err(TestCaseError::reject(e.to_string())),
        Err(e) => Err(fail(e)),
    }
}

fn random_state(dim: usize, raw: &[(f64, f64)]) -> QuantumState {
    let amps: Vec<Complex64> = raw[..dim].iter().map(|&(r, i)| Complex64::new(r, i)).collect();
    let norm = amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt().max(1e-3);
    let mut amps: Vec<Complex64> = amps.into_iter().map(|c| c / norm).collect();
    if amps.iter().map(|c| c.norm_sqr()).sum::<f64>() < 0.5 {
        amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[0] = Complex64::new(1.0, 0.0);
    }
    let norm = amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    QuantumState::new(amps.into_iter().map(|c| c / norm).collect(), 0.0).expect("normalized")
}

fn amplitudes() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 16)
}

fn max_entry(a: &DMatrix<Complex64>) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn sz_commutes() -> Result<(), String> {
    let s = (2usize..=5, 0.0..5.0f64, prop::collection::vec(50.0..200.0f64, 5));
    run(CASES, s, |(spins, j, w)| {
        let cfg = ChainConfig::new(j, w[..spins].to_vec(), 0.1).map_err(fail)?;
        let h = build_hamiltonian(&cfg).map_err(fail)?;
        let c = h.commutator_norm(&total_sz_operator(spins));
        prop_assert!(c <= 1e-12 * h.max_abs(), "[H, Iz] = {c:e}");
        Ok(())
    })
}

pub fn spin_squared_iff_uniform() -> Result<(), String> {
    let s = (2usize..=5, 0.5..5.0f64, 50.0..200.0f64, any::<bool>(), 1.0..50.0f64);
    run(CASES, s, |(spins, j, w0, uniform, delta)| {
        let delta = if uniform { 0.0 } else { delta };
        let cfg = ChainConfig::linear(spins, j, w0, delta, 0.1).map_err(fail)?;
        let h = build_hamiltonian(&cfg).map_err(fail)?;
        let c = h.commutator_norm(&total_spin_squared(spins));
        if uniform {
            prop_assert!(c <= 1e-10 * h.max_abs(), "uniform: [H, I²] = {c:e}");
        } else {
            prop_assert!(c > 1e-6, "gradient: [H, I²] = {c:e}");
        }
        Ok(())
    })
}

pub fn selection_rule() -> Result<(), String> {
    let s = (2usize..=4, 0.1..3.0f64, 80.0..120.0f64, 10.0..60.0f64);
    run(CASES, s, |(spins, j, w0, delta)| {
        let cfg = ChainConfig::linear(spins, j, w0, delta, 0.1).map_err(fail)?;
        let spec = LabeledSpectrum::from_config(&cfg, LabelStrategy::Matched).map_err(fail)?;
        for a in 0..spec.dim() {
            for b in 0..spec.dim() {
                let g = spec.lowering_element(Label(a), Label(b));
                if g.norm() > 1e-10 {
                    let dm = spec.m(Label(b)) - spec.m(Label(a));
                    prop_assert!((dm - 1.0).abs() < 1e-9, "<{a}|I^-|{b}> = {g} with Δm = {dm}");
                }
            }
        }
        Ok(())
    })
}

pub fn sum_rule() -> Result<(), String> {
    let s = (0.1..5.0f64, 50.0..200.0f64, 1.0..300.0f64);
    run(CASES, s, |(j, w0, delta)| {
        let cfg = ChainConfig::two_spin(j, w0, delta, 0.1).map_err(fail)?;
        let spec = LabeledSpectrum::from_config(&cfg, LabelStrategy::MaxOverlap).map_err(fail)?;
        let e = |n| spec.energy(Label(n));
        let lhs = (e(1) - e(0)) - (e(3) - e(2));
        prop_assert!((lhs - 2.0 * j).abs() <= 1e-9 * (w0 + delta), "{lhs} vs {}", 2.0 * j);
        Ok(())
    })
}

pub fn analytic_agreement() -> Result<(), String> {
    let s = (0.1..5.0f64, 50.0..200.0f64, 1.0..300.0f64);
    run(CASES, s, |(j, w0, delta)| {
        let cfg = ChainConfig::two_spin(j, w0, delta, 0.1).map_err(fail)?;
        let spec = LabeledSpectrum::from_config(&cfg, LabelStrategy::MaxOverlap).map_err(fail)?;
        let a = two_spin_analytic(j, w0, w0 + delta);
        for n in 0..4 {
            let d = (a.energies[n] - spec.energy(Label(n))).abs();
            prop_assert!(d <= 1e-9 * (w0 + delta), "level {n}: {d:e}");
        }
        Ok(())
    })
}

pub fn labeling_quality() -> Result<(), String> {
    let s = (2usize..=5, 0.1..5.0f64, 10.0..100.0f64, 50.0..200.0f64);
    run(CASES, s, |(spins, j, ratio, w0)| {
        let cfg = ChainConfig::linear(spins, j, w0, ratio * j, 0.1).map_err(fail)?;
        let spec = LabeledSpectrum::from_config(&cfg, LabelStrategy::MaxOverlap).map_err(fail)?;
        let q = spec.min_overlap_quality();
        prop_assert!(q >= 0.9, "overlap quality {q}");
        Ok(())
    })
}

/// Random chain of two or three spins with a pulse on one of its allowed
/// transitions.
#[derive(Debug, Clone)]
struct PulseCase {
    spins: usize,
    coupling: f64,
    omega0: f64,
    delta: f64,
    transition: usize,
    theta: f64,
    phi: f64,
    amps: Vec<(f64, f64)>,
}

fn pulse_case(spins: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = PulseCase> {
    pulse_case_in(spins, 0.5..3.0, 80.0..120.0, 15.0..60.0)
}

fn pulse_case_in(
    spins: std::ops::RangeInclusive<usize>,
    coupling: std::ops::Range<f64>,
    omega0: std::ops::Range<f64>,
    delta: std::ops::Range<f64>,
) -> impl Strategy<Value = PulseCase> {
    (spins, coupling, omega0, delta, any::<prop::sample::Index>(), 0.3..PI, 0.0..TAU, amplitudes())
        .prop_map(|(spins, coupling, omega0, delta, t, theta, phi, amps)| PulseCase {
            spins,
            coupling,
            omega0,
            delta,
            transition: t.index(1 << 12),
            theta,
            phi,
            amps,
        })
}

impl PulseCase {
    fn device(&self, rabi: f64) -> Result<Device, TestCaseError> {
        let cfg = ChainConfig::linear(self.spins, self.coupling, self.omega0, self.delta, rabi).map_err(fail)?;
        Device::new(cfg, LabelStrategy::Matched).map_err(fail)
    }

    /// The `k`-th single-spin-flip transition after the drawn index.
    fn target_at(&self, device: &Device, k: usize) -> (Label, Label) {
        let flips: Vec<(Label, Label)> = device
            .table()
            .entries()
            .iter()
            .filter(|t| (t.from.0 ^ t.to.0).count_ones() == 1)
            .map(|t| (t.from, t.to))
            .collect();
        flips[(self.transition + 7 * k) % flips.len()]
    }

    fn target(&self, device: &Device) -> (Label, Label) {
        self.target_at(device, 0)
    }

    fn state(&self) -> QuantumState {
        random_state(1 << self.spins, &self.amps)
    }
}

pub fn norm_conservation() -> Result<(), String> {
    let s = (pulse_case(2..=3), 0.2..1.0f64, 1usize..=3);
    run(CASES, s, |(case, rabi, count)| {
        let d = case.device(rabi)?;
        let mut seq = spinchain::PulseSequence::new();
        for k in 0..count {
            let p = pulse(&d, case.target_at(&d, k), case.theta, case.phi, rabi)?;
            seq.append(p).map_err(fail)?;
        }
        let r = d.run_sequence(&case.state(), &seq, Engine::Rwa).map_err(fail)?;
        prop_assert!(r.max_norm_drift() <= 1e-12, "rwa drift {:e}", r.max_norm_drift());
        let e = d.run_sequence(&case.state(), &seq, Engine::Exact).map_err(fail)?;
        prop_assert!(e.max_norm_drift() <= 1e-9, "exact drift {:e}", e.max_norm_drift());
        Ok(())
    })
}

/// Weak drive at low Larmor frequencies, where exact propagation over
/// pulses of duration `~1/(0.01·Δmin)` stays cheap. Targets whose nearest
/// neighbour is split only in second order are skipped.
pub fn engine_agreement() -> Result<(), String> {
    let s = (pulse_case_in(2..=3, 1.0..4.0, 20.0..40.0, 10.0..20.0), 0.3..1.0f64);
    run(CASES, s, |(case, u)| {
        let d = case.device(1.0)?;
        let (a, b) = case.target(&d);
        let nu = d.table().find(a, b).expect("listed").frequency;
        let gap = d
            .table()
            .entries()
            .iter()
            .filter(|t| (t.from, t.to) != (a, b))
            .map(|t| (t.frequency - nu).abs())
            .fold(f64::INFINITY, f64::min);
        if gap < 0.05 * nu {
            return Err(TestCaseError::reject(format!("second-order splitting {gap:e} at {nu}")));
        }
        let rabi = 0.01 * gap * u;
        let p = pulse(&d, (a, b), case.theta, case.phi, rabi)?;
        let s0 = case.state();
        let r = d.evolve(&s0, &p, Engine::Rwa).map_err(fail)?;
        let e = d.evolve(&s0, &p, Engine::Exact).map_err(fail)?;
        let bound = 10.0 * rabi / gap;
        prop_assert!(r.distance(&e) <= bound, "|exact - rwa| = {:e} > {bound:e}", r.distance(&e));
        Ok(())
    })
}

/// Random pulse for the oracle comparison: arbitrary frequency near an
/// allowed transition, arbitrary phase and amplitude.
pub fn oracle_pulse_strategy(
    duration: std::ops::Range<f64>,
) -> impl Strategy<Value = (usize, f64, f64, f64, usize, f64, f64, f64, f64, Vec<(f64, f64)>)> {
    (
        2usize..=4,
        0.5..30.0f64,
        80.0..120.0f64,
        10.0..40.0f64,
        0usize..4096,
        -2.0..2.0f64,
        0.0..TAU,
        0.05..1.0f64,
        duration,
        amplitudes(),
    )
}

/// `(|exact − oracle|, exact drift, oracle drift)` for one random pulse.
pub fn oracle_case(
    (spins, j, w0, delta, t, detune, phi, rabi, tau, amps): (usize, f64, f64, f64, usize, f64, f64, f64, f64, Vec<(f64, f64)>),
) -> spinchain::Result<(f64, f64, f64)> {
    let cfg = ChainConfig::linear(spins, j, w0, delta, rabi)?;
    let d = Device::new(cfg, LabelStrategy::Matched)?;
    let tr = d.table().entries()[t % d.table().len()];
    let p = Pulse::new(tr.frequency + detune, phi, rabi, tau)?.with_start(0.5);
    let s0 = random_state(d.dim(), &amps).with_time(0.5);
    let e = d.evolve(&s0, &p, Engine::Exact)?;
    let o = d.evolve(&s0, &p, Engine::Oracle)?;
    Ok((e.distance(&o), e.norm_drift(), o.norm_drift()))
}

pub fn oracle_equivalence() -> Result<(), String> {
    run(CASES, oracle_pulse_strategy(0.2..1.0), |args| {
        let (dist, de, dr) = oracle_case(args).map_err(fail)?;
        prop_assert!(dist <= 1e-7, "|exact - oracle| = {dist:e}");
        prop_assert!(de <= 1e-9 && dr <= 1e-9, "drift {de:e} {dr:e}");
        Ok(())
    })
}

pub fn time_reversal() -> Result<(), String> {
    let s = (pulse_case(2..=4), 0.05..1.0f64);
    run(CASES, s, |(case, rabi)| {
        let d = case.device(rabi)?;
        let (a, b) = case.target(&d);
        let p = pulse(&d, (a, b), case.theta, case.phi, rabi)?;
        let back = pulse(&d, (a, b), case.theta, case.phi + PI, rabi)?.with_start(p.end_time());
        let s0 = case.state();
        let mid = d.evolve(&s0, &p, Engine::Rwa).map_err(fail)?;
        let out = d.evolve(&mid, &back, Engine::Rwa).map_err(fail)?;
        prop_assert!(out.distance(&s0) <= 1e-12, "distance {:e}", out.distance(&s0));
        Ok(())
    })
}

fn cnot_deviation(delta: f64, rabi: f64) -> spinchain::Result<f64> {
    let cfg = ChainConfig::two_spin(1.0, 100.0, delta, rabi)?;
    let d = Device::new(cfg, LabelStrategy::MaxOverlap)?;
    let seq = compile_cnot(d.spectrum(), d.table(), rabi)?;
    let s0 = cnot_initial_state();
    let r = d.run_sequence(&s0, &seq, Engine::Rwa)?.state.probabilities();
    let e = d.run_sequence(&s0, &seq, Engine::Exact)?.state.probabilities();
    Ok(r.iter().zip(&e).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

pub fn monotone_rwa_convergence() -> Result<(), String> {
    run(CASES, (10.0..250.0f64, 0.1..0.5f64), |(delta, rabi)| {
        let strong = cnot_deviation(delta, rabi).map_err(fail)?;
        let weak = cnot_deviation(delta, rabi / 10.0).map_err(fail)?;
        prop_assert!(weak < strong, "Ω {rabi}: {strong:e}, Ω/10: {weak:e}");
        Ok(())
    })
}

pub fn pulse_round_trip() -> Result<(), String> {
    let s = (1e-3..1e4f64, -10.0..10.0f64, 0.0..5.0f64, 0.0..1e3f64, prop::option::of((0usize..64, 0usize..64)));
    run(CASES, s, |(nu, phi, rabi, tau, target)| {
        let mut p = Pulse::new(nu, phi, rabi, tau).map_err(fail)?;
        if let Some((a, b)) = target {
            p = p.with_target(Label(a), Label(b));
        }
        let mut seq = spinchain::PulseSequence::new();
        seq.append(p).map_err(fail)?;
        let back: spinchain::PulseSequence = seq.to_string().parse().map_err(fail)?;
        prop_assert_eq!(seq, back);
        Ok(())
    })
}

pub fn two_pi_k_residual() -> Result<(), String> {
    run(CASES, (0.5..2.0f64, 50.0..500.0f64, 1u32..=6), |(j, delta, k)| {
        let cfg = ChainConfig::two_spin(j, 100.0, delta, 0.1).map_err(fail)?;
        let d = Device::new(cfg, LabelStrategy::MaxOverlap).map_err(fail)?;
        let s = two_pi_k_rabi(d.spectrum(), d.table(), k).map_err(fail)?;
        prop_assert!(s.rabi > 0.0);
        let g0 = d.table().find(Label(0), Label(1)).expect("listed").coupling.norm();
        let g1 = d.table().find(Label(2), Label(3)).expect("listed").coupling.norm();
        let r = ((g0 * s.rabi).powi(2) + s.detuning.powi(2)).sqrt() * PI / (g1 * s.rabi) - TAU * k as f64;
        prop_assert!(r.abs() <= 1e-9, "residual {r:e}");
        Ok(())
    })
}

fn gate_strategy() -> impl Strategy<Value = (usize, GateIntent)> {
    (2usize..=4).prop_flat_map(|spins| {
        let rot = (0..spins, 0.01..TAU, 0.0..TAU)
            .prop_map(|(qubit, theta, phi)| GateIntent::Rotation { qubit, theta, phi });
        let cnot = (0..spins, 1..spins).prop_map(move |(c, dt)| GateIntent::Cnot {
            control: c,
            target: (c + dt) % spins,
        });
        let cphase = (0..spins, 1..spins, -PI..PI).prop_map(move |(a, db, phi)| GateIntent::ConditionalPhase {
            a,
            b: (a + db) % spins,
            phi,
        });
        (Just(spins), prop_oneof![rot, cnot, cphase])
    })
}

pub fn rwa_gate_fidelity() -> Result<(), String> {
    let s = (gate_strategy(), 0.5..2.0f64, 20.0..60.0f64, 0.05..0.5f64);
    run(CASES, s, |((spins, gate), j, delta, rabi)| {
        let cfg = ChainConfig::linear(spins, j, 100.0, delta, rabi).map_err(fail)?;
        let d = Device::new(cfg, LabelStrategy::Matched).map_err(fail)?;
        let seq = match compile_gate(d.spectrum(), d.table(), &gate, rabi) {
            Ok(seq) => seq,
            Err(e @ spinchain::Error::DegenerateTransition { .. }) => return Err(TestCaseError::reject(e.to_string())),
            Err(e) => return Err(fail(e)),
        };
        let u = d.rwa_propagator(&seq).map_err(fail)?;
        let dev = max_entry(&(u - ideal_gate(spins, &gate)));
        prop_assert!(dev <= 1e-10, "{gate}: deviation {dev:e}");
        Ok(())
    })
}

/// `Σ |p − p_ideal|` against `(|00> + i|11>)/√2`.
pub fn cnot_infidelity(p: &[f64; 4]) -> f64 {
    (p[0] - 0.5).abs() + p[1] + p[2] + (p[3] - 0.5).abs()
}

pub fn error_ordering() -> Result<(), String> {
    let grid = sweep_grid();
    let template = ChainConfig::two_spin(1.0, 100.0, 10.0, 0.1).map_err(|e| e.to_string())?;
    let rows = cnot_error_sweep(&template, &grid, &[10.0, 250.0]).map_err(|e| e.to_string())?;
    let (narrow, wide) = rows.split_at(grid.len());
    let violations: Vec<String> = narrow
        .iter()
        .zip(wide)
        .filter(|(n, w)| cnot_infidelity(&w.probabilities) >= cnot_infidelity(&n.probabilities))
        .map(|(n, w)| {
            format!(
                "Ω={:.3}: δω=10 {:.3e}, δω=250 {:.3e}",
                n.rabi,
                cnot_infidelity(&n.probabilities),
                cnot_infidelity(&w.probabilities)
            )
        })
        .collect();
    if violations.is_empty() {
        Ok(())
    } else {
        Err(format!(
            "{} of {} grid points violate the ordering, e.g. {}",
            violations.len(),
            grid.len(),
            violations[..violations.len().min(3)].join("; ")
        ))
    }
}

pub fn shor_stage_fidelity() -> Result<(), String> {
    let s = (25.0..35.0f64, 0.0..15.0f64, 0.2..1.0f64);
    run(CASES, s, |(j, excess, rabi)| {
        let delta = j + excess;
        let cfg = ChainConfig::linear(4, j, 100.0, delta, rabi).map_err(fail)?;
        let d = Device::new(cfg, LabelStrategy::Matched).map_err(fail)?;
        let program = match ShorProgram::build(&d) {
            Ok(p) => p,
            Err(e @ spinchain::Error::DegenerateTransition { .. }) => return Err(TestCaseError::reject(e.to_string())),
            Err(e) => return Err(fail(e)),
        };
        for (k, (seq, ideal)) in program.stages().iter().zip(&program.ideal).enumerate() {
            let dev = max_entry(&(d.rwa_propagator(seq).map_err(fail)? - ideal));
            prop_assert!(dev <= 1e-9, "stage {}: {dev:e}", k + 1);
        }
        Ok(())
    })
}

pub fn shor_probability_conservation() -> Result<(), String> {
    let (_, report) = shor::run_shor(&shor::default_config(), Engine::Exact).map_err(|e| e.to_string())?;
    let drift = (1.0 - report.total_probability()).abs();
    if drift <= 1e-8 {
        Ok(())
    } else {
        Err(format!("|1 - Σp| = {drift:e}"))
    }
}

pub fn shor_target_symmetry() -> Result<(), String> {
    let (_, report) = shor::run_shor(&shor::default_config(), Engine::Rwa).map_err(|e| e.to_string())?;
    let p = &report.probabilities;
    let first = p[shor::TARGETS[0]];
    if shor::TARGETS.iter().all(|&n| (p[n] - first).abs() <= 1e-12) && (first - 0.25).abs() <= 1e-12 {
        Ok(())
    } else {
        Err(format!("target probabilities {:?}", shor::TARGETS.map(|n| p[n])))
    }
}

/// Half the L1 distance between the exact-engine output and the ideal
/// distribution.
pub fn shor_total_variation(report: &shor::ShorReport) -> f64 {
    0.5 * report
        .probabilities
        .iter()
        .zip(&report.ideal_probabilities)
        .map(|(p, q)| (p - q).abs())
        .sum::<f64>()
}

pub fn shor_exact_total_variation() -> Result<(), String> {
    let (_, report) = shor::run_shor(&shor::default_config(), Engine::Exact).map_err(|e| e.to_string())?;
    let tv = shor_total_variation(&report);
    if tv <= 0.05 {
        Ok(())
    } else {
        Err(format!("total variation {tv:.4} > 0.05"))
    }
}
