use num_complex::Complex64;

use crate::integrator::{dopri5, Dopri5Options};
use crate::{LabeledSpectrum, Pulse, QuantumState, Result};

use super::Tolerances;

/// Full interaction-picture equations over every labeled level.
///
/// For each coupling (upper `i`, lower `f`, `g = <f|Σ I^-|i>`) the drive
/// `V(t) = -(Ω/2)(e^{-i(νt+φ)} Σ I^- + h.c.)` contributes
///
/// ```text
/// dC_f/dt += i(Ω/2) g e^{-iφ} e^{i(E_f - E_i - ν)t} C_i
/// dC_i/dt += i(Ω/2) ḡ e^{+iφ} e^{-i(E_f - E_i - ν)t} C_f
/// ```
///
/// with `t` on the absolute clock. No transition is dropped.
pub fn evolve_exact(
    state: &QuantumState,
    spectrum: &LabeledSpectrum,
    pulse: &Pulse,
    tol: &Tolerances,
) -> Result<QuantumState> {
    super::check_clock(state, pulse)?;
    let mut amps = state.amplitudes().to_vec();
    if pulse.duration == 0.0 || pulse.rabi == 0.0 {
        return Ok(QuantumState::from_raw(amps, pulse.end_time()));
    }
    let couplings = spectrum.couplings();
    let nu = pulse.frequency;

    // e^{i(E_f - E_i - ν)t} = p_f conj(p_i) with p_n = e^{i(E_n + ν m_n)t}
    let eps: Vec<f64> = (0..spectrum.dim())
        .map(|n| {
            let l = crate::Label(n);
            spectrum.energy(l) + nu * spectrum.m(l)
        })
        .collect();
    let offset = eps.iter().sum::<f64>() / eps.len() as f64;
    let eps: Vec<f64> = eps.into_iter().map(|e| e - offset).collect();

    let mut fastest = 0.0_f64;
    for c in couplings {
        let d = spectrum.energy(c.lower) - spectrum.energy(c.upper);
        fastest = fastest.max((d - nu).abs()).max((d + nu).abs());
    }
    let max_step = if fastest > 0.0 {
        std::f64::consts::TAU / fastest / 20.0
    } else {
        f64::INFINITY
    };

    let pref: Vec<(usize, usize, Complex64)> = couplings
        .iter()
        .map(|c| {
            let k = Complex64::i() * (pulse.rabi / 2.0) * c.g * Complex64::from_polar(1.0, -pulse.phase);
            (c.upper.0, c.lower.0, k)
        })
        .collect();
    let mut phases = vec![Complex64::new(0.0, 0.0); eps.len()];
    let rhs = |t: f64, y: &[Complex64], dy: &mut [Complex64]| {
        for (p, e) in phases.iter_mut().zip(&eps) {
            *p = Complex64::from_polar(1.0, e * t);
        }
        dy.iter_mut().for_each(|d| *d = Complex64::new(0.0, 0.0));
        for &(i, f, k) in &pref {
            let w = phases[f] * phases[i].conj();
            dy[f] += k * w * y[i];
            // i ḡ e^{iφ} = -conj(i g e^{-iφ})
            dy[i] -= (k * w).conj() * y[f];
        }
    };
    let opts = Dopri5Options {
        rtol: tol.rtol,
        atol: tol.atol,
        max_step,
        max_steps: tol.max_steps,
    };
    dopri5(rhs, pulse.start_time, pulse.end_time(), &mut amps, &opts)?;
    Ok(QuantumState::from_raw(amps, pulse.end_time()))
}
