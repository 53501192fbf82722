use num_complex::Complex64;

use crate::{Error, LabeledSpectrum, Pulse, QuantumState, Result, TransitionTable};

/// Absolute tolerance on `|ν − |E_f − E_i||`.
pub const RESONANCE_TOL: f64 = 1e-9;

/// Resonant two-level rotation on the pulse's target transition.
///
/// With `i` the upper (higher `m`) level, `f` the lower one,
/// `g = <f|Σ I^-|i>`, `Ω_eff = Ω|g|` and `s, c` the sine and cosine of
/// `Ω_eff τ / 2`:
///
/// ```text
/// C_f <- C_f c + i e^{-i(φ - arg g)} C_i s
/// C_i <- C_i c + i e^{+i(φ - arg g)} C_f s
/// ```
///
/// All other amplitudes are untouched; the clock moves to the pulse end.
pub fn evolve_rwa(
    state: &QuantumState,
    spectrum: &LabeledSpectrum,
    table: &TransitionTable,
    pulse: &Pulse,
) -> Result<QuantumState> {
    super::check_clock(state, pulse)?;
    let (a, b) = pulse.target.ok_or(Error::MissingTarget)?;
    let t = table.find(a, b).ok_or(Error::UnknownTransition { from: a, to: b })?;
    let transition = (spectrum.energy(b) - spectrum.energy(a)).abs();
    if (pulse.frequency - transition).abs() > RESONANCE_TOL {
        return Err(Error::NotResonant {
            from: a,
            to: b,
            pulse: pulse.frequency,
            transition,
        });
    }
    let (i, f) = (t.from.0, t.to.0);
    let g = t.coupling;
    let half = pulse.rabi * g.norm() * pulse.duration / 2.0;
    let (s, c) = half.sin_cos();
    let rot = Complex64::from_polar(1.0, -(pulse.phase - g.arg())) * Complex64::i();
    let rot_back = Complex64::from_polar(1.0, pulse.phase - g.arg()) * Complex64::i();
    let mut amps = state.amplitudes().to_vec();
    let (ci, cf) = (amps[i], amps[f]);
    amps[f] = cf * c + rot * ci * s;
    amps[i] = ci * c + rot_back * cf * s;
    Ok(QuantumState::from_raw(amps, pulse.end_time()))
}
