//! Dormand–Prince 5(4) adaptive integrator for complex vector ODEs.

use num_complex::Complex64;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dopri5Options {
    pub rtol: f64,
    pub atol: f64,
    /// Upper bound on the step size.
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for Dopri5Options {
    fn default() -> Self {
        Dopri5Options {
            rtol: 1e-10,
            atol: 1e-12,
            max_step: f64::INFINITY,
            max_steps: 50_000_000,
        }
    }
}

/// Accepted and rejected step counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Dopri5Stats {
    pub accepted: usize,
    pub rejected: usize,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Integrates `y' = f(t, y)` from `t0` to `t1` in place.
///
/// `f(t, y, dy)` writes the derivative into `dy`.
pub fn dopri5<F>(
    mut f: F,
    t0: f64,
    t1: f64,
    y: &mut [Complex64],
    opts: &Dopri5Options,
) -> Result<Dopri5Stats>
where
    F: FnMut(f64, &[Complex64], &mut [Complex64]),
{
    let mut stats = Dopri5Stats::default();
    let span = t1 - t0;
    if span <= 0.0 {
        return Ok(stats);
    }
    let n = y.len();
    let zero = Complex64::new(0.0, 0.0);
    let mut k = vec![vec![zero; n]; 7];
    let mut tmp = vec![zero; n];
    let mut y_new = vec![zero; n];

    let mut t = t0;
    f(t, y, &mut k[0]);
    let mut h = span.min(opts.max_step);
    {
        // Hairer's starting-step heuristic
        let scale = |yi: Complex64| opts.atol + opts.rtol * yi.norm();
        let d0 = rms(y.iter().map(|yi| yi.norm() / scale(*yi)));
        let d1 = rms(y.iter().zip(&k[0]).map(|(yi, ki)| ki.norm() / scale(*yi)));
        let guess = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        h = h.min(guess);
    }
    let h_min = 1e-14 * t0.abs().max(t1.abs()).max(1.0);

    while t < t1 {
        if stats.accepted + stats.rejected >= opts.max_steps {
            return Err(Error::ToleranceNotMet { time: t });
        }
        let last = t + h >= t1 || t1 - (t + h) < h_min;
        if last {
            h = t1 - t;
        }
        stage(&mut tmp, y, h, &k, &[A21]);
        f(t + C2 * h, &tmp, &mut k[1]);
        stage(&mut tmp, y, h, &k, &[A31, A32]);
        f(t + C3 * h, &tmp, &mut k[2]);
        stage(&mut tmp, y, h, &k, &[A41, A42, A43]);
        f(t + C4 * h, &tmp, &mut k[3]);
        stage(&mut tmp, y, h, &k, &[A51, A52, A53, A54]);
        f(t + C5 * h, &tmp, &mut k[4]);
        stage(&mut tmp, y, h, &k, &[A61, A62, A63, A64, A65]);
        f(t + h, &tmp, &mut k[5]);
        stage(&mut y_new, y, h, &k, &[B1, 0.0, B3, B4, B5, B6]);
        let t_new = if last { t1 } else { t + h };
        let (head, tail) = k.split_at_mut(6);
        f(t_new, &y_new, &mut tail[0]);

        let mut acc = 0.0;
        for i in 0..n {
            let e = (head[0][i] * E1
                + head[2][i] * E3
                + head[3][i] * E4
                + head[4][i] * E5
                + head[5][i] * E6
                + tail[0][i] * E7)
                * h;
            let sc = opts.atol + opts.rtol * y[i].norm().max(y_new[i].norm());
            acc += (e.norm() / sc).powi(2);
        }
        let err = (acc / n as f64).sqrt();

        if err <= 1.0 {
            stats.accepted += 1;
            t = t_new;
            y.copy_from_slice(&y_new);
            k.swap(0, 6);
            if last {
                break;
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h = (h * factor).min(opts.max_step);
        } else {
            stats.rejected += 1;
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
            if h < h_min {
                return Err(Error::ToleranceNotMet { time: t });
            }
        }
    }
    Ok(stats)
}

fn stage(out: &mut [Complex64], y: &[Complex64], h: f64, k: &[Vec<Complex64>], a: &[f64]) {
    for i in 0..y.len() {
        let mut s = Complex64::new(0.0, 0.0);
        for (j, aj) in a.iter().enumerate() {
            if *aj != 0.0 {
                s += k[j][i] * *aj;
            }
        }
        out[i] = y[i] + s * h;
    }
}

fn rms(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v * v, c + 1));
    if count == 0 {
        0.0
    } else {
        (sum / count as f64).sqrt()
    }
}
