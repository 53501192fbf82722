//! Dense operators on the `2^L` product basis.
//!
//! Basis index `s` encodes the spin configuration bitwise: bit `k` set means
//! spin `k` points down. Hence `I^z_k |s> = (1/2 - bit_k(s)) |s>`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{ChainConfig, Error, Result};

/// Default cap on the chain length for dense construction.
pub const DEFAULT_MAX_SPINS: usize = 12;

const HERMITIAN_TOL: f64 = 1e-12;

/// Dense Hermitian matrix on the product basis of a chain.
#[derive(Debug, Clone)]
pub struct HermitianOperator {
    spins: usize,
    matrix: DMatrix<Complex64>,
}

impl HermitianOperator {
    pub fn from_matrix(spins: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = 1usize << spins;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::InvalidConfig(format!(
                "operator is {}x{}, expected {dim}x{dim}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let op = HermitianOperator { spins, matrix };
        let defect = op.hermiticity_defect();
        if defect > HERMITIAN_TOL * op.max_abs() {
            return Err(Error::NotHermitian { defect });
        }
        Ok(op)
    }

    pub fn spins(&self) -> usize {
        self.spins
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |A_ij - conj(A_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Frobenius norm of `[self, other]`.
    pub fn commutator_norm(&self, other: &HermitianOperator) -> f64 {
        let c = &self.matrix * &other.matrix - &other.matrix * &self.matrix;
        c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

#[inline]
pub(crate) fn spin_z(s: usize, k: usize) -> f64 {
    if s >> k & 1 == 1 {
        -0.5
    } else {
        0.5
    }
}

/// Eigenvalue of `I^z_tot` on each product state.
pub fn total_sz(spins: usize) -> Vec<f64> {
    (0..1usize << spins)
        .map(|s| spins as f64 / 2.0 - s.count_ones() as f64)
        .collect()
}

/// Builds `H = -Σ ω_k I^z_k - 2J Σ I_k·I_{k+1}` (open chain, ħ = 1).
pub fn build_hamiltonian(cfg: &ChainConfig) -> Result<HermitianOperator> {
    build_hamiltonian_capped(cfg, DEFAULT_MAX_SPINS)
}

pub fn build_hamiltonian_capped(cfg: &ChainConfig, max_spins: usize) -> Result<HermitianOperator> {
    let spins = cfg.spins();
    if spins > max_spins {
        return Err(Error::DimensionOverflow {
            spins,
            cap: max_spins,
        });
    }
    let dim = 1usize << spins;
    let j = cfg.coupling();
    let larmor = cfg.larmor();
    let mut h = DMatrix::<Complex64>::zeros(dim, dim);
    for s in 0..dim {
        let mut diag = 0.0;
        for (k, w) in larmor.iter().enumerate() {
            diag -= w * spin_z(s, k);
        }
        for k in 0..spins - 1 {
            diag -= 2.0 * j * spin_z(s, k) * spin_z(s, k + 1);
            // flip-flop: -2J (I^+_k I^-_{k+1} + I^-_k I^+_{k+1}) / 2
            if (s >> k & 1) != (s >> (k + 1) & 1) {
                let t = s ^ (0b11 << k);
                h[(t, s)] += Complex64::new(-j, 0.0);
            }
        }
        h[(s, s)] += Complex64::new(diag, 0.0);
    }
    Ok(HermitianOperator { spins, matrix: h })
}

/// `I^z_tot` as an operator.
pub fn total_sz_operator(spins: usize) -> HermitianOperator {
    let diag: Vec<Complex64> = total_sz(spins)
        .into_iter()
        .map(|m| Complex64::new(m, 0.0))
        .collect();
    HermitianOperator {
        spins,
        matrix: DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag)),
    }
}

/// `I²_tot = Σ_{k,l} I_k · I_l`.
pub fn total_spin_squared(spins: usize) -> HermitianOperator {
    let dim = 1usize << spins;
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for s in 0..dim {
        let mut diag = 0.75 * spins as f64;
        for k in 0..spins {
            for l in 0..spins {
                if k == l {
                    continue;
                }
                diag += spin_z(s, k) * spin_z(s, l);
                if (s >> k & 1) != (s >> l & 1) {
                    let t = s ^ (1 << k) ^ (1 << l);
                    m[(t, s)] += Complex64::new(0.5, 0.0);
                }
            }
        }
        m[(s, s)] += Complex64::new(diag, 0.0);
    }
    HermitianOperator { spins, matrix: m }
}

/// Applies `Σ_k I^-_k` to a product-basis vector.
pub fn apply_lowering(spins: usize, input: &[Complex64], output: &mut [Complex64]) {
    output.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
    for (s, &amp) in input.iter().enumerate() {
        if amp == Complex64::new(0.0, 0.0) {
            continue;
        }
        for k in 0..spins {
            if s >> k & 1 == 0 {
                output[s | 1 << k] += amp;
            }
        }
    }
}

/// Dense `Σ_k I^-_k`.
pub fn lowering_matrix(spins: usize) -> DMatrix<Complex64> {
    let dim = 1usize << spins;
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for s in 0..dim {
        for k in 0..spins {
            if s >> k & 1 == 0 {
                m[(s | 1 << k, s)] += Complex64::new(1.0, 0.0);
            }
        }
    }
    m
}

/// Rotating-frame drive `V0 = -(Ω/2)(e^{-iφ} Σ I^- + e^{+iφ} Σ I^+)`.
///
/// The lab-frame drive at time `t` is `V(t) = R(t) V0 R(t)^†` with
/// `R(t) = exp(iνt I^z_tot)`, which equals `V0` with `φ → νt + φ`.
pub fn drive_matrix(spins: usize, rabi: f64, phase: f64) -> DMatrix<Complex64> {
    let lower = lowering_matrix(spins);
    let e = Complex64::from_polar(1.0, -phase);
    let mut v = lower.map(|z| z * e);
    v += lower.adjoint().map(|z| z * e.conj());
    v * Complex64::new(-rabi / 2.0, 0.0)
}
