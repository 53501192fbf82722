//! Exact diagonalization, logical labeling and transition structure.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::assignment::min_cost_assignment;
use crate::operator::{apply_lowering, total_sz};
use crate::{ChainConfig, Error, HermitianOperator, Label, Result};

const RESIDUAL_TOL: f64 = 1e-10;
const M_ROUNDING_TOL: f64 = 1e-6;
const M_VARIANCE_TOL: f64 = 1e-10;
const LABEL_UNIQUE_TOL: f64 = 1e-9;
const COUPLING_EPS: f64 = 1e-12;
const EIGEN_EPS: f64 = 1e-15;
const EIGEN_MAX_ITER: usize = 10_000;

/// Eigenpairs of a chain Hamiltonian, ordered by ascending energy.
#[derive(Debug, Clone)]
pub struct Spectrum {
    spins: usize,
    energies: Vec<f64>,
    vectors: DMatrix<Complex64>,
    m_values: Vec<f64>,
    norm: f64,
}

/// Full Hermitian eigendecomposition of `h`.
///
/// When `h` conserves `I^z_tot` the problem is solved sector by sector; the
/// dense fallback handles arbitrary Hermitian input. Each eigenstate must
/// have a definite spin projection.
pub fn diagonalize(h: &HermitianOperator) -> Result<Spectrum> {
    let spins = h.spins();
    let dim = h.dim();
    let a = h.matrix();
    let sz = total_sz(spins);
    let conserves = (0..dim).all(|i| (0..dim).all(|j| sz[i] == sz[j] || a[(i, j)].norm() == 0.0));

    let blocks: Vec<Vec<usize>> = if conserves {
        let mut sectors: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (s, m) in sz.iter().enumerate() {
            sectors.entry(-(2.0 * m) as i64).or_default().push(s);
        }
        sectors.into_values().collect()
    } else {
        vec![(0..dim).collect()]
    };

    let mut pairs: Vec<(f64, DVector<Complex64>)> = Vec::with_capacity(dim);
    for block in &blocks {
        let n = block.len();
        let sub = DMatrix::from_fn(n, n, |i, j| a[(block[i], block[j])]);
        let eig = SymmetricEigen::try_new(sub, EIGEN_EPS, EIGEN_MAX_ITER).ok_or(
            Error::NonConvergence {
                residual: f64::INFINITY,
            },
        )?;
        for k in 0..n {
            let mut v = DVector::<Complex64>::zeros(dim);
            for (i, &s) in block.iter().enumerate() {
                v[s] = eig.eigenvectors[(i, k)];
            }
            pairs.push((eig.eigenvalues[k], v));
        }
    }

    let norm = h.frobenius_norm();
    let mut worst = 0.0_f64;
    let mut m_values = Vec::with_capacity(dim);
    for (index, (e, v)) in pairs.iter().enumerate() {
        let r = (a * v - v * Complex64::new(*e, 0.0)).norm();
        worst = worst.max(r);
        let mean: f64 = v.iter().zip(&sz).map(|(c, m)| c.norm_sqr() * m).sum();
        let var: f64 = v.iter().zip(&sz).map(|(c, m)| c.norm_sqr() * (m - mean).powi(2)).sum();
        let rounded = (2.0 * mean).round() / 2.0;
        if (mean - rounded).abs() > M_ROUNDING_TOL || var > M_VARIANCE_TOL {
            return Err(Error::IndefiniteProjection { index, value: mean });
        }
        m_values.push(rounded);
    }
    if worst > RESIDUAL_TOL * norm.max(f64::MIN_POSITIVE) && worst > 0.0 {
        return Err(Error::NonConvergence { residual: worst });
    }

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&x, &y| {
        pairs[x]
            .0
            .total_cmp(&pairs[y].0)
            .then(m_values[y].total_cmp(&m_values[x]))
    });
    let energies = order.iter().map(|&i| pairs[i].0).collect();
    let m_sorted = order.iter().map(|&i| m_values[i]).collect();
    let mut vectors = DMatrix::<Complex64>::zeros(dim, dim);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &pairs[i].1);
    }
    Ok(Spectrum {
        spins,
        energies,
        vectors,
        m_values: m_sorted,
        norm,
    })
}

/// `<f| Σ_k I^-_k |i>` for two product-basis vectors.
fn lowering_element(spins: usize, f: &[Complex64], i: &[Complex64], scratch: &mut [Complex64]) -> Complex64 {
    apply_lowering(spins, i, scratch);
    f.iter().zip(scratch.iter()).map(|(a, b)| a.conj() * b).sum()
}

impl Spectrum {
    pub fn spins(&self) -> usize {
        self.spins
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn m_values(&self) -> &[f64] {
        &self.m_values
    }

    /// Eigenvectors as columns over the product basis.
    pub fn vectors(&self) -> &DMatrix<Complex64> {
        &self.vectors
    }

    /// Frobenius norm of the diagonalized operator.
    pub fn hamiltonian_norm(&self) -> f64 {
        self.norm
    }

    /// `<n| Σ_k I^-_k |m>` between eigenstates `n` and `m`.
    pub fn lowering_element(&self, n: usize, m: usize) -> Complex64 {
        let mut scratch = vec![Complex64::new(0.0, 0.0); self.dim()];
        lowering_element(
            self.spins,
            self.vectors.column(n).as_slice(),
            self.vectors.column(m).as_slice(),
            &mut scratch,
        )
    }

    /// Largest residual `‖H v_n − E_n v_n‖` against `h`.
    pub fn max_residual(&self, h: &HermitianOperator) -> f64 {
        (0..self.dim())
            .map(|n| {
                let v = self.vectors.column(n);
                (h.matrix() * v - v * Complex64::new(self.energies[n], 0.0)).norm()
            })
            .fold(0.0, f64::max)
    }

    /// `max |V^† V − 1|` entrywise.
    pub fn orthonormality_defect(&self) -> f64 {
        let g = self.vectors.adjoint() * &self.vectors;
        let n = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g[(i, j)] - target).norm());
            }
        }
        worst
    }

    /// Eigen-indices connected to `start` by chains of allowed `Δm = ±1`
    /// transitions.
    pub fn reachable_levels(&self, start: usize) -> BTreeSet<usize> {
        let dim = self.dim();
        let mut adjacency = vec![Vec::new(); dim];
        let mut scratch = vec![Complex64::new(0.0, 0.0); dim];
        for i in 0..dim {
            for f in 0..dim {
                if self.m_values[f] != self.m_values[i] - 1.0 {
                    continue;
                }
                let g = lowering_element(
                    self.spins,
                    self.vectors.column(f).as_slice(),
                    self.vectors.column(i).as_slice(),
                    &mut scratch,
                );
                if g.norm() > COUPLING_EPS {
                    adjacency[i].push(f);
                    adjacency[f].push(i);
                }
            }
        }
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(n) = queue.pop_front() {
            for &next in &adjacency[n] {
                if seen.insert(next) {
                    queue.push_back(next);
                }
            }
        }
        seen
    }
}

/// Rule used to attach logical labels to eigenstates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LabelStrategy {
    /// Each eigenstate takes the product state of maximal squared overlap;
    /// that overlap must exceed 1/2 and be unique.
    #[default]
    MaxOverlap,
    /// Within each spin-projection sector, the bijection maximising the
    /// product of squared overlaps. Always succeeds; suited to couplings
    /// comparable to the field gradient.
    Matched,
}

impl std::str::FromStr for LabelStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max-overlap" => Ok(LabelStrategy::MaxOverlap),
            "matched" => Ok(LabelStrategy::Matched),
            other => Err(Error::InvalidConfig(format!("unknown label strategy '{other}'"))),
        }
    }
}

impl std::fmt::Display for LabelStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LabelStrategy::MaxOverlap => "max-overlap",
            LabelStrategy::Matched => "matched",
        })
    }
}

/// Nonzero lowering matrix element between labeled levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    /// Level with the higher spin projection.
    pub upper: Label,
    /// Level with spin projection one lower.
    pub lower: Label,
    /// `<lower| Σ_k I^-_k |upper>`.
    pub g: Complex64,
}

/// Spectrum indexed by logical label.
#[derive(Debug, Clone)]
pub struct LabeledSpectrum {
    spectrum: Spectrum,
    strategy: LabelStrategy,
    eigen_index: Vec<usize>,
    label_of: Vec<Label>,
    energies: Vec<f64>,
    m_values: Vec<f64>,
    overlap_quality: Vec<f64>,
    vectors: DMatrix<Complex64>,
    couplings: Vec<Coupling>,
}

/// Labels `spectrum` with [`LabelStrategy::MaxOverlap`].
pub fn assign_labels(spectrum: &Spectrum) -> Result<LabeledSpectrum> {
    assign_labels_with(spectrum, LabelStrategy::MaxOverlap)
}

pub fn assign_labels_with(spectrum: &Spectrum, strategy: LabelStrategy) -> Result<LabeledSpectrum> {
    let dim = spectrum.dim();
    let overlaps = DMatrix::from_fn(dim, dim, |s, n| spectrum.vectors[(s, n)].norm_sqr());
    let mut label_of = vec![Label(0); dim];
    match strategy {
        LabelStrategy::MaxOverlap => {
            for n in 0..dim {
                let col = overlaps.column(n);
                let (best_s, best) = col
                    .iter()
                    .copied()
                    .enumerate()
                    .max_by(|a, b| a.1.total_cmp(&b.1))
                    .expect("non-empty spectrum");
                let second = col
                    .iter()
                    .enumerate()
                    .filter(|(s, _)| *s != best_s)
                    .map(|(_, &o)| o)
                    .fold(0.0, f64::max);
                if best <= 0.5 || best - second <= LABEL_UNIQUE_TOL {
                    return Err(Error::LabelAmbiguous {
                        index: n,
                        overlap: best,
                    });
                }
                label_of[n] = Label(best_s);
            }
        }
        LabelStrategy::Matched => {
            let sz = total_sz(spectrum.spins);
            let mut sectors: BTreeMap<i64, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
            for s in 0..dim {
                sectors.entry((2.0 * sz[s]) as i64).or_default().0.push(s);
            }
            for n in 0..dim {
                sectors
                    .entry((2.0 * spectrum.m_values[n]) as i64)
                    .or_default()
                    .1
                    .push(n);
            }
            for (states, levels) in sectors.values() {
                if states.len() != levels.len() {
                    return Err(Error::LabelAmbiguous {
                        index: levels.first().copied().unwrap_or(0),
                        overlap: 0.0,
                    });
                }
                let cost: Vec<Vec<f64>> = levels
                    .iter()
                    .map(|&n| {
                        states
                            .iter()
                            .map(|&s| -(overlaps[(s, n)].max(1e-300)).ln())
                            .collect()
                    })
                    .collect();
                for (row, col) in min_cost_assignment(&cost).into_iter().enumerate() {
                    label_of[levels[row]] = Label(states[col]);
                }
            }
        }
    }

    let mut eigen_index = vec![usize::MAX; dim];
    for (n, l) in label_of.iter().enumerate() {
        if eigen_index[l.0] != usize::MAX {
            return Err(Error::LabelAmbiguous {
                index: n,
                overlap: overlaps[(l.0, n)],
            });
        }
        eigen_index[l.0] = n;
    }

    let mut vectors = DMatrix::<Complex64>::zeros(dim, dim);
    let mut energies = Vec::with_capacity(dim);
    let mut m_values = Vec::with_capacity(dim);
    let mut overlap_quality = Vec::with_capacity(dim);
    for label in 0..dim {
        let n = eigen_index[label];
        let col = spectrum.vectors.column(n);
        let anchor = if col[label].norm() > 1e-12 {
            col[label]
        } else {
            *col.iter()
                .max_by(|a, b| a.norm().total_cmp(&b.norm()))
                .expect("non-empty column")
        };
        let phase = anchor.conj() / anchor.norm();
        vectors.set_column(label, &(col * phase));
        energies.push(spectrum.energies[n]);
        m_values.push(spectrum.m_values[n]);
        overlap_quality.push(overlaps[(label, n)]);
    }

    let mut couplings = Vec::new();
    let mut scratch = vec![Complex64::new(0.0, 0.0); dim];
    for upper in 0..dim {
        for lower in 0..dim {
            if m_values[lower] != m_values[upper] - 1.0 {
                continue;
            }
            let g = lowering_element(
                spectrum.spins,
                vectors.column(lower).as_slice(),
                vectors.column(upper).as_slice(),
                &mut scratch,
            );
            if g.norm() > COUPLING_EPS {
                couplings.push(Coupling {
                    upper: Label(upper),
                    lower: Label(lower),
                    g,
                });
            }
        }
    }

    Ok(LabeledSpectrum {
        spectrum: spectrum.clone(),
        strategy,
        eigen_index,
        label_of,
        energies,
        m_values,
        overlap_quality,
        vectors,
        couplings,
    })
}

impl LabeledSpectrum {
    /// Builds, diagonalizes and labels the Hamiltonian of `cfg`.
    pub fn from_config(cfg: &ChainConfig, strategy: LabelStrategy) -> Result<Self> {
        let h = crate::build_hamiltonian(cfg)?;
        assign_labels_with(&diagonalize(&h)?, strategy)
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn strategy(&self) -> LabelStrategy {
        self.strategy
    }

    pub fn spins(&self) -> usize {
        self.spectrum.spins
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn energy(&self, label: Label) -> f64 {
        self.energies[label.0]
    }

    /// Energies indexed by label.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn m(&self, label: Label) -> f64 {
        self.m_values[label.0]
    }

    /// Squared overlap of the eigenstate with its own label's product state.
    pub fn overlap_quality(&self, label: Label) -> f64 {
        self.overlap_quality[label.0]
    }

    pub fn min_overlap_quality(&self) -> f64 {
        self.overlap_quality.iter().copied().fold(1.0, f64::min)
    }

    /// Position of `label` in the ascending-energy spectrum.
    pub fn eigen_index(&self, label: Label) -> usize {
        self.eigen_index[label.0]
    }

    pub fn label_of(&self, index: usize) -> Label {
        self.label_of[index]
    }

    /// Phase-fixed eigenvectors as columns, indexed by label.
    pub fn vectors(&self) -> &DMatrix<Complex64> {
        &self.vectors
    }

    /// All nonzero couplings, each listed once with `m(lower) = m(upper) − 1`.
    pub fn couplings(&self) -> &[Coupling] {
        &self.couplings
    }

    /// `<a| Σ_k I^-_k |b>` for any two labeled levels.
    pub fn lowering_element(&self, a: Label, b: Label) -> Complex64 {
        let mut scratch = vec![Complex64::new(0.0, 0.0); self.dim()];
        lowering_element(
            self.spins(),
            self.vectors.column(a.0).as_slice(),
            self.vectors.column(b.0).as_slice(),
            &mut scratch,
        )
    }

    pub fn reachable_labels(&self, start: Label) -> BTreeSet<Label> {
        self.spectrum
            .reachable_levels(self.eigen_index(start))
            .into_iter()
            .map(|n| self.label_of[n])
            .collect()
    }
}

/// Allowed transition between labeled levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub from: Label,
    pub to: Label,
    /// `E_to − E_from`.
    pub frequency: f64,
    /// `<to| Σ_k I^-_k |from>`.
    pub coupling: Complex64,
    /// `Ω·|g|`.
    pub effective_rabi: f64,
}

/// All `Δm = −1` transitions with nonzero coupling.
#[derive(Debug, Clone)]
pub struct TransitionTable {
    rabi: f64,
    entries: Vec<Transition>,
}

impl TransitionTable {
    pub fn new(spectrum: &LabeledSpectrum, rabi: f64) -> Self {
        let mut entries: Vec<Transition> = spectrum
            .couplings()
            .iter()
            .map(|c| Transition {
                from: c.upper,
                to: c.lower,
                frequency: spectrum.energy(c.lower) - spectrum.energy(c.upper),
                coupling: c.g,
                effective_rabi: rabi * c.g.norm(),
            })
            .collect();
        entries.sort_by_key(|t| (t.from, t.to));
        TransitionTable { rabi, entries }
    }

    pub fn rabi(&self) -> f64 {
        self.rabi
    }

    pub fn entries(&self) -> &[Transition] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry connecting `a` and `b` in either orientation.
    pub fn find(&self, a: Label, b: Label) -> Option<&Transition> {
        self.entries
            .iter()
            .find(|t| (t.from == a && t.to == b) || (t.from == b && t.to == a))
    }
}

/// Closed-form solution of the two-spin problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSpinAnalytic {
    pub alpha1: f64,
    pub alpha2: f64,
    /// `E_0..E_3` indexed by label.
    pub energies: [f64; 4],
    pub delta_omega: f64,
}

pub fn two_spin_analytic(coupling: f64, omega0: f64, omega1: f64) -> TwoSpinAnalytic {
    let delta = omega1 - omega0;
    let r = (coupling * coupling + delta * delta / 4.0).sqrt();
    let theta = 0.5 * coupling.atan2(delta / 2.0);
    let sum = (omega0 + omega1) / 2.0;
    TwoSpinAnalytic {
        alpha1: theta.cos(),
        alpha2: theta.sin(),
        energies: [
            -coupling / 2.0 - sum,
            coupling / 2.0 - r,
            coupling / 2.0 + r,
            -coupling / 2.0 + sum,
        ],
        delta_omega: delta,
    }
}

impl TwoSpinAnalytic {
    /// Eigenvectors over the product basis, indexed by label.
    pub fn vectors(&self) -> [[f64; 4]; 4] {
        let (a1, a2) = (self.alpha1, self.alpha2);
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, a1, a2, 0.0],
            [0.0, -a2, a1, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ]
    }
}
