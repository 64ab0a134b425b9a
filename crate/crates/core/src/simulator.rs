//! Dense and fixed-weight simulation of the rotation gate set.
//!
//! All gates in the basis (`RBS`, `FBS`, `X`, `Z`, `CZ`, `CX`) have real
//! matrix elements, so amplitudes are `f64` throughout. Two backends:
//!
//! * [`StateVector`] — dense simulation over all `2^n` basis states. Wire
//!   `q` (1-based) maps to bit `q-1` of the basis index, so a basis index is
//!   exactly an occupation mask.
//! * [`SectorState`] — amplitudes over the weight-`d` subsets only (colex
//!   order), valid for the weight-preserving gates `RBS`/`FBS`/`Z`/`CZ`.
//!
//! The `FBS(i,j,theta)` rotation acts on a pair `S` (containing `i`, not
//! `j`) and `S' = S - i + j` as `|S> -> cos |S> - s*sin |S'>`,
//! `|S'> -> s*sin |S> + cos |S'>`, where `s = (-1)^f` and `f` counts
//! occupied wires strictly between `i` and `j`. `RBS` is the same with
//! `s = 1`.

use crate::caps;
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::linalg::{subset_determinant, OrthonormalFrame};
use crate::rng::stream_rng;
use crate::subsets::{binomial, enumerate_subsets, rank_subset, Subset};
use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;
use std::collections::BTreeMap;

/// Interior-occupation sign for a rotation between wires `i < j`: bits of
/// `mask` strictly between them, as a 0-based bitmask.
fn interior_mask(i: usize, j: usize) -> u64 {
    debug_assert!(i < j);
    ((1u64 << (j - 1)) - 1) ^ ((1u64 << i) - 1)
}

/// Dense real state over all `2^n` basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<f64>,
}

impl StateVector {
    /// Basis state `|mask>`.
    pub fn basis(n: usize, mask: u64) -> Result<Self> {
        caps::check_dense_qubits(n)?;
        if mask >> n != 0 {
            return Err(Error::InvalidArgument(format!(
                "basis mask {mask:#b} out of range for {n} wires"
            )));
        }
        let mut amps = vec![0.0; 1 << n];
        amps[mask as usize] = 1.0;
        Ok(StateVector { n, amps })
    }

    /// Wire count.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Amplitudes indexed by occupation mask.
    pub fn amplitudes(&self) -> &[f64] {
        &self.amps
    }

    /// Amplitude of `|mask>`.
    pub fn amplitude(&self, mask: u64) -> f64 {
        self.amps[mask as usize]
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    /// Inner product with another state of the same size.
    pub fn inner(&self, other: &StateVector) -> f64 {
        assert_eq!(self.n, other.n, "state size mismatch");
        self.amps.iter().zip(&other.amps).map(|(a, b)| a * b).sum()
    }

    /// Applies one gate in place.
    pub fn apply_gate(&mut self, g: &Gate) {
        let dim = self.amps.len();
        match *g {
            Gate::X { q } => {
                let b = 1u64 << (q - 1);
                for idx in 0..dim as u64 {
                    if idx & b == 0 {
                        self.amps.swap(idx as usize, (idx | b) as usize);
                    }
                }
            }
            Gate::Z { q } => {
                let b = 1u64 << (q - 1);
                for idx in 0..dim as u64 {
                    if idx & b != 0 {
                        self.amps[idx as usize] = -self.amps[idx as usize];
                    }
                }
            }
            Gate::Cz { i, j } => {
                let m = (1u64 << (i - 1)) | (1u64 << (j - 1));
                for idx in 0..dim as u64 {
                    if idx & m == m {
                        self.amps[idx as usize] = -self.amps[idx as usize];
                    }
                }
            }
            Gate::Cx { c, t } => {
                let bc = 1u64 << (c - 1);
                let bt = 1u64 << (t - 1);
                for idx in 0..dim as u64 {
                    if idx & bc != 0 && idx & bt == 0 {
                        self.amps.swap(idx as usize, (idx | bt) as usize);
                    }
                }
            }
            Gate::Rbs { i, j, theta } => self.rotate(i, j, theta, 0),
            Gate::Fbs { i, j, theta } => self.rotate(i, j, theta, interior_mask(i, j)),
        }
    }

    fn rotate(&mut self, i: usize, j: usize, theta: f64, interior: u64) {
        let bi = 1u64 << (i - 1);
        let bj = 1u64 << (j - 1);
        let (sin, cos) = theta.sin_cos();
        for idx in 0..self.amps.len() as u64 {
            if idx & bi != 0 && idx & bj == 0 {
                let partner = idx ^ bi ^ bj;
                let s = if (idx & interior).count_ones().is_multiple_of(2) {
                    1.0
                } else {
                    -1.0
                };
                let a = self.amps[idx as usize];
                let b = self.amps[partner as usize];
                self.amps[idx as usize] = cos * a + s * sin * b;
                self.amps[partner as usize] = -s * sin * a + cos * b;
            }
        }
    }

    /// Applies a circuit in temporal order.
    pub fn apply_circuit(&mut self, c: &Circuit) -> Result<()> {
        if c.n() != self.n {
            return Err(Error::InvalidArgument(format!(
                "{}-wire circuit applied to {}-wire state",
                c.n(),
                self.n
            )));
        }
        for g in c.gates() {
            self.apply_gate(g);
        }
        Ok(())
    }

    /// Measurement distribution over basis masks (normalized).
    pub fn probabilities(&self) -> Vec<f64> {
        let total: f64 = self.amps.iter().map(|a| a * a).sum();
        self.amps.iter().map(|a| a * a / total).collect()
    }

    /// Draws `shots` measurement outcomes; returns counts keyed by mask.
    ///
    /// Shot `s` uses stream `s` of `seed`, so the tally is independent of
    /// thread count.
    pub fn sample(&self, shots: u64, seed: u64) -> BTreeMap<u64, u64> {
        let probs = self.probabilities();
        let outcomes = sample_indices(&probs, shots, seed);
        let mut counts = BTreeMap::new();
        for idx in outcomes {
            *counts.entry(idx as u64).or_insert(0u64) += 1;
        }
        counts
    }

    /// Restriction to the weight-`d` sector plus the leaked probability
    /// outside it.
    pub fn weight_projection(&self, d: usize) -> Result<(SectorState, f64)> {
        let subsets = enumerate_subsets(self.n, d);
        caps::check_sector_dim(subsets.len() as u64)?;
        let mut amps = Vec::with_capacity(subsets.len());
        for s in &subsets {
            amps.push(self.amps[s.mask() as usize]);
        }
        let inside: f64 = amps.iter().map(|a| a * a).sum();
        let total: f64 = self.amps.iter().map(|a| a * a).sum();
        Ok((SectorState { n: self.n, d, amps }, total - inside))
    }
}

/// State restricted to the weight-`d` sector: one amplitude per weight-`d`
/// subset of `[n]`, in colex order.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorState {
    n: usize,
    d: usize,
    amps: Vec<f64>,
}

impl SectorState {
    /// Basis state `|S>`.
    pub fn basis(subset: Subset) -> Result<Self> {
        let (n, d) = (subset.n(), subset.weight());
        caps::check_sector_dim(binomial(n, d))?;
        let mut amps = vec![0.0; binomial(n, d) as usize];
        amps[rank_subset(&subset) as usize] = 1.0;
        Ok(SectorState { n, d, amps })
    }

    /// The subspace state of a frame: amplitude `det(X_S)` on each weight-`d`
    /// subset `S`. Cauchy-Binet makes this a unit vector.
    pub fn from_frame(frame: &OrthonormalFrame) -> Result<Self> {
        let (n, d) = (frame.n(), frame.d());
        caps::check_sector_dim(binomial(n, d))?;
        let mut amps = Vec::with_capacity(binomial(n, d) as usize);
        for s in enumerate_subsets(n, d) {
            amps.push(subset_determinant(frame.matrix(), &s)?);
        }
        Ok(SectorState { n, d, amps })
    }

    /// Builds a sector state from raw colex-ordered amplitudes.
    pub fn from_amplitudes(n: usize, d: usize, amps: Vec<f64>) -> Result<Self> {
        if amps.len() as u64 != binomial(n, d) {
            return Err(Error::InvalidArgument(format!(
                "expected {} amplitudes for weight-{d} sector of [{n}], got {}",
                binomial(n, d),
                amps.len()
            )));
        }
        Ok(SectorState { n, d, amps })
    }

    /// Wire count.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Sector weight.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Amplitudes in colex subset order.
    pub fn amplitudes(&self) -> &[f64] {
        &self.amps
    }

    /// Amplitude of `|S>`.
    pub fn amplitude(&self, s: &Subset) -> f64 {
        self.amps[rank_subset(s) as usize]
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    /// Inner product with another state of the same sector.
    pub fn inner(&self, other: &SectorState) -> f64 {
        assert_eq!((self.n, self.d), (other.n, other.d), "sector mismatch");
        self.amps.iter().zip(&other.amps).map(|(a, b)| a * b).sum()
    }

    /// Applies one weight-preserving gate (`RBS`, `FBS`, `Z`, `CZ`).
    pub fn apply_gate(&mut self, g: &Gate) -> Result<()> {
        match *g {
            Gate::X { .. } | Gate::Cx { .. } => Err(Error::InvalidOperation(format!(
                "gate '{}' does not preserve occupation weight",
                g.name()
            ))),
            Gate::Z { q } => {
                let b = 1u64 << (q - 1);
                for (r, s) in enumerate_subsets(self.n, self.d).iter().enumerate() {
                    if s.mask() & b != 0 {
                        self.amps[r] = -self.amps[r];
                    }
                }
                Ok(())
            }
            Gate::Cz { i, j } => {
                let m = (1u64 << (i - 1)) | (1u64 << (j - 1));
                for (r, s) in enumerate_subsets(self.n, self.d).iter().enumerate() {
                    if s.mask() & m == m {
                        self.amps[r] = -self.amps[r];
                    }
                }
                Ok(())
            }
            Gate::Rbs { i, j, theta } => {
                self.rotate(i, j, theta, 0);
                Ok(())
            }
            Gate::Fbs { i, j, theta } => {
                self.rotate(i, j, theta, interior_mask(i, j));
                Ok(())
            }
        }
    }

    fn rotate(&mut self, i: usize, j: usize, theta: f64, interior: u64) {
        let bi = 1u64 << (i - 1);
        let bj = 1u64 << (j - 1);
        let (sin, cos) = theta.sin_cos();
        for (r, s) in enumerate_subsets(self.n, self.d).iter().enumerate() {
            let mask = s.mask();
            if mask & bi != 0 && mask & bj == 0 {
                let partner = Subset::from_mask(mask ^ bi ^ bj, self.n).unwrap();
                let pr = rank_subset(&partner) as usize;
                let sg = if (mask & interior).count_ones().is_multiple_of(2) {
                    1.0
                } else {
                    -1.0
                };
                let a = self.amps[r];
                let b = self.amps[pr];
                self.amps[r] = cos * a + sg * sin * b;
                self.amps[pr] = -sg * sin * a + cos * b;
            }
        }
    }

    /// Applies a weight-preserving circuit in temporal order.
    pub fn apply_circuit(&mut self, c: &Circuit) -> Result<()> {
        if c.n() != self.n {
            return Err(Error::InvalidArgument(format!(
                "{}-wire circuit applied to {}-wire sector state",
                c.n(),
                self.n
            )));
        }
        for g in c.gates() {
            self.apply_gate(g)?;
        }
        Ok(())
    }

    /// Embeds into a dense state (subject to the dense-size cap).
    pub fn to_state_vector(&self) -> Result<StateVector> {
        caps::check_dense_qubits(self.n)?;
        let mut amps = vec![0.0; 1 << self.n];
        for (r, s) in enumerate_subsets(self.n, self.d).iter().enumerate() {
            amps[s.mask() as usize] = self.amps[r];
        }
        Ok(StateVector { n: self.n, amps })
    }

    /// Measurement distribution over subsets, colex order (normalized).
    pub fn probabilities(&self) -> Vec<f64> {
        let total: f64 = self.amps.iter().map(|a| a * a).sum();
        self.amps.iter().map(|a| a * a / total).collect()
    }

    /// Draws `shots` outcomes; returns counts keyed by subset mask. Shot `s`
    /// uses stream `s` of `seed` (thread-count independent).
    pub fn sample(&self, shots: u64, seed: u64) -> BTreeMap<u64, u64> {
        let probs = self.probabilities();
        let subsets = enumerate_subsets(self.n, self.d);
        let outcomes = sample_indices(&probs, shots, seed);
        let mut counts = BTreeMap::new();
        for idx in outcomes {
            *counts.entry(subsets[idx].mask()).or_insert(0u64) += 1;
        }
        counts
    }

    /// Like [`sample`](Self::sample) but keeps the per-shot sequence.
    pub fn sample_sequence(&self, shots: u64, seed: u64) -> Vec<Subset> {
        let probs = self.probabilities();
        let subsets = enumerate_subsets(self.n, self.d);
        sample_indices(&probs, shots, seed)
            .into_iter()
            .map(|idx| subsets[idx])
            .collect()
    }
}

/// Inverse-CDF sampling: shot `s` draws one uniform from stream `s` of
/// `seed` and binary-searches the cumulative distribution. Shots run in
/// parallel but the result is a pure function of `(probs, shots, seed)`.
fn sample_indices(probs: &[f64], shots: u64, seed: u64) -> Vec<usize> {
    let mut cum = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for p in probs {
        acc += p;
        cum.push(acc);
    }
    let last = probs.len() - 1;
    (0..shots)
        .into_par_iter()
        .map(|s| {
            let u: f64 = stream_rng(seed, s).gen();
            cum.partition_point(|&c| c <= u).min(last)
        })
        .collect()
}

/// Dense `2^n x 2^n` matrix of a circuit (column `m` is the circuit applied
/// to `|m>`).
pub fn circuit_unitary(c: &Circuit) -> Result<DMatrix<f64>> {
    caps::check_unitary_qubits(c.n())?;
    let dim = 1usize << c.n();
    let mut u = DMatrix::zeros(dim, dim);
    for m in 0..dim {
        let mut st = StateVector::basis(c.n(), m as u64)?;
        st.apply_circuit(c)?;
        for i in 0..dim {
            u[(i, m)] = st.amplitudes()[i];
        }
    }
    Ok(u)
}

/// Weight-`d` sector matrix of a weight-preserving circuit: column `r` is
/// the circuit applied to the `r`-th weight-`d` subset state (colex order).
pub fn sector_matrix(c: &Circuit, d: usize) -> Result<DMatrix<f64>> {
    let n = c.n();
    let dim_u64 = binomial(n, d);
    caps::check_compound_dim(dim_u64)?;
    let dim = dim_u64 as usize;
    let subsets = enumerate_subsets(n, d);
    let rank_of: std::collections::HashMap<u64, usize> = subsets
        .iter()
        .enumerate()
        .map(|(r, s)| (s.mask(), r))
        .collect();

    let mut u = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut amps = vec![0.0; dim];
        amps[col] = 1.0;
        for g in c.gates() {
            apply_sector_gate_indexed(&mut amps, g, &subsets, &rank_of)?;
        }
        for (i, a) in amps.iter().enumerate() {
            u[(i, col)] = *a;
        }
    }
    Ok(u)
}

fn apply_sector_gate_indexed(
    amps: &mut [f64],
    g: &Gate,
    subsets: &[Subset],
    rank_of: &std::collections::HashMap<u64, usize>,
) -> Result<()> {
    match *g {
        Gate::X { .. } | Gate::Cx { .. } => Err(Error::InvalidOperation(format!(
            "gate '{}' does not preserve occupation weight",
            g.name()
        ))),
        Gate::Z { q } => {
            let b = 1u64 << (q - 1);
            for (r, s) in subsets.iter().enumerate() {
                if s.mask() & b != 0 {
                    amps[r] = -amps[r];
                }
            }
            Ok(())
        }
        Gate::Cz { i, j } => {
            let m = (1u64 << (i - 1)) | (1u64 << (j - 1));
            for (r, s) in subsets.iter().enumerate() {
                if s.mask() & m == m {
                    amps[r] = -amps[r];
                }
            }
            Ok(())
        }
        Gate::Rbs { i, j, theta } => {
            rotate_indexed(amps, i, j, theta, 0, subsets, rank_of);
            Ok(())
        }
        Gate::Fbs { i, j, theta } => {
            rotate_indexed(amps, i, j, theta, interior_mask(i, j), subsets, rank_of);
            Ok(())
        }
    }
}

fn rotate_indexed(
    amps: &mut [f64],
    i: usize,
    j: usize,
    theta: f64,
    interior: u64,
    subsets: &[Subset],
    rank_of: &std::collections::HashMap<u64, usize>,
) {
    let bi = 1u64 << (i - 1);
    let bj = 1u64 << (j - 1);
    let (sin, cos) = theta.sin_cos();
    for (r, s) in subsets.iter().enumerate() {
        let mask = s.mask();
        if mask & bi != 0 && mask & bj == 0 {
            let pr = rank_of[&(mask ^ bi ^ bj)];
            let sg = if (mask & interior).count_ones().is_multiple_of(2) {
                1.0
            } else {
                -1.0
            };
            let a = amps[r];
            let b = amps[pr];
            amps[r] = cos * a + sg * sin * b;
            amps[pr] = -sg * sin * a + cos * b;
        }
    }
}

/// Largest absolute residual among the quadratic exchange relations
/// (Grassmann-Plucker) on a weight-`d` sector state.
///
/// For every `(d-1)`-subset `S` and `(d+1)`-subset `T`,
/// `sum_k (-1)^(k-1) p[S + t_k] p[T - t_k] = 0` characterizes amplitude
/// vectors proportional to the minors of some matrix. `p[S + t]` is zero if
/// `t` is in `S` and otherwise picks up the sign of sorting `t` into `S`.
pub fn check_plucker(state: &SectorState) -> Result<f64> {
    let (n, d) = (state.n(), state.d());
    if d == 0 || d >= n {
        return Ok(0.0);
    }
    let work = binomial(n, d - 1).saturating_mul(binomial(n, d + 1));
    caps::check_sector_dim(work)?;
    let amp = |mask: u64| state.amps[rank_subset(&Subset::from_mask(mask, n).unwrap()) as usize];
    let mut worst = 0.0f64;
    for s in enumerate_subsets(n, d - 1) {
        for t in enumerate_subsets(n, d + 1) {
            let mut acc = 0.0;
            for (k, &tk) in t.elements().iter().enumerate() {
                let bt = 1u64 << (tk - 1);
                if s.mask() & bt != 0 {
                    continue;
                }
                // Sign of sorting t_k into S: elements of S above t_k.
                let above = (s.mask() >> tk).count_ones();
                let term_sign = if (k as u32 + above).is_multiple_of(2) {
                    1.0
                } else {
                    -1.0
                };
                acc += term_sign * amp(s.mask() | bt) * amp(t.mask() ^ bt);
            }
            worst = worst.max(acc.abs());
        }
    }
    Ok(worst)
}
