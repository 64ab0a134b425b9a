//! Determinant (projection-DPP) sampling three ways: exact enumeration of
//! squared minors, a classical sequential conditional sampler, and
//! measurement of a simulated loader-product state — plus the statistics
//! used to cross-validate them.

use crate::caps;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::linalg::{subset_determinant, OrthonormalFrame};
use crate::loader::{loader_circuit, LoaderKind};
use crate::rng::stream_rng;
use crate::simulator::{SectorState, StateVector};
use crate::subsets::{binomial, enumerate_subsets, rank_subset, Subset};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use std::collections::BTreeMap;

/// Distribution over ranked weight-`d` subsets with
/// `p(S) = det(A_S)^2 / det(A^T A)`.
#[derive(Debug, Clone)]
pub struct DetDistribution {
    n: usize,
    d: usize,
    probs: Vec<f64>,
}

impl DetDistribution {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Probabilities in colex subset order.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, s: &Subset) -> f64 {
        self.probs[rank_subset(s) as usize]
    }
}

/// Exact determinant distribution of a full-rank `n x d` matrix. Invariant
/// under right-multiplication by any invertible `d x d` matrix, since both
/// the minors and the Gram determinant pick up the same squared factor.
pub fn exact_distribution(a: &DMatrix<f64>) -> Result<DetDistribution> {
    let (n, d) = (a.nrows(), a.ncols());
    if d == 0 || d > n {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= d <= n, got {n}x{d}"
        )));
    }
    caps::check_sector_dim(binomial(n, d))?;
    let svd = a.clone().svd(false, false);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smin <= 1e-10 * smax {
        return Err(Error::DegenerateInput(format!(
            "matrix is rank-deficient (sigma_min/sigma_max = {:.3e})",
            smin / smax
        )));
    }
    let gram = (a.transpose() * a).determinant();
    let probs: Vec<f64> = enumerate_subsets(n, d)
        .iter()
        .map(|s| {
            let det = subset_determinant(a, s).expect("subset matches matrix");
            det * det / gram
        })
        .collect();
    Ok(DetDistribution { n, d, probs })
}

/// One classical sequential sample: at each step a row is drawn with
/// probability proportional to its squared norm in the current column
/// space, then that direction is rotated onto the leading column (a
/// Householder reflection) and dropped.
fn classical_sample_one<R: Rng>(x: &DMatrix<f64>, rng: &mut R) -> Subset {
    let (n, d) = (x.nrows(), x.ncols());
    let mut b = x.clone();
    let mut mask = 0u64;
    for t in (1..=d).rev() {
        let weights: Vec<f64> = (0..n)
            .map(|i| {
                if mask & (1 << i) != 0 {
                    0.0
                } else {
                    b.row(i).norm_squared()
                }
            })
            .collect();
        let total: f64 = weights.iter().sum();
        let u = rng.gen::<f64>() * total;
        let mut acc = 0.0;
        let mut pick = None;
        for (i, w) in weights.iter().enumerate() {
            if *w <= 0.0 {
                continue;
            }
            acc += w;
            pick = Some(i);
            if acc >= u {
                break;
            }
        }
        let pick = pick.expect("projector trace is positive");
        mask |= 1 << pick;
        if t > 1 {
            // Reflect the picked row direction onto e_1, then drop that
            // column: the remaining columns span the conditioned space.
            let v = b.row(pick).transpose();
            let mut h = v.clone();
            h[0] += v[0].signum() * v.norm();
            let hn2 = h.norm_squared();
            if hn2 > 0.0 {
                let bh = &b * &h;
                b -= bh * (2.0 / hn2) * h.transpose();
            }
            b = b.columns(1, t - 1).into_owned();
        }
    }
    Subset::from_mask(mask, n).expect("d picks within range")
}

/// Draws `shots` i.i.d. subsets from the frame's determinant distribution.
/// Shot `s` uses stream `s` of `seed`, so the sequence is identical
/// regardless of thread count.
pub fn classical_dpp_sample(x: &OrthonormalFrame, shots: u64, seed: u64) -> Vec<Subset> {
    let m = x.matrix().clone();
    (0..shots)
        .into_par_iter()
        .map(|s| {
            let mut rng = stream_rng(seed, s);
            classical_sample_one(&m, &mut rng)
        })
        .collect()
}

/// The concatenated loader circuit of all frame columns, last column first,
/// whose action on `|0...0>` is the subspace state of the frame.
pub fn quantum_loader_circuit(x: &OrthonormalFrame, kind: LoaderKind) -> Result<Circuit> {
    let mut c = Circuit::new(x.n())?;
    for col in (0..x.d()).rev() {
        let v = DVector::from_column_slice(x.matrix().column(col).as_slice());
        c.append(&loader_circuit(&v, kind)?)?;
    }
    Ok(c)
}

/// Simulates the loader product on `|0...0>` and restricts to the weight-`d`
/// sector. Returns the sector state, the probability mass that leaked
/// outside the sector (must be <= 1e-10), and the circuit for reporting.
pub fn quantum_final_state(
    x: &OrthonormalFrame,
    kind: LoaderKind,
) -> Result<(SectorState, f64, Circuit)> {
    caps::check_quantum_sample_qubits(x.n())?;
    let circuit = quantum_loader_circuit(x, kind)?;
    let mut state = StateVector::basis(x.n(), 0)?;
    state.apply_circuit(&circuit)?;
    let (sector, leak) = state.weight_projection(x.d())?;
    if leak > 1e-10 {
        return Err(Error::InvalidOperation(format!(
            "loader product left {leak:.3e} probability outside the weight-{} sector",
            x.d()
        )));
    }
    Ok((sector, leak, circuit))
}

/// Measures the simulated loader-product state `shots` times.
pub fn quantum_det_sample(
    x: &OrthonormalFrame,
    shots: u64,
    seed: u64,
    kind: LoaderKind,
) -> Result<Vec<Subset>> {
    let (sector, _, _) = quantum_final_state(x, kind)?;
    Ok(sector.sample_sequence(shots, seed))
}

/// Counts per ranked subset, aligned with [`DetDistribution::probs`].
pub fn counts_vector(n: usize, d: usize, samples: &[Subset]) -> Vec<u64> {
    let mut counts = vec![0u64; binomial(n, d) as usize];
    for s in samples {
        counts[rank_subset(s) as usize] += 1;
    }
    counts
}

/// Goodness-of-fit summary of empirical counts against an exact
/// distribution.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MethodStats {
    pub shots: u64,
    /// Total-variation distance between the empirical and exact
    /// distributions.
    pub tv_distance: f64,
    /// Pearson statistic with cells of expectation < 5 pooled (Cochran's
    /// rule), so sparse tails do not blow up the statistic.
    pub chi_square: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Computes TV distance and a pooled chi-square test of `counts` against
/// `dist`.
pub fn method_stats(dist: &DetDistribution, counts: &[u64]) -> Result<MethodStats> {
    if counts.len() != dist.probs.len() {
        return Err(Error::InvalidArgument(format!(
            "got {} cells, distribution has {}",
            counts.len(),
            dist.probs.len()
        )));
    }
    let shots: u64 = counts.iter().sum();
    let fshots = shots as f64;
    let mut tv = 0.0;
    let mut chi = 0.0;
    let mut big_cells = 0usize;
    let mut pool_obs = 0.0;
    let mut pool_exp = 0.0;
    for (c, p) in counts.iter().zip(&dist.probs) {
        let obs = *c as f64;
        let exp = fshots * p;
        tv += (obs / fshots - p).abs();
        if exp >= 5.0 {
            chi += (obs - exp) * (obs - exp) / exp;
            big_cells += 1;
        } else {
            pool_obs += obs;
            pool_exp += exp;
        }
    }
    let mut cells = big_cells;
    if pool_exp > 0.0 {
        chi += (pool_obs - pool_exp) * (pool_obs - pool_exp) / pool_exp;
        cells += 1;
    } else if pool_obs > 0.0 {
        // Mass observed where the distribution has none: reject outright.
        return Ok(MethodStats {
            shots,
            tv_distance: 0.5 * tv,
            chi_square: f64::INFINITY,
            dof: cells.max(1) - 1,
            p_value: 0.0,
        });
    }
    let dof = cells.saturating_sub(1);
    let p_value = if dof == 0 {
        1.0
    } else {
        let dist = ChiSquared::new(dof as f64).expect("dof >= 1");
        1.0 - dist.cdf(chi)
    };
    Ok(MethodStats {
        shots,
        tv_distance: 0.5 * tv,
        chi_square: chi,
        dof,
        p_value,
    })
}

/// Sample file schema: counts keyed by the sorted index list of each drawn
/// subset.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleRecord {
    pub n: usize,
    pub d: usize,
    pub shots: u64,
    pub seed: u64,
    pub counts: BTreeMap<String, u64>,
}

impl SampleRecord {
    pub fn new(n: usize, d: usize, seed: u64, samples: &[Subset]) -> Self {
        let mut counts = BTreeMap::new();
        for s in samples {
            *counts.entry(s.index_list()).or_insert(0) += 1;
        }
        SampleRecord {
            n,
            d,
            shots: samples.len() as u64,
            seed,
            counts,
        }
    }
}

/// Cross-validation report: both samplers checked against the exact
/// distribution, plus the quantum circuit's size. Wall-clock numbers are
/// returned separately so reports stay byte-identical across runs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SamplerReport {
    pub n: usize,
    pub d: usize,
    pub shots: u64,
    pub seed: u64,
    pub loader: LoaderKind,
    pub support_cells: usize,
    pub classical: MethodStats,
    pub quantum: MethodStats,
    pub quantum_gate_count: usize,
    pub quantum_depth: usize,
    pub quantum_sector_leak: f64,
}

/// Wall-clock side channel of [`sampler_report`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SamplerTiming {
    pub exact_seconds: f64,
    pub classical_seconds_per_sample: f64,
    pub quantum_seconds_per_sample: f64,
}

/// Runs the exact enumeration and both samplers on (the orthogonalization
/// of) `a`, and cross-validates.
pub fn sampler_report(
    a: &DMatrix<f64>,
    shots: u64,
    seed: u64,
    kind: LoaderKind,
) -> Result<(SamplerReport, SamplerTiming)> {
    let t0 = std::time::Instant::now();
    let dist = exact_distribution(a)?;
    let exact_seconds = t0.elapsed().as_secs_f64();
    let frame = crate::linalg::orthogonalize(a)?;
    let (n, d) = (dist.n(), dist.d());

    let t1 = std::time::Instant::now();
    let classical = classical_dpp_sample(&frame, shots, seed);
    let classical_seconds = t1.elapsed().as_secs_f64();

    let t2 = std::time::Instant::now();
    let (sector, leak, circuit) = quantum_final_state(&frame, kind)?;
    let quantum = sector.sample_sequence(shots, seed);
    let quantum_seconds = t2.elapsed().as_secs_f64();

    let report = SamplerReport {
        n,
        d,
        shots,
        seed,
        loader: kind,
        support_cells: dist.probs.len(),
        classical: method_stats(&dist, &counts_vector(n, d, &classical))?,
        quantum: method_stats(&dist, &counts_vector(n, d, &quantum))?,
        quantum_gate_count: circuit.gate_count(),
        quantum_depth: circuit.depth(),
        quantum_sector_leak: leak,
    };
    let timing = SamplerTiming {
        exact_seconds,
        classical_seconds_per_sample: classical_seconds / shots as f64,
        quantum_seconds_per_sample: quantum_seconds / shots as f64,
    };
    Ok((report, timing))
}
