//! Sector unitaries, compound eigenstructure checks, principal angles, and
//! subspace singular-value estimation via simulated phase estimation.
//!
//! A weight-preserving circuit acts on the weight-`k` sector as the `k`-th
//! compound matrix of the underlying rotation product. Phase estimation on
//! that sector unitary therefore reads out sums of rotation eigenphases,
//! which for block-embedded matrices encode products of singular values.

use crate::caps;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::linalg::{compound, submatrix};
use crate::rng::stream_rng;
use crate::simulator::sector_matrix;
use crate::subsets::{binomial, enumerate_subsets, rank_subset, Subset};
use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;

type C64 = Complex<f64>;

fn orthogonality_residual(m: &DMatrix<f64>) -> f64 {
    let n = m.ncols();
    (m.transpose() * m - DMatrix::<f64>::identity(n, n))
        .abs()
        .max()
}

fn check_orthogonal(m: &DMatrix<f64>, tol: f64, what: &str) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::InvalidArgument(format!(
            "{what} must be square, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let r = orthogonality_residual(m);
    if r > tol {
        return Err(Error::InvalidArgument(format!(
            "{what} is not orthogonal (residual {r:.3e})"
        )));
    }
    Ok(())
}

/// The action of a weight-preserving circuit (or orthogonal matrix) on one
/// Hamming-weight sector.
#[derive(Debug, Clone)]
pub struct SectorUnitary {
    n: usize,
    k: usize,
    matrix: DMatrix<f64>,
}

impl SectorUnitary {
    /// Builds the sector action of a circuit by applying it to every
    /// weight-`k` basis subset.
    pub fn from_circuit(c: &Circuit, k: usize) -> Result<Self> {
        let matrix = sector_matrix(c, k)?;
        let r = orthogonality_residual(&matrix);
        if r > 1e-9 {
            return Err(Error::InvalidOperation(format!(
                "sector action is not orthogonal (residual {r:.3e})"
            )));
        }
        Ok(SectorUnitary {
            n: c.n(),
            k,
            matrix,
        })
    }

    /// The `k`-th compound of an orthogonal matrix.
    pub fn from_orthogonal(u: &DMatrix<f64>, k: usize) -> Result<Self> {
        check_orthogonal(u, 1e-9, "matrix")?;
        caps::check_compound_dim(binomial(u.nrows(), k))?;
        let matrix = compound(u, k)?;
        Ok(SectorUnitary {
            n: u.nrows(),
            k,
            matrix,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

/// Eigendecomposition of a real orthogonal matrix via its real Schur form:
/// 2x2 blocks give conjugate pairs `e^{+-i theta}` with eigenvectors
/// `(q_i -+ i q_{i+1})/sqrt(2)`, 1x1 blocks give `+-1` with real
/// eigenvectors. Returns `(theta, eigenvector)` pairs, one entry per matrix
/// column, with `theta` in `(-pi, pi]`.
pub fn orthogonal_eigendecomposition(u: &DMatrix<f64>) -> Result<Vec<(f64, DVector<C64>)>> {
    check_orthogonal(u, 1e-9, "matrix")?;
    let n = u.nrows();
    let schur = u.clone().schur();
    let (q, t) = schur.unpack();
    let mut pairs: Vec<(f64, DVector<C64>)> = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        let off = if i + 1 < n { t[(i + 1, i)].abs() } else { 0.0 };
        if off > 1e-10 {
            // Conjugate pair: lambda = a + i c for eigenvector q_i - i q_{i+1}.
            let a = t[(i, i)];
            let c = t[(i + 1, i)];
            let theta = c.atan2(a);
            let qi = q.column(i);
            let qj = q.column(i + 1);
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let vplus = DVector::from_fn(n, |r, _| C64::new(qi[r] * s, -qj[r] * s));
            let vminus = DVector::from_fn(n, |r, _| C64::new(qi[r] * s, qj[r] * s));
            pairs.push((theta, vplus));
            pairs.push((-theta, vminus));
            i += 2;
        } else {
            let lam = t[(i, i)];
            let theta = if lam >= 0.0 {
                0.0
            } else {
                std::f64::consts::PI
            };
            let v = DVector::from_fn(n, |r, _| C64::new(q[(r, i)], 0.0));
            pairs.push((theta, v));
            i += 1;
        }
    }
    for (theta, v) in &pairs {
        let lam = C64::from_polar(1.0, *theta);
        let resid = (complex_matvec(u, v) - v * lam).norm();
        if resid > 1e-8 {
            return Err(Error::DegenerateInput(format!(
                "eigenpair residual {resid:.3e} (matrix may be far from orthogonal)"
            )));
        }
    }
    Ok(pairs)
}

fn complex_matvec(m: &DMatrix<f64>, v: &DVector<C64>) -> DVector<C64> {
    let re = DVector::from_fn(v.len(), |i, _| v[i].re);
    let im = DVector::from_fn(v.len(), |i, _| v[i].im);
    let mre = m * re;
    let mim = m * im;
    DVector::from_fn(v.len(), |i, _| C64::new(mre[i], mim[i]))
}

/// Amplitudes of the subspace state of a complex `n x k` frame: the `k x k`
/// minors over weight-`k` subsets, colex order.
pub fn complex_subspace_amplitudes(frame: &DMatrix<C64>) -> Result<DVector<C64>> {
    let (n, k) = (frame.nrows(), frame.ncols());
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= k <= n, got {n}x{k}"
        )));
    }
    caps::check_compound_dim(binomial(n, k))?;
    let subsets = enumerate_subsets(n, k);
    let mut amps = DVector::zeros(subsets.len());
    for (r, s) in subsets.iter().enumerate() {
        let rows = s.elements();
        let sub = DMatrix::from_fn(k, k, |i, j| frame[(rows[i] - 1, j)]);
        amps[r] = sub.determinant();
    }
    Ok(amps)
}

/// Verifies the compound eigenstructure: for every size-`k` set `S` of
/// eigenvectors of `u`, the complex subspace state of those eigenvectors is
/// an eigenvector of `compound(u, k)` with eigenvalue
/// `exp(i sum_{i in S} theta_i)`. Returns the largest residual.
pub fn compound_spectrum_check(u: &DMatrix<f64>, k: usize) -> Result<f64> {
    let n = u.nrows();
    if n > 8 {
        return Err(Error::ResourceLimit(format!(
            "spectrum check is dense over C({n},{k}) subsets; capped at n = 8"
        )));
    }
    let pairs = orthogonal_eigendecomposition(u)?;
    let uk = compound(u, k)?;
    let mut worst: f64 = 0.0;
    for s in enumerate_subsets(n, k) {
        let elems = s.elements();
        let frame = DMatrix::from_fn(n, k, |r, c| pairs[elems[c] - 1].1[r]);
        let amps = complex_subspace_amplitudes(&frame)?;
        let phase: f64 = elems.iter().map(|&i| pairs[i - 1].0).sum();
        let lam = C64::from_polar(1.0, phase);
        let lhs = complex_matvec(&uk, &amps);
        let resid = (lhs - &amps * lam).norm();
        worst = worst.max(resid);
    }
    Ok(worst)
}

/// Singular values of `m`, sorted descending.
fn singular_values_desc(m: &DMatrix<f64>) -> Vec<f64> {
    let svd = m.clone().svd(false, false);
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// Ranks (in colex order over `[n]` weight-`k` subsets) of the subsets
/// contained in `within`.
fn ranks_inside(n: usize, k: usize, within: &Subset) -> Vec<usize> {
    enumerate_subsets(n, k)
        .iter()
        .enumerate()
        .filter(|(_, s)| s.mask() & !within.mask() == 0)
        .map(|(r, _)| r)
        .collect()
}

/// Principal-angle cosines between the compound column spans
/// `Col(P^k restricted to subsets of I)` and `Col(Q^k restricted to subsets
/// of J)`: for each weight-`k` subset `S` of the singular-value indices of
/// the block `A = (P^T Q)_{I,J}`, `cos(theta_S) = prod_{i in S} sigma_i`.
///
/// The list is cross-checked internally against a direct principal-angle
/// computation between the two compound column spans (requires
/// `C(n,k)` within the compound cap).
pub fn principal_angles_oracle(
    p: &DMatrix<f64>,
    q: &DMatrix<f64>,
    i_set: &Subset,
    j_set: &Subset,
    k: usize,
) -> Result<Vec<(Subset, f64)>> {
    check_orthogonal(p, 1e-9, "P")?;
    check_orthogonal(q, 1e-9, "Q")?;
    let n = p.nrows();
    if q.nrows() != n || i_set.n() != n || j_set.n() != n {
        return Err(Error::InvalidArgument(
            "P, Q, I, J must share one dimension".into(),
        ));
    }
    if k == 0 || k > i_set.weight().min(j_set.weight()) {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= k <= min(|I|, |J|), got k = {k}"
        )));
    }
    caps::check_compound_dim(binomial(n, k))?;

    let ptq = p.transpose() * q;
    let rows: Vec<usize> = i_set.elements().iter().map(|e| e - 1).collect();
    let cols: Vec<usize> = j_set.elements().iter().map(|e| e - 1).collect();
    let block = submatrix(&ptq, &rows, &cols);
    let sigma = singular_values_desc(&block);

    let m = sigma.len();
    let mut out = Vec::new();
    for s in enumerate_subsets(m, k) {
        let prod: f64 = s
            .elements()
            .iter()
            .map(|&i| sigma[i - 1])
            .collect::<Vec<_>>()
            .iter()
            .product();
        out.push((s, prod));
    }

    // Cross-check: the singular values of (compound(P,k) cols I_k)^T
    // (compound(Q,k) cols J_k) must equal the products above.
    let pk = compound(p, k)?;
    let qk = compound(q, k)?;
    let i_ranks = ranks_inside(n, k, i_set);
    let j_ranks = ranks_inside(n, k, j_set);
    let all: Vec<usize> = (0..pk.nrows()).collect();
    let pk_cols = submatrix(&pk, &all, &i_ranks);
    let qk_cols = submatrix(&qk, &all, &j_ranks);
    let overlap = pk_cols.transpose() * qk_cols;
    let direct = singular_values_desc(&overlap);
    let mut products: Vec<f64> = out.iter().map(|(_, c)| *c).collect();
    products.sort_by(|a, b| b.partial_cmp(a).unwrap());
    for (idx, prod) in products.iter().enumerate() {
        // `direct` has one entry per subset of the larger index sets; only
        // the top C(m,k) values correspond to supported products, the rest
        // vanish when k exceeds the block rank structure.
        let d = direct.get(idx).copied().unwrap_or(0.0);
        if (d - prod).abs() > 1e-8 {
            return Err(Error::InvalidOperation(format!(
                "principal-angle cross-check failed: product {prod:.12} vs direct {d:.12}"
            )));
        }
    }
    Ok(out)
}

/// Block restriction of a compound matrix: entries of `compound(big, k)` on
/// row subsets inside `i_set` and column subsets inside `j_set`.
pub fn compound_block_restriction(
    big: &DMatrix<f64>,
    i_set: &Subset,
    j_set: &Subset,
    k: usize,
) -> Result<DMatrix<f64>> {
    let n = big.nrows();
    caps::check_compound_dim(binomial(n, k))?;
    let full = compound(big, k)?;
    let i_ranks = ranks_inside(n, k, i_set);
    let j_ranks = ranks_inside(n, k, j_set);
    Ok(submatrix(&full, &i_ranks, &j_ranks))
}

/// Symmetric PSD square root via eigendecomposition, clamping small negative
/// eigenvalues to zero.
fn psd_sqrt(m: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = nalgebra::SymmetricEigen::new(m.clone());
    let vals = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
    &eig.eigenvectors * DMatrix::from_diagonal(&vals) * eig.eigenvectors.transpose()
}

/// Direct rotation embedding of a contraction `A` (all singular values in
/// `[0,1]`) into an orthogonal matrix
/// `[[A, (I-AA^T)^{1/2}], [-(I-A^T A)^{1/2}, A^T]]`.
pub fn rotation_embedding(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let (m, n) = (a.nrows(), a.ncols());
    let sigma = singular_values_desc(a);
    if sigma.first().copied().unwrap_or(0.0) > 1.0 + 1e-10 {
        return Err(Error::InvalidArgument(format!(
            "embedding needs singular values <= 1, got {:.6}",
            sigma[0]
        )));
    }
    let top_right = psd_sqrt(&(DMatrix::identity(m, m) - a * a.transpose()));
    let bottom_left = -psd_sqrt(&(DMatrix::identity(n, n) - a.transpose() * a));
    let big = m + n;
    let mut u = DMatrix::zeros(big, big);
    u.view_mut((0, 0), (m, n)).copy_from(a);
    u.view_mut((0, n), (m, m)).copy_from(&top_right);
    u.view_mut((m, 0), (n, n)).copy_from(&bottom_left);
    u.view_mut((m, n), (n, m)).copy_from(&a.transpose());
    let r = orthogonality_residual(&u);
    if r > 1e-9 {
        return Err(Error::DegenerateInput(format!(
            "embedding is not orthogonal (residual {r:.3e}); singular values too close to 1?"
        )));
    }
    Ok(u)
}

/// One cell of a phase-estimation outcome: measuring register value
/// `register` (phase `theta = 2 pi register / 2^bits`) jointly with subset
/// `subset`.
#[derive(Debug, Clone)]
pub struct PhaseEstimate {
    pub subset: Subset,
    pub register: u64,
    pub theta: f64,
    pub bits: usize,
    pub probability: f64,
}

impl PhaseEstimate {
    /// Cosine of the estimated phase — the quantity the singular-value
    /// contract bounds (sign branches of conjugate eigenpairs share it).
    pub fn cos_theta(&self) -> f64 {
        self.theta.cos()
    }
}

/// Exact joint outcome distribution of textbook phase estimation.
#[derive(Debug, Clone)]
pub struct SveOutcome {
    pub bits: usize,
    /// Cells with probability at least the pruning threshold, sorted by
    /// descending probability (ties: register, then subset rank).
    pub outcomes: Vec<PhaseEstimate>,
    /// Probability mass below the pruning threshold.
    pub pruned_mass: f64,
}

/// Pre-measurement phase-estimation amplitudes: row `x` holds
/// `(1/2^t) sum_m ...` after the inverse Fourier transform, i.e. entry
/// `(m, s)` is the joint amplitude of register value `m` with subset `s`.
fn pe_amplitudes(uk: &DMatrix<f64>, input: &DVector<C64>, t: usize) -> DMatrix<C64> {
    let dim = input.len();
    let size = 1usize << t;
    let mut re = DVector::from_fn(dim, |i, _| input[i].re);
    let mut im = DVector::from_fn(dim, |i, _| input[i].im);
    let mut mat = DMatrix::zeros(size, dim);
    for x in 0..size {
        if x > 0 {
            re = uk * re;
            im = uk * im;
        }
        for s in 0..dim {
            mat[(x, s)] = C64::new(re[s], im[s]);
        }
    }
    // Inverse QFT on the register axis: out[m] = (1/2^t) sum_x w^{-mx} in[x].
    let mut buf = vec![C64::new(0.0, 0.0); size];
    for s in 0..dim {
        for x in 0..size {
            buf[x] = mat[(x, s)];
        }
        fft_inverse_sign(&mut buf);
        for m in 0..size {
            mat[(m, s)] = buf[m] / size as f64;
        }
    }
    mat
}

/// In-place radix-2 DFT with kernel `w^{-mx}` (no normalization).
fn fft_inverse_sign(buf: &mut [C64]) {
    let n = buf.len();
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            buf.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let ang = -2.0 * std::f64::consts::PI / len as f64;
        let wlen = C64::from_polar(1.0, ang);
        let mut i = 0;
        while i < n {
            let mut w = C64::new(1.0, 0.0);
            for off in 0..len / 2 {
                let a = buf[i + off];
                let b = buf[i + off + len / 2] * w;
                buf[i + off] = a + b;
                buf[i + off + len / 2] = a - b;
                w *= wlen;
            }
            i += len;
        }
        len <<= 1;
    }
}

fn check_sve_input(uk: &SectorUnitary, input: &DVector<C64>, t: usize) -> Result<()> {
    caps::check_sve(uk.matrix.nrows() as u64, t)?;
    if input.len() != uk.matrix.nrows() {
        return Err(Error::InvalidArgument(format!(
            "input has {} amplitudes, sector has {}",
            input.len(),
            uk.matrix.nrows()
        )));
    }
    let norm = input.norm();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidArgument(format!(
            "input state must be normalized, got {norm:.9}"
        )));
    }
    Ok(())
}

/// Simulates textbook phase estimation of the sector unitary on `input`
/// (complex amplitudes over weight-`k` subsets, colex order) with a `t`-bit
/// register, and returns the exact joint (register, subset) distribution.
pub fn subspace_sve(
    uk: &SectorUnitary,
    input: &DVector<C64>,
    t: usize,
    min_probability: f64,
) -> Result<SveOutcome> {
    check_sve_input(uk, input, t)?;
    let mat = pe_amplitudes(&uk.matrix, input, t);
    let subsets = enumerate_subsets(uk.n, uk.k);
    let size = 1usize << t;
    let mut outcomes = Vec::new();
    let mut kept = 0.0;
    for m in 0..size {
        for s in 0..subsets.len() {
            let p = mat[(m, s)].norm_sqr();
            if p >= min_probability {
                kept += p;
                outcomes.push(PhaseEstimate {
                    subset: subsets[s],
                    register: m as u64,
                    theta: 2.0 * std::f64::consts::PI * m as f64 / size as f64,
                    bits: t,
                    probability: p,
                });
            }
        }
    }
    outcomes.sort_by(|a, b| {
        b.probability
            .partial_cmp(&a.probability)
            .unwrap()
            .then(a.register.cmp(&b.register))
            .then(rank_subset(&a.subset).cmp(&rank_subset(&b.subset)))
    });
    Ok(SveOutcome {
        bits: t,
        outcomes,
        pruned_mass: (1.0 - kept).max(0.0),
    })
}

/// Samples `shots` joint (subset, register) measurement outcomes. Shot `s`
/// uses stream `s` of `seed`.
pub fn sve_sample(
    uk: &SectorUnitary,
    input: &DVector<C64>,
    t: usize,
    shots: u64,
    seed: u64,
) -> Result<Vec<(Subset, u64)>> {
    check_sve_input(uk, input, t)?;
    let mat = pe_amplitudes(&uk.matrix, input, t);
    let subsets = enumerate_subsets(uk.n, uk.k);
    let dim = subsets.len();
    let size = 1usize << t;
    let mut cum = Vec::with_capacity(size * dim);
    let mut acc = 0.0;
    for m in 0..size {
        for s in 0..dim {
            acc += mat[(m, s)].norm_sqr();
            cum.push(acc);
        }
    }
    let last = cum.len() - 1;
    Ok((0..shots)
        .into_par_iter()
        .map(|shot| {
            let u: f64 = stream_rng(seed, shot).gen();
            let idx = cum.partition_point(|&c| c <= u).min(last);
            (subsets[idx % dim], (idx / dim) as u64)
        })
        .collect())
}
