//! Frames, minors, and the small matrix toolbox behind subspace states.
//!
//! The central object is an [`OrthonormalFrame`]: an `n x d` real matrix `X`
//! with `X^T X = I_d`. Its weight-`d` subset minors `det(X_S)` are the
//! amplitudes of the subspace state `|Col(X)>`, and Cauchy-Binet guarantees
//! they form a unit vector.

use crate::caps;
use crate::error::{Error, Result};
use crate::subsets::{binomial, enumerate_subsets, Subset};
use nalgebra::{DMatrix, DVector};

/// Max-norm tolerance for `X^T X = I` when validating a frame.
pub const FRAME_TOL: f64 = 1e-10;

/// An `n x d` real matrix with orthonormal columns.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthonormalFrame {
    m: DMatrix<f64>,
}

impl OrthonormalFrame {
    /// Validates `||X^T X - I||_max <= 1e-10` and wraps the matrix.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        let (n, d) = m.shape();
        if d == 0 || d > n {
            return Err(Error::InvalidArgument(format!(
                "frame shape {n}x{d} needs 1 <= d <= n"
            )));
        }
        let gram = m.transpose() * &m;
        let dev = (&gram - DMatrix::<f64>::identity(d, d)).abs().max();
        if dev > FRAME_TOL {
            return Err(Error::InvalidArgument(format!(
                "columns are not orthonormal: ||X^T X - I||_max = {dev:.3e}"
            )));
        }
        Ok(OrthonormalFrame { m })
    }

    /// Number of rows (ambient dimension / qubits).
    pub fn n(&self) -> usize {
        self.m.nrows()
    }

    /// Number of columns (subspace dimension / particle count).
    pub fn d(&self) -> usize {
        self.m.ncols()
    }

    /// Underlying matrix.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    /// Consumes the frame, returning the matrix.
    pub fn into_matrix(self) -> DMatrix<f64> {
        self.m
    }
}

/// Extracts the submatrix with the given 0-based rows and columns.
pub fn submatrix(a: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| a[(rows[i], cols[j])])
}

/// Householder-QR orthogonalization of the column space of `a`.
///
/// The result spans the same column space; the `R` factor's diagonal is
/// normalized to be positive so the output is deterministic. Rank-deficient
/// input (smallest singular value below `1e-10` of the largest) is rejected.
pub fn orthogonalize(a: &DMatrix<f64>) -> Result<OrthonormalFrame> {
    let (n, d) = a.shape();
    if d == 0 || d > n {
        return Err(Error::InvalidArgument(format!(
            "matrix shape {n}x{d} needs 1 <= d <= n"
        )));
    }
    let svals = a.clone().svd(false, false).singular_values;
    let smax = svals.max();
    let smin = svals.min();
    if smax == 0.0 || smin <= 1e-10 * smax {
        return Err(Error::DegenerateInput(format!(
            "rank-deficient input: {d} columns but numerical rank {} \
             (sigma_min = {smin:.3e}, sigma_max = {smax:.3e})",
            svals.iter().filter(|&&s| s > 1e-10 * smax).count(),
        )));
    }
    let qr = a.clone().qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        if r[(j, j)] < 0.0 {
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    OrthonormalFrame::new(q)
}

/// `det(X_S)`: determinant of the rows of `x` selected by `rows`.
///
/// `rows.weight()` must equal the column count. Uses closed forms up to 3x3
/// and LU beyond (via the underlying determinant routine).
pub fn subset_determinant(x: &DMatrix<f64>, rows: &Subset) -> Result<f64> {
    let (n, d) = x.shape();
    if rows.n() != n {
        return Err(Error::InvalidArgument(format!(
            "subset over [{}] does not match matrix with {n} rows",
            rows.n()
        )));
    }
    if rows.weight() != d {
        return Err(Error::InvalidArgument(format!(
            "subset weight {} != column count {d}",
            rows.weight()
        )));
    }
    let idx: Vec<usize> = rows.elements().iter().map(|&e| e - 1).collect();
    let cols: Vec<usize> = (0..d).collect();
    Ok(submatrix(x, &idx, &cols).determinant())
}

/// `sum_{|S|=d} det(X_S) det(Y_S)` over all weight-`d` row subsets.
///
/// By Cauchy-Binet this equals `det(X^T Y)`; callers compare against the
/// direct determinant.
pub fn cauchy_binet_sum(x: &DMatrix<f64>, y: &DMatrix<f64>) -> Result<f64> {
    if x.shape() != y.shape() {
        return Err(Error::InvalidArgument(format!(
            "shape mismatch {:?} vs {:?}",
            x.shape(),
            y.shape()
        )));
    }
    let (n, d) = x.shape();
    caps::check_sector_dim(binomial(n, d))?;
    let mut acc = 0.0;
    for s in enumerate_subsets(n, d) {
        acc += subset_determinant(x, &s)? * subset_determinant(y, &s)?;
    }
    Ok(acc)
}

/// Spherical angles of a unit vector.
///
/// For `x` of length `n >= 2`, the sequence `theta_1..theta_{n-1}` satisfies
/// `x_1 = cos t1`, `x_k = cos tk * prod_{i<k} sin ti`, and
/// `x_n = prod_{i<n} sin ti`. All angles lie in `[0, pi]` except the last,
/// which lies in `[0, 2pi)`. Zero tails produce zero angles.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleSequence {
    angles: Vec<f64>,
}

impl AngleSequence {
    /// Wraps raw angles (length `n - 1` for an `n`-vector).
    pub fn new(angles: Vec<f64>) -> Self {
        AngleSequence { angles }
    }

    /// The angles.
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// Dimension of the vector this sequence describes.
    pub fn dim(&self) -> usize {
        self.angles.len() + 1
    }

    /// Rebuilds the unit vector from the product formulas.
    pub fn reconstruct(&self) -> DVector<f64> {
        let n = self.dim();
        let mut x = DVector::zeros(n);
        let mut prod = 1.0;
        for k in 0..n - 1 {
            x[k] = prod * self.angles[k].cos();
            prod *= self.angles[k].sin();
        }
        x[n - 1] = prod;
        x
    }
}

/// Extracts spherical angles from a unit vector of length `n >= 2`.
pub fn spherical_angles(x: &DVector<f64>) -> Result<AngleSequence> {
    let n = x.len();
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "spherical angles need dimension >= 2, got {n}"
        )));
    }
    let norm = x.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidArgument(format!(
            "expected unit vector, got norm {norm:.12}"
        )));
    }
    let mut angles = Vec::with_capacity(n - 1);
    for k in 0..n - 2 {
        let tail = x.rows(k + 1, n - k - 1).norm();
        angles.push(tail.atan2(x[k]));
    }
    let mut last = x[n - 1].atan2(x[n - 2]);
    if last < 0.0 {
        last += std::f64::consts::TAU;
    }
    angles.push(last);
    Ok(AngleSequence::new(angles))
}

/// `k`-th compound matrix: entry `(I, J) = det(A_{I,J})` over weight-`k`
/// row subsets `I` and column subsets `J`, both in colex order.
pub fn compound(a: &DMatrix<f64>, k: usize) -> Result<DMatrix<f64>> {
    let (n, m) = a.shape();
    if k == 0 || k > n.min(m) {
        return Err(Error::InvalidArgument(format!(
            "compound order {k} out of range for {n}x{m}"
        )));
    }
    let rows_dim = binomial(n, k);
    let cols_dim = binomial(m, k);
    caps::check_compound_dim(rows_dim.max(cols_dim))?;
    let row_sets = enumerate_subsets(n, k);
    let col_sets = enumerate_subsets(m, k);
    let mut out = DMatrix::zeros(rows_dim as usize, cols_dim as usize);
    for (ri, rs) in row_sets.iter().enumerate() {
        let ridx: Vec<usize> = rs.elements().iter().map(|&e| e - 1).collect();
        for (ci, cs) in col_sets.iter().enumerate() {
            let cidx: Vec<usize> = cs.elements().iter().map(|&e| e - 1).collect();
            out[(ri, ci)] = submatrix(a, &ridx, &cidx).determinant();
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::TestMatrices;
    use approx::assert_abs_diff_eq;

    #[test]
    fn orthogonalize_projector_matches_normal_equations() {
        // Oracle: A (A^T A)^{-1} A^T is the projector onto Col(A).
        let mut gen = TestMatrices::new(11);
        for _ in 0..20 {
            let a = gen.general(6, 3);
            let x = orthogonalize(&a).unwrap();
            let gram_inv = (a.transpose() * &a).try_inverse().unwrap();
            let proj = &a * gram_inv * a.transpose();
            let xxt = x.matrix() * x.matrix().transpose();
            assert!((proj - xxt).abs().max() < 1e-9);
        }
    }

    #[test]
    fn orthogonalize_is_deterministic_and_sign_normalized() {
        let mut gen = TestMatrices::new(3);
        let a = gen.general(5, 2);
        let x1 = orthogonalize(&a).unwrap();
        let x2 = orthogonalize(&a).unwrap();
        assert_eq!(x1.matrix(), x2.matrix());
        let r = x1.matrix().transpose() * &a;
        for j in 0..2 {
            assert!(r[(j, j)] > 0.0, "R diagonal must be positive");
        }
    }

    #[test]
    fn orthogonalize_rejects_rank_deficient() {
        let mut a = DMatrix::<f64>::zeros(4, 2);
        a[(0, 0)] = 1.0;
        a[(1, 0)] = 2.0;
        a[(0, 1)] = 2.0;
        a[(1, 1)] = 4.0;
        let err = orthogonalize(&a).unwrap_err();
        assert_eq!(err.category(), "degenerate-input");
        assert!(err.to_string().contains("2 columns"));
    }

    #[test]
    fn subset_determinant_hand_case() {
        // Frozen by hand: rows {1,2} of [[0,1],[3/5,0],[4/5,0]] give
        // det [[0,1],[3/5,0]] = -3/5; rows {1,3} give -4/5; rows {2,3} give 0.
        let x = DMatrix::from_row_slice(3, 2, &[0.0, 1.0, 0.6, 0.0, 0.8, 0.0]);
        let s12 = Subset::from_elements(&[1, 2], 3).unwrap();
        let s13 = Subset::from_elements(&[1, 3], 3).unwrap();
        let s23 = Subset::from_elements(&[2, 3], 3).unwrap();
        assert_abs_diff_eq!(subset_determinant(&x, &s12).unwrap(), -0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(subset_determinant(&x, &s13).unwrap(), -0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(subset_determinant(&x, &s23).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn cauchy_binet_matches_direct_determinant() {
        let mut gen = TestMatrices::new(5);
        for _ in 0..10 {
            let x = gen.general(6, 3);
            let y = gen.general(6, 3);
            let sum = cauchy_binet_sum(&x, &y).unwrap();
            let direct = (x.transpose() * &y).determinant();
            assert_abs_diff_eq!(sum, direct, epsilon = 1e-9);
        }
    }

    #[test]
    fn frame_minors_have_unit_norm() {
        let mut gen = TestMatrices::new(9);
        let x = gen.frame(7, 3);
        let total: f64 = enumerate_subsets(7, 3)
            .iter()
            .map(|s| subset_determinant(x.matrix(), s).unwrap().powi(2))
            .sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn spherical_angles_hand_case() {
        let x = DVector::from_vec(vec![0.6, 0.8]);
        let seq = spherical_angles(&x).unwrap();
        assert_eq!(seq.angles().len(), 1);
        assert_abs_diff_eq!(seq.angles()[0].cos(), 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(seq.angles()[0].sin(), 0.8, epsilon = 1e-15);
    }

    #[test]
    fn spherical_angles_round_trip_random() {
        let mut gen = TestMatrices::new(17);
        for n in 2..=9 {
            for _ in 0..50 {
                let x = gen.unit_vector(n);
                let seq = spherical_angles(&x).unwrap();
                let back = seq.reconstruct();
                assert!((&x - &back).norm() < 1e-12, "n = {n}");
                for (k, &t) in seq.angles().iter().enumerate() {
                    if k + 2 < n {
                        assert!((0.0..=std::f64::consts::PI).contains(&t));
                    } else {
                        assert!((0.0..std::f64::consts::TAU).contains(&t));
                    }
                }
            }
        }
    }

    #[test]
    fn spherical_angles_zero_tail() {
        let x = DVector::from_vec(vec![0.0, -1.0, 0.0, 0.0]);
        let seq = spherical_angles(&x).unwrap();
        let back = seq.reconstruct();
        assert!((&x - &back).norm() < 1e-14);
        assert_eq!(seq.angles()[2], 0.0, "zero tail yields zero trailing angle");
    }

    #[test]
    fn spherical_angles_rejects_bad_input() {
        assert!(spherical_angles(&DVector::from_vec(vec![1.0])).is_err());
        assert!(spherical_angles(&DVector::from_vec(vec![1.0, 1.0])).is_err());
    }

    #[test]
    fn compound_of_diagonal_is_diagonal_of_products() {
        // Frozen: diag(2,3,5) squared-compound is diag(6,10,15) in colex
        // order {1,2},{1,3},{2,3}.
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 3.0, 5.0]));
        let c = compound(&a, 2).unwrap();
        let expect = DMatrix::from_diagonal(&DVector::from_vec(vec![6.0, 10.0, 15.0]));
        assert_eq!(c, expect);
    }

    #[test]
    fn compound_is_multiplicative() {
        let mut gen = TestMatrices::new(23);
        for k in 1..=3 {
            let a = gen.general(5, 5);
            let b = gen.general(5, 5);
            let lhs = compound(&(&a * &b), k).unwrap();
            let rhs = compound(&a, k).unwrap() * compound(&b, k).unwrap();
            assert!((lhs - rhs).abs().max() < 1e-10, "k = {k}");
        }
    }

    #[test]
    fn compound_of_orthogonal_is_orthogonal() {
        let mut gen = TestMatrices::new(29);
        let q = gen.orthogonal(6);
        for k in 1..=5 {
            let c = compound(&q, k).unwrap();
            let dev = (c.transpose() * &c - DMatrix::identity(c.nrows(), c.nrows()))
                .abs()
                .max();
            assert!(dev < 1e-11, "k = {k}: {dev:.3e}");
        }
    }
}
