//! Synthesis of orthogonal matrices and frames into plane-rotation products.
//!
//! Two decompositions are provided:
//!
//! * [`pyramid_decompose`] — a QR-style peel by *adjacent* rotations
//!   `G(i, i+1, t)`. For an `n x d` frame it uses `(2n - d - 1) d / 2`
//!   rotations generically and pipelines to depth at most `n + d`.
//! * [`sine_cosine_decompose`] — a balanced recursion for square orthogonal
//!   matrices of power-of-two size, emitting exactly `n(n-1)/2` rotations
//!   (some possibly zero-angle) that layer into depth `n - 1`.
//!
//! Both produce `A = G(r_1) G(r_2) ... G(r_m) * [diag(signs); 0]`, and
//! [`GivensDecomposition::to_circuit`] realizes that product on wires so
//! that the circuit's weight-`k` sector matrix equals the `k`-th compound
//! of `A` (for square `A`), or prepares the subspace state of a frame from
//! `|{1..d}>`.

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::linalg::{OrthonormalFrame, FRAME_TOL};
use crate::simulator::SectorState;
use crate::subsets::Subset;
use nalgebra::DMatrix;

/// A plane rotation `G(i, j, theta)` with 1-based `i < j`: rows `i`/`j` map
/// to `cos t * r_i + sin t * r_j` and `-sin t * r_i + cos t * r_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GivensRotation {
    pub i: usize,
    pub j: usize,
    pub theta: f64,
}

/// Dense `n x n` matrix of one plane rotation.
pub fn givens_matrix(n: usize, i: usize, j: usize, theta: f64) -> DMatrix<f64> {
    debug_assert!(i < j && j <= n);
    let (sin, cos) = theta.sin_cos();
    let mut g = DMatrix::identity(n, n);
    g[(i - 1, i - 1)] = cos;
    g[(j - 1, j - 1)] = cos;
    g[(i - 1, j - 1)] = sin;
    g[(j - 1, i - 1)] = -sin;
    g
}

/// Applies `G(i, j, theta)` on the left of `a`, in place.
pub fn apply_givens_left(a: &mut DMatrix<f64>, i: usize, j: usize, theta: f64) {
    let (sin, cos) = theta.sin_cos();
    for c in 0..a.ncols() {
        let x = a[(i - 1, c)];
        let y = a[(j - 1, c)];
        a[(i - 1, c)] = cos * x + sin * y;
        a[(j - 1, c)] = -sin * x + cos * y;
    }
}

/// A factored orthogonal matrix or frame:
/// `A = G(r_1) ... G(r_m) * [diag(signs); 0]` with `rotations` in product
/// order (leftmost factor first) and `signs.len()` equal to the column
/// count.
#[derive(Debug, Clone, PartialEq)]
pub struct GivensDecomposition {
    n: usize,
    d: usize,
    rotations: Vec<GivensRotation>,
    signs: Vec<f64>,
}

impl GivensDecomposition {
    /// Row count of the factored matrix.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Column count of the factored matrix.
    pub fn cols(&self) -> usize {
        self.d
    }

    /// Rotations in product order.
    pub fn rotations(&self) -> &[GivensRotation] {
        &self.rotations
    }

    /// Residual `+-1` column signs.
    pub fn signs(&self) -> &[f64] {
        &self.signs
    }

    /// Number of rotations.
    pub fn rotation_count(&self) -> usize {
        self.rotations.len()
    }

    /// Rotation-level depth: greedy layering of the rotations as parallel
    /// two-wire operations (applied right-to-left in product order).
    pub fn rotation_depth(&self) -> usize {
        let mut wire_layer = vec![0usize; self.n + 1];
        let mut depth = 0;
        for r in self.rotations.iter().rev() {
            let layer = 1 + wire_layer[r.i].max(wire_layer[r.j]);
            wire_layer[r.i] = layer;
            wire_layer[r.j] = layer;
            depth = depth.max(layer);
        }
        depth
    }

    /// Multiplies the factors back out.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.d);
        for c in 0..self.d {
            m[(c, c)] = self.signs[c];
        }
        for r in self.rotations.iter().rev() {
            apply_givens_left(&mut m, r.i, r.j, r.theta);
        }
        m
    }

    /// Max-abs reconstruction error against the original matrix.
    pub fn residual(&self, original: &DMatrix<f64>) -> f64 {
        (self.reconstruct() - original).abs().max()
    }

    /// Realizes the factorization as a circuit: `Z` gates for the negative
    /// signs (applied first), then one pair rotation per Givens factor in
    /// reverse product order. Adjacent factors become `RBS`, distant ones
    /// `FBS`, so the circuit's weight-`k` sector action is the `k`-th
    /// compound of the factored matrix.
    pub fn to_circuit(&self) -> Result<Circuit> {
        let mut c = Circuit::new(self.n)?;
        for (q, s) in self.signs.iter().enumerate() {
            if *s < 0.0 {
                c.z(q + 1)?;
            }
        }
        for r in self.rotations.iter().rev() {
            if r.j == r.i + 1 {
                c.rbs(r.i, r.j, r.theta)?;
            } else {
                c.fbs(r.i, r.j, r.theta)?;
            }
        }
        Ok(c)
    }
}

fn check_orthonormal_columns(a: &DMatrix<f64>) -> Result<()> {
    let (n, d) = a.shape();
    if d == 0 || d > n {
        return Err(Error::InvalidArgument(format!(
            "matrix shape {n}x{d} needs 1 <= d <= n"
        )));
    }
    let dev = (a.transpose() * a - DMatrix::<f64>::identity(d, d))
        .abs()
        .max();
    if dev > FRAME_TOL {
        return Err(Error::InvalidArgument(format!(
            "columns are not orthonormal: ||A^T A - I||_max = {dev:.3e}"
        )));
    }
    Ok(())
}

/// Adjacent-rotation peel of an `n x d` matrix with orthonormal columns.
///
/// Column by column, entries below the diagonal are zeroed bottom-up with
/// `G(r-1, r, t)` factors; entries that are already exactly zero are
/// skipped, so structured inputs (identity blocks, loaders) yield short
/// factorizations. Generic frames use `(2n - d - 1) d / 2` rotations.
pub fn pyramid_decompose(a: &DMatrix<f64>) -> Result<GivensDecomposition> {
    check_orthonormal_columns(a)?;
    let (n, d) = a.shape();
    let mut work = a.clone();
    let mut rotations = Vec::new();
    for c in 0..d {
        for r in (c + 1..n).rev() {
            if work[(r, c)] == 0.0 {
                continue;
            }
            let theta = work[(r, c)].atan2(work[(r - 1, c)]);
            apply_givens_left(&mut work, r, r + 1, theta);
            work[(r, c)] = 0.0;
            rotations.push(GivensRotation {
                i: r,
                j: r + 1,
                theta: -theta,
            });
        }
    }
    let mut signs = Vec::with_capacity(d);
    for c in 0..d {
        let v = work[(c, c)];
        if (v.abs() - 1.0).abs() > 1e-8 {
            return Err(Error::DegenerateInput(format!(
                "peel left diagonal entry {v:.6} at column {} (expected +-1)",
                c + 1
            )));
        }
        signs.push(if v < 0.0 { -1.0 } else { 1.0 });
    }
    Ok(GivensDecomposition {
        n,
        d,
        rotations,
        signs,
    })
}

/// Balanced sine-cosine recursion for a square orthogonal matrix of
/// power-of-two size `n`, emitting exactly `n(n-1)/2` rotations that layer
/// into depth `n - 1`. The middle layer of each level couples wire `i` to
/// wire `i + n/2`.
pub fn sine_cosine_decompose(u: &DMatrix<f64>) -> Result<GivensDecomposition> {
    let (n, m) = u.shape();
    if n != m {
        return Err(Error::InvalidArgument(format!(
            "sine-cosine factorization needs a square matrix, got {n}x{m}"
        )));
    }
    if !n.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "sine-cosine factorization needs power-of-two size, got {n}"
        )));
    }
    check_orthonormal_columns(u)?;
    let (rotations, signs) = csd_recurse(u);
    Ok(GivensDecomposition {
        n,
        d: n,
        rotations,
        signs,
    })
}

/// Returns `(rotations, signs)` with `u = prod(rotations) * diag(signs)`.
fn csd_recurse(u: &DMatrix<f64>) -> (Vec<GivensRotation>, Vec<f64>) {
    let n = u.nrows();
    if n == 1 {
        return (Vec::new(), vec![if u[(0, 0)] < 0.0 { -1.0 } else { 1.0 }]);
    }
    let m = n / 2;
    let u00 = u.view((0, 0), (m, m)).into_owned();
    let u01 = u.view((0, m), (m, m)).into_owned();
    let u10 = u.view((m, 0), (m, m)).into_owned();
    let u11 = u.view((m, m), (m, m)).into_owned();

    // u00 = L0 C R0^T with the cosines made ascending.
    let svd = u00.svd(true, true);
    let l0_desc = svd.u.unwrap();
    let r0t_desc = svd.v_t.unwrap();
    let mut l0 = DMatrix::zeros(m, m);
    let mut r0 = DMatrix::zeros(m, m);
    let mut cvals = vec![0.0; m];
    for k in 0..m {
        let src = m - 1 - k;
        cvals[k] = svd.singular_values[src].min(1.0);
        for i in 0..m {
            l0[(i, k)] = l0_desc[(i, src)];
            r0[(i, k)] = r0t_desc[(src, i)];
        }
    }

    // u10 R0 = -L1 S: its columns are orthogonal with norms s_k, so a QR
    // with the triangular factor's diagonal forced nonnegative recovers L1
    // up to the overall minus.
    let prod = &u10 * &r0;
    let qr = prod.qr();
    let mut l1 = qr.q();
    let rfac = qr.r();
    let mut svals = vec![0.0; m];
    for k in 0..m {
        let s = rfac[(k, k)];
        svals[k] = s.abs();
        let flip = if s < 0.0 { 1.0 } else { -1.0 };
        for i in 0..m {
            l1[(i, k)] *= flip;
        }
    }

    // Middle-layer angles and the right factors. Row k of R1^T comes from
    // whichever of u01 = L0 S R1^T, u11 = L1 C R1^T is better conditioned.
    let mut theta = vec![0.0; m];
    let lt01 = l0.transpose() * &u01;
    let lt11 = l1.transpose() * &u11;
    let mut r1t = DMatrix::zeros(m, m);
    for k in 0..m {
        theta[k] = svals[k].atan2(cvals[k]);
        let (block, scale) = if svals[k] >= cvals[k] {
            (&lt01, svals[k])
        } else {
            (&lt11, cvals[k])
        };
        for i in 0..m {
            r1t[(k, i)] = block[(k, i)] / scale;
        }
    }
    let r0t = r0.transpose();

    let (rot_l0, sign_l0) = csd_recurse(&l0);
    let (rot_l1, sign_l1) = csd_recurse(&l1);
    let (rot_r0, sign_r0) = csd_recurse(&r0t);
    let (rot_r1, sign_r1) = csd_recurse(&r1t);

    // Assemble u = (L0 + L1) * M * (R0^T + R1^T) with the lower blocks
    // shifted by m, then push the left blocks' signs right through M and the
    // right factors: diag(s) G(i,j,t) = G(i,j, s_i s_j t) diag(s).
    let mut rotations = Vec::new();
    rotations.extend(rot_l0.iter().copied());
    rotations.extend(rot_l1.iter().map(|r| GivensRotation {
        i: r.i + m,
        j: r.j + m,
        theta: r.theta,
    }));
    let mut left_signs = sign_l0;
    left_signs.extend(sign_l1);

    let mut tail = Vec::new();
    for (k, t) in theta.iter().enumerate() {
        tail.push(GivensRotation {
            i: k + 1,
            j: k + 1 + m,
            theta: *t,
        });
    }
    tail.extend(rot_r0.iter().copied());
    tail.extend(rot_r1.iter().map(|r| GivensRotation {
        i: r.i + m,
        j: r.j + m,
        theta: r.theta,
    }));
    for r in &tail {
        rotations.push(GivensRotation {
            i: r.i,
            j: r.j,
            theta: left_signs[r.i - 1] * left_signs[r.j - 1] * r.theta,
        });
    }

    let mut signs = sign_r0;
    signs.extend(sign_r1);
    for k in 0..n {
        signs[k] *= left_signs[k];
    }
    (rotations, signs)
}

/// Builds the preparation circuit for the subspace state of a frame: the
/// pyramid peel realized on wires, applied to `|{1..d}>`.
pub fn preparation_circuit(frame: &OrthonormalFrame) -> Result<(GivensDecomposition, Circuit)> {
    let decomp = pyramid_decompose(frame.matrix())?;
    let circuit = decomp.to_circuit()?;
    Ok((decomp, circuit))
}

/// Prepares `|Col(X)>` by simulating the preparation circuit on the
/// weight-`d` sector from `|{1..d}>`.
pub fn prepare_with_rotations(frame: &OrthonormalFrame) -> Result<SectorState> {
    let (_, circuit) = preparation_circuit(frame)?;
    let d = frame.d();
    let start = Subset::from_mask((1u64 << d) - 1, frame.n())
        .expect("d <= n <= 63 guaranteed by frame validation");
    let mut state = SectorState::basis(start)?;
    state.apply_circuit(&circuit)?;
    Ok(state)
}

#[derive(Clone, Copy, PartialEq)]
enum WireState {
    Zero,
    One,
    Mixed,
}

/// Drops gates outside the forward lightcone of the basis input `|start>`.
///
/// Wires are tracked as definitely-0, definitely-1, or mixed. Rotations on
/// two equal classical wires fix the state, `CZ` with a 0-wire and `CX`
/// with a 0-control are identities, and `Z` on a 0-wire does nothing; all
/// such gates are removed. The result acts identically on `|start>`.
pub fn prune_for_input(c: &Circuit, start: u64) -> Result<Circuit> {
    if start >> c.n() != 0 {
        return Err(Error::InvalidArgument(format!(
            "input mask {start:#b} out of range for {} wires",
            c.n()
        )));
    }
    let mut state: Vec<WireState> = (0..c.n())
        .map(|q| {
            if start >> q & 1 == 1 {
                WireState::One
            } else {
                WireState::Zero
            }
        })
        .collect();
    let mut out = Circuit::new(c.n())?;
    for g in c.gates() {
        let keep = match *g {
            Gate::Rbs { i, j, .. } | Gate::Fbs { i, j, .. } => {
                let (a, b) = (state[i - 1], state[j - 1]);
                if a == b && a != WireState::Mixed {
                    false
                } else {
                    state[i - 1] = WireState::Mixed;
                    state[j - 1] = WireState::Mixed;
                    true
                }
            }
            Gate::Z { q } => state[q - 1] != WireState::Zero,
            Gate::Cz { i, j } => state[i - 1] != WireState::Zero && state[j - 1] != WireState::Zero,
            Gate::Cx { c: ctrl, t } => match state[ctrl - 1] {
                WireState::Zero => false,
                WireState::One => {
                    state[t - 1] = match state[t - 1] {
                        WireState::Zero => WireState::One,
                        WireState::One => WireState::Zero,
                        WireState::Mixed => WireState::Mixed,
                    };
                    true
                }
                WireState::Mixed => {
                    state[t - 1] = WireState::Mixed;
                    true
                }
            },
            Gate::X { q } => {
                state[q - 1] = match state[q - 1] {
                    WireState::Zero => WireState::One,
                    WireState::One => WireState::Zero,
                    WireState::Mixed => WireState::Mixed,
                };
                true
            }
        };
        if keep {
            out.push(*g)?;
        }
    }
    Ok(out)
}
