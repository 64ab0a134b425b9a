//! State loaders: circuits realizing the reflection `Gamma(x)` for a unit
//! vector `x`.
//!
//! `Gamma(x) = sum_i x_i g_i` where `g_i` flips wire `i` with a sign given
//! by the parity of the occupied wires below it (`g_i = Z_1..Z_{i-1} X_i`).
//! Each loader is built as `M^-1 . X_1 . M` from a *mapper* circuit `M`
//! sending `|e_1>` to the weight-1 encoding of `x`:
//!
//! * [`linear_mapper`] — a chain of `n - 1` adjacent rotations, depth
//!   `n - 1`.
//! * [`log_mapper`] — a balanced recursion over halves (power-of-two `n`)
//!   with depth `4 (log2 n - 1)` for `n >= 4`, using `CZ`-conjugated
//!   rotations plus a sparse `CX` parity tail instead of full
//!   parity-conditioned rotations.
//!
//! Products of loaders build subspace states: applying the loaders of the
//! columns of an orthonormal frame to `|0...0>` (last column first) yields
//! the state whose amplitudes are the frame's subset minors.

use crate::caps;
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::linalg::OrthonormalFrame;
use crate::simulator::StateVector;
use crate::subsets::Subset;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Loader family: linear-depth chain or log-depth balanced recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LoaderKind {
    Linear,
    Log,
}

fn check_unit(x: &DVector<f64>) -> Result<()> {
    let norm = x.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidArgument(format!(
            "loader input must be a unit vector, got norm {norm:.12}"
        )));
    }
    Ok(())
}

/// Dense matrix of `Gamma(x)`: column `m` holds
/// `sum_i x_i (-1)^(#occupied wires below i) |m xor e_i>`.
pub fn gamma_dense(x: &DVector<f64>) -> Result<DMatrix<f64>> {
    let n = x.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty vector".into()));
    }
    caps::check_gamma_qubits(n)?;
    let dim = 1usize << n;
    let mut g = DMatrix::zeros(dim, dim);
    for m in 0..dim as u64 {
        for i in 0..n {
            let bit = 1u64 << i;
            let sign = if (m & (bit - 1)).count_ones().is_multiple_of(2) {
                1.0
            } else {
                -1.0
            };
            g[((m ^ bit) as usize, m as usize)] += sign * x[i];
        }
    }
    Ok(g)
}

/// Chain mapper: `n - 1` adjacent rotations sending `|e_1>` to the weight-1
/// encoding of `x`. Angles come from the spherical factorization of `x`.
pub fn linear_mapper(x: &DVector<f64>) -> Result<Circuit> {
    check_unit(x)?;
    let n = x.len();
    let mut c = Circuit::new(n)?;
    if n == 1 {
        if x[0] < 0.0 {
            c.z(1)?;
        }
        return Ok(c);
    }
    let angles = crate::linalg::spherical_angles(x)?;
    for (k, t) in angles.angles().iter().enumerate() {
        c.rbs(k + 1, k + 2, -t)?;
    }
    Ok(c)
}

/// Balanced mapper for power-of-two `n`: each level splits `x` into halves,
/// rotates weight between them with a `CZ`-conjugated top rotation, and
/// recurses.
///
/// The mapper equals `F(x) V(n)` where `F(x)` is the reference mapper built
/// from parity-conditioned rotations and `V(n)` is a fixed `CX` network on
/// wires `2..n`. Since such a network fixes `|e_1>` and commutes with `X_1`,
/// the mapper both prepares `|un(x)>` and conjugates `X_1` to `Gamma(x)`
/// exactly, while replacing every distant rotation's parity string with a
/// single `CZ` pair.
pub fn log_mapper(x: &DVector<f64>) -> Result<Circuit> {
    check_unit(x)?;
    let n = x.len();
    if !n.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "balanced mapper needs power-of-two length, got {n}"
        )));
    }
    let mut c = Circuit::new(n)?;
    if n == 1 {
        if x[0] < 0.0 {
            c.z(1)?;
        }
        return Ok(c);
    }
    let mut gates = Vec::new();
    log_mapper_gates(x.as_slice(), 0, false, &mut gates);
    for g in gates {
        c.push(g)?;
    }
    Ok(c)
}

/// Star fan-in of block wires `lo..=hi` onto block wire 2 (1-based within
/// the block at `off`). All gates share the target, so they commute.
fn star_gates(off: usize, lo: usize, hi: usize, gates: &mut Vec<Gate>) {
    for a in lo..=hi {
        gates.push(Gate::Cx {
            c: off + a,
            t: off + 2,
        });
    }
}

/// The correction network `V(m)` on a block of size `m`:
/// `V(m) = V(m/2) on the upper half  *  star(3..m/2 -> 2)`, empty for
/// `m <= 4`. Gates are emitted in temporal order (rightmost factor first).
fn correction_gates(m: usize, off: usize, gates: &mut Vec<Gate>) {
    if m <= 4 {
        return;
    }
    star_gates(off, 3, m / 2, gates);
    correction_gates(m / 2, off + m / 2, gates);
}

/// Emits the mapper for `x` on wires `off+1 ..= off+len(x)`.
///
/// `tailed` prepends the tail network `V(n/2) on the upper half *
/// star(n/2+1..n -> 2)`, turning this block into `F(x) * star(3..n -> 2)`:
/// the form the parent's `CZ`-conjugated top rotation needs in place of its
/// own parity tree.
fn log_mapper_gates(x: &[f64], off: usize, tailed: bool, gates: &mut Vec<Gate>) {
    let n = x.len();
    if n == 2 {
        gates.push(Gate::Rbs {
            i: off + 1,
            j: off + 2,
            theta: -x[1].atan2(x[0]),
        });
        return;
    }
    if tailed {
        star_gates(off, n / 2 + 1, n, gates);
        correction_gates(n / 2, off + n / 2, gates);
    }
    let m = n / 2;
    let a = x[..m].iter().map(|v| v * v).sum::<f64>().sqrt();
    let b = x[m..].iter().map(|v| v * v).sum::<f64>().sqrt();
    gates.push(Gate::Cz {
        i: off + 1,
        j: off + 2,
    });
    gates.push(Gate::Rbs {
        i: off + 1,
        j: off + m + 1,
        theta: -b.atan2(a),
    });
    gates.push(Gate::Cz {
        i: off + 1,
        j: off + 2,
    });
    log_mapper_gates(&x[..m], off, true, gates);
    log_mapper_gates(&x[m..], off + m, false, gates);
}

/// Mapper of the requested kind.
pub fn mapper(x: &DVector<f64>, kind: LoaderKind) -> Result<Circuit> {
    match kind {
        LoaderKind::Linear => linear_mapper(x),
        LoaderKind::Log => log_mapper(x),
    }
}

/// Loader circuit for `Gamma(x)`: mapper inverse, `X` on wire 1, mapper.
pub fn loader_circuit(x: &DVector<f64>, kind: LoaderKind) -> Result<Circuit> {
    let m = mapper(x, kind)?;
    let mut c = m.inverse();
    c.x(1)?;
    c.append(&m)?;
    Ok(c)
}

/// Applies the column loaders of a frame to `|0...0>`, last column first, so
/// the resulting operator is `Gamma(x_1) Gamma(x_2) ... Gamma(x_d)`. The
/// result is the dense embedding of the frame's subspace state: the
/// amplitude on each size-`d` subset is the corresponding column-order
/// minor.
pub fn loader_product_state(frame: &OrthonormalFrame, kind: LoaderKind) -> Result<StateVector> {
    let n = frame.n();
    caps::check_quantum_sample_qubits(n)?;
    let mut state = StateVector::basis(n, 0)?;
    for c in (0..frame.d()).rev() {
        let col = DVector::from_column_slice(frame.matrix().column(c).as_slice());
        let circuit = loader_circuit(&col, kind)?;
        state.apply_circuit(&circuit)?;
    }
    Ok(state)
}

/// `<target| Gamma(c_1) Gamma(c_2) ... Gamma(c_k) |empty>` by explicit path
/// enumeration: the last column acts first, and every sequence of flipped
/// wires whose symmetric difference is `target` contributes the product of
/// its coordinates and parity signs. Exponential in the number of columns; a
/// cross-check oracle for small sizes.
pub fn transition_amplitude_path_sum(cols: &[DVector<f64>], target: &Subset) -> Result<f64> {
    let k = cols.len();
    if k == 0 {
        return Err(Error::InvalidArgument("no columns given".into()));
    }
    let n = cols[0].len();
    if cols.iter().any(|c| c.len() != n) {
        return Err(Error::InvalidArgument("column lengths differ".into()));
    }
    if target.n() != n {
        return Err(Error::InvalidArgument(format!(
            "target subset over [{}] does not match columns of length {n}",
            target.n()
        )));
    }
    let paths = (n as u128).pow(k as u32);
    if paths > 20_000_000 {
        return Err(Error::ResourceLimit(format!(
            "path sum needs {paths} paths (limit 20000000)"
        )));
    }
    let mut total = 0.0;
    let mut stack: Vec<(usize, u64, f64)> = vec![(0, 0, 1.0)];
    while let Some((t, mask, amp)) = stack.pop() {
        if t == k {
            if mask == target.mask() {
                total += amp;
            }
            continue;
        }
        let col = &cols[k - 1 - t];
        for i in 0..n {
            let bit = 1u64 << i;
            let sign = if (mask & (bit - 1)).count_ones().is_multiple_of(2) {
                1.0
            } else {
                -1.0
            };
            let contrib = amp * sign * col[i];
            if contrib != 0.0 {
                stack.push((t + 1, mask ^ bit, contrib));
            }
        }
    }
    Ok(total)
}
