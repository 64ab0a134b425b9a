//! Gate-list circuit representation.
//!
//! Circuits are flat, temporally ordered gate lists over 1-based wires. The
//! gate set is the hardware-style basis used throughout: `RBS`/`FBS` pair
//! rotations, `X`, `Z`, `CZ`, and `CX`. Pair rotations are normalized to
//! `i < j` on construction (swapping wires negates the angle), and `CZ` is
//! stored with ascending wires since it is symmetric.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A single gate. `RBS(i,j,theta)` rotates the `|10>`/`|01>` pair on wires
/// `(i,j)`; `FBS` is the same rotation with its angle sign conditioned on the
/// parity of the occupied wires strictly between `i` and `j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GateRepr", into = "GateRepr")]
pub enum Gate {
    Rbs { i: usize, j: usize, theta: f64 },
    Fbs { i: usize, j: usize, theta: f64 },
    X { q: usize },
    Z { q: usize },
    Cz { i: usize, j: usize },
    Cx { c: usize, t: usize },
}

impl Gate {
    /// Normalized pair rotation: callers may pass wires in either order.
    pub fn rbs(i: usize, j: usize, theta: f64) -> Result<Gate> {
        let (i, j, theta) = normalize_pair(i, j, theta)?;
        Ok(Gate::Rbs { i, j, theta })
    }

    /// Normalized parity-conditioned pair rotation.
    pub fn fbs(i: usize, j: usize, theta: f64) -> Result<Gate> {
        let (i, j, theta) = normalize_pair(i, j, theta)?;
        Ok(Gate::Fbs { i, j, theta })
    }

    /// Symmetric controlled-Z, stored with ascending wires.
    pub fn cz(i: usize, j: usize) -> Result<Gate> {
        if i == j || i == 0 || j == 0 {
            return Err(Error::InvalidArgument(format!("bad CZ wires ({i},{j})")));
        }
        Ok(Gate::Cz {
            i: i.min(j),
            j: i.max(j),
        })
    }

    /// Controlled-X with control `c` and target `t`.
    pub fn cx(c: usize, t: usize) -> Result<Gate> {
        if c == t || c == 0 || t == 0 {
            return Err(Error::InvalidArgument(format!("bad CX wires ({c},{t})")));
        }
        Ok(Gate::Cx { c, t })
    }

    /// Wires the gate touches.
    pub fn wires(&self) -> Vec<usize> {
        match *self {
            Gate::Rbs { i, j, .. } | Gate::Fbs { i, j, .. } | Gate::Cz { i, j } => vec![i, j],
            Gate::Cx { c, t } => vec![c, t],
            Gate::X { q } | Gate::Z { q } => vec![q],
        }
    }

    /// The inverse gate (rotations negate their angle; the rest are
    /// self-inverse).
    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::Rbs { i, j, theta } => Gate::Rbs {
                i,
                j,
                theta: -theta,
            },
            Gate::Fbs { i, j, theta } => Gate::Fbs {
                i,
                j,
                theta: -theta,
            },
            g => g,
        }
    }

    /// Short lowercase name used in serialization and tallies.
    pub fn name(&self) -> &'static str {
        match self {
            Gate::Rbs { .. } => "rbs",
            Gate::Fbs { .. } => "fbs",
            Gate::X { .. } => "x",
            Gate::Z { .. } => "z",
            Gate::Cz { .. } => "cz",
            Gate::Cx { .. } => "cx",
        }
    }
}

fn normalize_pair(i: usize, j: usize, theta: f64) -> Result<(usize, usize, f64)> {
    if i == j || i == 0 || j == 0 {
        return Err(Error::InvalidArgument(format!(
            "bad rotation wires ({i},{j})"
        )));
    }
    if i < j {
        Ok((i, j, theta))
    } else {
        Ok((j, i, -theta))
    }
}

#[derive(Serialize, Deserialize)]
struct GateRepr {
    g: String,
    q: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
}

impl From<Gate> for GateRepr {
    fn from(g: Gate) -> GateRepr {
        let (q, theta) = match g {
            Gate::Rbs { i, j, theta } | Gate::Fbs { i, j, theta } => (vec![i, j], Some(theta)),
            Gate::Cz { i, j } => (vec![i, j], None),
            Gate::Cx { c, t } => (vec![c, t], None),
            Gate::X { q } | Gate::Z { q } => (vec![q], None),
        };
        GateRepr {
            g: g.name().to_ascii_uppercase(),
            q,
            theta,
        }
    }
}

impl TryFrom<GateRepr> for Gate {
    type Error = Error;

    fn try_from(r: GateRepr) -> Result<Gate> {
        let two = |q: &[usize]| -> Result<(usize, usize)> {
            match q {
                [a, b] => Ok((*a, *b)),
                _ => Err(Error::InvalidArgument(format!(
                    "gate expects two wires, got {q:?}"
                ))),
            }
        };
        let one = |q: &[usize]| -> Result<usize> {
            match q {
                [a] => Ok(*a),
                _ => Err(Error::InvalidArgument(format!(
                    "gate expects one wire, got {q:?}"
                ))),
            }
        };
        let angle = r
            .theta
            .ok_or_else(|| Error::InvalidArgument("rotation gate missing theta".into()));
        match r.g.to_ascii_lowercase().as_str() {
            "rbs" => {
                let (i, j) = two(&r.q)?;
                Gate::rbs(i, j, angle?)
            }
            "fbs" => {
                let (i, j) = two(&r.q)?;
                Gate::fbs(i, j, angle?)
            }
            "cz" => {
                let (i, j) = two(&r.q)?;
                Gate::cz(i, j)
            }
            "cx" => {
                let (c, t) = two(&r.q)?;
                Gate::cx(c, t)
            }
            "x" => Ok(Gate::X { q: one(&r.q)? }),
            "z" => Ok(Gate::Z { q: one(&r.q)? }),
            other => Err(Error::InvalidArgument(format!("unknown gate '{other}'"))),
        }
    }
}

/// An ordered gate list over `n` wires.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CircuitRepr", into = "CircuitRepr")]
pub struct Circuit {
    n: usize,
    gates: Vec<Gate>,
}

#[derive(Serialize, Deserialize)]
struct CircuitRepr {
    n: usize,
    gates: Vec<Gate>,
}

impl From<Circuit> for CircuitRepr {
    fn from(c: Circuit) -> CircuitRepr {
        CircuitRepr {
            n: c.n,
            gates: c.gates,
        }
    }
}

impl TryFrom<CircuitRepr> for Circuit {
    type Error = Error;

    fn try_from(r: CircuitRepr) -> Result<Circuit> {
        let mut c = Circuit::new(r.n)?;
        for g in r.gates {
            c.push(g)?;
        }
        Ok(c)
    }
}

impl Circuit {
    /// Empty circuit on `n >= 1` wires.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > 63 {
            return Err(Error::InvalidArgument(format!(
                "wire count {n} out of range 1..=63"
            )));
        }
        Ok(Circuit {
            n,
            gates: Vec::new(),
        })
    }

    /// Wire count.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Gates in temporal order.
    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Total gate count.
    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    /// Appends a gate, checking its wires fit.
    pub fn push(&mut self, g: Gate) -> Result<()> {
        for w in g.wires() {
            if w == 0 || w > self.n {
                return Err(Error::InvalidArgument(format!(
                    "wire {w} out of range for {} wires",
                    self.n
                )));
            }
        }
        self.gates.push(g);
        Ok(())
    }

    /// Appends `RBS(i,j,theta)`.
    pub fn rbs(&mut self, i: usize, j: usize, theta: f64) -> Result<()> {
        self.push(Gate::rbs(i, j, theta)?)
    }

    /// Appends `FBS(i,j,theta)`.
    pub fn fbs(&mut self, i: usize, j: usize, theta: f64) -> Result<()> {
        self.push(Gate::fbs(i, j, theta)?)
    }

    /// Appends `X(q)`.
    pub fn x(&mut self, q: usize) -> Result<()> {
        self.push(Gate::X { q })
    }

    /// Appends `Z(q)`.
    pub fn z(&mut self, q: usize) -> Result<()> {
        self.push(Gate::Z { q })
    }

    /// Appends `CZ(i,j)`.
    pub fn cz(&mut self, i: usize, j: usize) -> Result<()> {
        self.push(Gate::cz(i, j)?)
    }

    /// Appends `CX(c -> t)`.
    pub fn cx(&mut self, c: usize, t: usize) -> Result<()> {
        self.push(Gate::cx(c, t)?)
    }

    /// Appends all gates of `other` (wire counts must match).
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.n != self.n {
            return Err(Error::InvalidArgument(format!(
                "cannot append {}-wire circuit to {}-wire circuit",
                other.n, self.n
            )));
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(())
    }

    /// The inverse circuit: gates reversed, each inverted.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            n: self.n,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    /// Circuit depth under greedy layering: each gate lands one layer after
    /// the latest gate sharing a wire with it.
    pub fn depth(&self) -> usize {
        let mut wire_layer = vec![0usize; self.n + 1];
        let mut depth = 0;
        for g in &self.gates {
            let layer = 1 + g.wires().iter().map(|&w| wire_layer[w]).max().unwrap();
            for w in g.wires() {
                wire_layer[w] = layer;
            }
            depth = depth.max(layer);
        }
        depth
    }

    /// Gate tally by name (sorted for deterministic serialization).
    pub fn counts(&self) -> BTreeMap<String, usize> {
        let mut counts = BTreeMap::new();
        for g in &self.gates {
            *counts.entry(g.name().to_string()).or_insert(0) += 1;
        }
        counts
    }

    /// Rewrites every `FBS` into `CX`/`CZ`/`RBS` gates via a balanced parity
    /// tree; other gates pass through.
    pub fn lowered(&self) -> Circuit {
        let mut out = Circuit {
            n: self.n,
            gates: Vec::new(),
        };
        for g in &self.gates {
            match *g {
                Gate::Fbs { i, j, theta } => out.gates.extend(lower_fbs(i, j, theta)),
                g => out.gates.push(g),
            }
        }
        out
    }
}

/// Expands `FBS(i,j,theta)` (with `i < j`) into the two-qubit basis.
///
/// Wires strictly between `i` and `j` feed a balanced `CX` fan-in that
/// accumulates their parity onto wire `i+1`; a `CZ(i, i+1)` conjugation of
/// the plain `RBS(i,j,theta)` then applies the parity-conditioned sign, and
/// the mirrored fan-in restores the interior wires. Depth is at most
/// `2*ceil(log2(j-i)) + 3`.
pub fn lower_fbs(i: usize, j: usize, theta: f64) -> Vec<Gate> {
    debug_assert!(i < j);
    let k = j - i - 1;
    if k == 0 {
        return vec![Gate::Rbs { i, j, theta }];
    }
    let interior: Vec<usize> = (i + 1..j).collect();
    let mut tree = Vec::new();
    let mut stride = 1;
    while stride < k {
        let mut p = 0;
        while p + stride < k {
            tree.push(Gate::Cx {
                c: interior[p + stride],
                t: interior[p],
            });
            p += 2 * stride;
        }
        stride *= 2;
    }
    let mut gates = tree.clone();
    gates.push(Gate::Cz { i, j: i + 1 });
    gates.push(Gate::Rbs { i, j, theta });
    gates.push(Gate::Cz { i, j: i + 1 });
    gates.extend(tree.into_iter().rev());
    gates
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pair_rotations_normalize_wire_order() {
        let g = Gate::rbs(3, 1, 0.5).unwrap();
        assert_eq!(
            g,
            Gate::Rbs {
                i: 1,
                j: 3,
                theta: -0.5
            }
        );
        let g = Gate::fbs(2, 4, 0.25).unwrap();
        assert_eq!(
            g,
            Gate::Fbs {
                i: 2,
                j: 4,
                theta: 0.25
            }
        );
        let g = Gate::cz(5, 2).unwrap();
        assert_eq!(g, Gate::Cz { i: 2, j: 5 });
        let g = Gate::cx(5, 2).unwrap();
        assert_eq!(g, Gate::Cx { c: 5, t: 2 });
        assert!(Gate::rbs(2, 2, 0.1).is_err());
        assert!(Gate::cz(0, 1).is_err());
    }

    #[test]
    fn push_checks_wire_range() {
        let mut c = Circuit::new(3).unwrap();
        assert!(c.rbs(1, 4, 0.1).is_err());
        assert!(c.x(0).is_err());
        assert!(c.rbs(1, 3, 0.1).is_ok());
        assert_eq!(c.gate_count(), 1);
    }

    #[test]
    fn depth_hand_cases() {
        let mut c = Circuit::new(4).unwrap();
        c.rbs(1, 2, 0.1).unwrap();
        c.rbs(3, 4, 0.2).unwrap();
        assert_eq!(c.depth(), 1, "disjoint gates share a layer");
        c.rbs(2, 3, 0.3).unwrap();
        assert_eq!(c.depth(), 2);
        c.x(1).unwrap();
        assert_eq!(c.depth(), 2, "wire 1 was free at layer 2");
        c.cz(1, 4).unwrap();
        assert_eq!(c.depth(), 3);
    }

    #[test]
    fn inverse_reverses_and_negates() {
        let mut c = Circuit::new(3).unwrap();
        c.rbs(1, 2, 0.3).unwrap();
        c.x(2).unwrap();
        c.fbs(1, 3, -0.7).unwrap();
        let inv = c.inverse();
        assert_eq!(
            inv.gates(),
            &[
                Gate::Fbs {
                    i: 1,
                    j: 3,
                    theta: 0.7
                },
                Gate::X { q: 2 },
                Gate::Rbs {
                    i: 1,
                    j: 2,
                    theta: -0.3
                },
            ]
        );
    }

    #[test]
    fn lowering_adjacent_is_plain_rotation() {
        assert_eq!(
            lower_fbs(2, 3, 0.4),
            vec![Gate::Rbs {
                i: 2,
                j: 3,
                theta: 0.4
            }]
        );
    }

    #[test]
    fn lowering_one_interior_wire_uses_cz_sandwich() {
        assert_eq!(
            lower_fbs(1, 3, 0.4),
            vec![
                Gate::Cz { i: 1, j: 2 },
                Gate::Rbs {
                    i: 1,
                    j: 3,
                    theta: 0.4
                },
                Gate::Cz { i: 1, j: 2 },
            ]
        );
    }

    #[test]
    fn lowering_counts_and_depth() {
        // j - i - 1 = k interior wires: 2(k-1) CX, 2 CZ, 1 RBS.
        for (i, j) in [(1usize, 4usize), (1, 6), (2, 9), (1, 9)] {
            let k = j - i - 1;
            let gates = lower_fbs(i, j, 0.3);
            let cx = gates
                .iter()
                .filter(|g| matches!(g, Gate::Cx { .. }))
                .count();
            let cz = gates
                .iter()
                .filter(|g| matches!(g, Gate::Cz { .. }))
                .count();
            let rbs = gates
                .iter()
                .filter(|g| matches!(g, Gate::Rbs { .. }))
                .count();
            assert_eq!((cx, cz, rbs), (2 * (k - 1), 2, 1));

            let mut c = Circuit::new(j).unwrap();
            for g in gates {
                c.push(g).unwrap();
            }
            let bound = 2 * ((j - i) as f64).log2().ceil() as usize + 3;
            assert!(
                c.depth() <= bound,
                "depth {} > bound {bound} for ({i},{j})",
                c.depth()
            );
        }
    }

    #[test]
    fn json_shape_is_stable() {
        let mut c = Circuit::new(3).unwrap();
        c.fbs(1, 3, 0.5).unwrap();
        c.x(1).unwrap();
        let js = serde_json::to_string(&c).unwrap();
        assert_eq!(
            js,
            r#"{"n":3,"gates":[{"g":"FBS","q":[1,3],"theta":0.5},{"g":"X","q":[1]}]}"#
        );
        // Gate names are accepted case-insensitively on read.
        let lower = r#"{"n":3,"gates":[{"g":"fbs","q":[1,3],"theta":0.5},{"g":"x","q":[1]}]}"#;
        assert_eq!(serde_json::from_str::<Circuit>(lower).unwrap(), c);
    }

    #[test]
    fn deserialization_rejects_bad_wires() {
        let js = r#"{"n":3,"gates":[{"g":"rbs","q":[1,4],"theta":0.5}]}"#;
        assert!(serde_json::from_str::<Circuit>(js).is_err());
        let js = r#"{"n":3,"gates":[{"g":"spin","q":[1]}]}"#;
        assert!(serde_json::from_str::<Circuit>(js).is_err());
        let js = r#"{"n":3,"gates":[{"g":"rbs","q":[1,2]}]}"#;
        assert!(serde_json::from_str::<Circuit>(js).is_err());
    }

    fn arb_gate(n: usize) -> impl Strategy<Value = Gate> {
        let wire = 1..=n;
        prop_oneof![
            (1..=n, 1..=n, -3.0f64..3.0).prop_filter_map("distinct", |(i, j, t)| {
                (i != j).then(|| Gate::rbs(i, j, t).unwrap())
            }),
            (1..=n, 1..=n, -3.0f64..3.0).prop_filter_map("distinct", |(i, j, t)| {
                (i != j).then(|| Gate::fbs(i, j, t).unwrap())
            }),
            wire.clone().prop_map(|q| Gate::X { q }),
            wire.prop_map(|q| Gate::Z { q }),
            (1..=n, 1..=n).prop_filter_map("distinct", |(i, j)| {
                (i != j).then(|| Gate::cz(i, j).unwrap())
            }),
            (1..=n, 1..=n).prop_filter_map("distinct", |(c, t)| {
                (c != t).then(|| Gate::cx(c, t).unwrap())
            }),
        ]
    }

    proptest! {
        #[test]
        fn serde_round_trip(gates in prop::collection::vec(arb_gate(6), 0..40)) {
            let mut c = Circuit::new(6).unwrap();
            for g in gates {
                c.push(g).unwrap();
            }
            let js = serde_json::to_string(&c).unwrap();
            let back: Circuit = serde_json::from_str(&js).unwrap();
            prop_assert_eq!(c, back);
        }
    }
}
