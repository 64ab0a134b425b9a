//! Dense-size caps.
//!
//! Dense statevectors, unitaries, and compound matrices grow combinatorially;
//! these caps bound each entry point at desk scale. Every cap can be raised or
//! lowered through an environment variable so callers can trade memory for
//! reach without recompiling.

use crate::error::{Error, Result};

/// Max qubits for a dense `2^n` statevector.
pub const MAX_DENSE_QUBITS: usize = 20;
/// Max qubits for materializing a dense `2^n x 2^n` circuit unitary.
pub const MAX_UNITARY_QUBITS: usize = 12;
/// Max qubits for the dense Clifford reflection matrix.
pub const MAX_GAMMA_QUBITS: usize = 12;
/// Max qubits for the quantum (dense statevector) sampling route.
pub const MAX_QUANTUM_SAMPLE_QUBITS: usize = 14;
/// Max sector dimension `C(n,d)` for fixed-weight simulation.
pub const MAX_SECTOR_DIM: u64 = 1_000_000;
/// Max dimension for a dense compound matrix.
pub const MAX_COMPOUND_DIM: u64 = 5_000;
/// Max sector dimension for phase estimation.
pub const MAX_SVE_DIM: u64 = 2_000;
/// Max ancilla bits for phase estimation.
pub const MAX_SVE_BITS: usize = 12;

fn env_override(var: &str, default: u64) -> u64 {
    std::env::var(var)
        .ok()
        .and_then(|v| v.parse::<u64>().ok())
        .unwrap_or(default)
}

/// Checks `value <= cap`, where the cap defaults to `default` and may be
/// overridden by the environment variable `var`.
pub fn check(what: &str, value: u64, default: u64, var: &str) -> Result<()> {
    let cap = env_override(var, default);
    if value > cap {
        return Err(Error::ResourceLimit(format!(
            "{what} = {value} exceeds cap {cap} (override with {var})"
        )));
    }
    Ok(())
}

/// Cap check for dense statevector allocation.
pub fn check_dense_qubits(n: usize) -> Result<()> {
    check(
        "dense statevector qubits",
        n as u64,
        MAX_DENSE_QUBITS as u64,
        "SUBSPACE_MAX_DENSE_QUBITS",
    )
}

/// Cap check for dense unitary materialization.
pub fn check_unitary_qubits(n: usize) -> Result<()> {
    check(
        "dense unitary qubits",
        n as u64,
        MAX_UNITARY_QUBITS as u64,
        "SUBSPACE_MAX_UNITARY_QUBITS",
    )
}

/// Cap check for the dense Clifford reflection.
pub fn check_gamma_qubits(n: usize) -> Result<()> {
    check(
        "dense reflection qubits",
        n as u64,
        MAX_GAMMA_QUBITS as u64,
        "SUBSPACE_MAX_GAMMA_QUBITS",
    )
}

/// Cap check for the dense quantum sampling route.
pub fn check_quantum_sample_qubits(n: usize) -> Result<()> {
    check(
        "quantum sampling qubits",
        n as u64,
        MAX_QUANTUM_SAMPLE_QUBITS as u64,
        "SUBSPACE_MAX_QUANTUM_SAMPLE_QUBITS",
    )
}

/// Cap check for sector dimension `C(n,d)`.
pub fn check_sector_dim(dim: u64) -> Result<()> {
    check(
        "sector dimension",
        dim,
        MAX_SECTOR_DIM,
        "SUBSPACE_MAX_SECTOR_DIM",
    )
}

/// Cap check for compound-matrix dimension.
pub fn check_compound_dim(dim: u64) -> Result<()> {
    check(
        "compound dimension",
        dim,
        MAX_COMPOUND_DIM,
        "SUBSPACE_MAX_COMPOUND_DIM",
    )
}

/// Cap checks for phase estimation (sector dimension and ancilla bits).
pub fn check_sve(dim: u64, bits: usize) -> Result<()> {
    check(
        "sve sector dimension",
        dim,
        MAX_SVE_DIM,
        "SUBSPACE_MAX_SVE_DIM",
    )?;
    check(
        "sve ancilla bits",
        bits as u64,
        MAX_SVE_BITS as u64,
        "SUBSPACE_MAX_SVE_BITS",
    )
}
