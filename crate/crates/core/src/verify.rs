//! Named invariant checks backing the command-line `verify` subcommand.
//!
//! Each check exercises one cross-module identity (gate lowering, subspace
//! rotation, minor amplitudes, sampling fidelity, compound structure, phase
//! estimation, operator assembly) at a size bounded by `max_n`, and reports
//! a pass/fail row with the measured quantity in the detail string. All
//! randomness flows from the caller's seed.

use crate::circuit::{lower_fbs, Circuit, Gate};
use crate::detsample::{
    classical_dpp_sample, counts_vector, exact_distribution, method_stats, quantum_det_sample,
};
use crate::error::{Error, Result};
use crate::givens::{givens_matrix, pyramid_decompose, sine_cosine_decompose, GivensDecomposition};
use crate::linalg::{compound, subset_determinant};
use crate::loader::{gamma_dense, loader_circuit, loader_product_state, mapper, LoaderKind};
use crate::rng::TestMatrices;
use crate::simulator::{circuit_unitary, sector_matrix, SectorState, StateVector};
use crate::subsets::{enumerate_subsets, Subset};
use crate::sve::{
    compound_spectrum_check, orthogonal_eigendecomposition, principal_angles_oracle,
    rotation_embedding, subspace_sve, SectorUnitary,
};
use crate::tda::{
    betti_numbers, boundary_matrix, dirac_and_laplacian, embedding_check, SimplicialComplex,
};
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

/// One row of the verification table.
#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub suite: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Aligns `candidate` to `reference` up to one global sign: returns the
/// sign applied and the largest entrywise residual after alignment. The
/// sign is read off the largest-magnitude reference entry.
pub fn align_global_sign(reference: &[f64], candidate: &[f64]) -> (f64, f64) {
    let mut idx = 0;
    for (i, r) in reference.iter().enumerate() {
        if r.abs() > reference[idx].abs() {
            idx = i;
        }
    }
    let sign = if reference[idx] * candidate[idx] < 0.0 {
        -1.0
    } else {
        1.0
    };
    let resid = reference
        .iter()
        .zip(candidate)
        .map(|(r, c)| (r - sign * c).abs())
        .fold(0.0f64, f64::max);
    (sign, resid)
}

/// Dense matrix of one parity-signed rotation gate, built directly from its
/// definition (independent of the simulator).
fn fbs_definition_matrix(n: usize, i: usize, j: usize, theta: f64) -> DMatrix<f64> {
    let dim = 1usize << n;
    let (bi, bj) = (1u64 << (i - 1), 1u64 << (j - 1));
    let interior = ((1u64 << (j - 1)) - 1) & !((1u64 << i) - 1);
    let (sin, cos) = theta.sin_cos();
    let mut m = DMatrix::zeros(dim, dim);
    for col in 0..dim as u64 {
        if (col & bi != 0) == (col & bj != 0) {
            m[(col as usize, col as usize)] = 1.0;
        } else if col & bi != 0 {
            let partner = (col ^ bi ^ bj) as usize;
            let sg = if (col & interior).count_ones().is_multiple_of(2) {
                1.0
            } else {
                -1.0
            };
            m[(col as usize, col as usize)] = cos;
            m[(partner, col as usize)] = -sg * sin;
        } else {
            let partner = (col ^ bi ^ bj) as usize;
            let sg = if ((col ^ bi ^ bj) & interior).count_ones().is_multiple_of(2) {
                1.0
            } else {
                -1.0
            };
            m[(col as usize, col as usize)] = cos;
            m[(partner, col as usize)] = sg * sin;
        }
    }
    m
}

fn outcome(suite: &'static str, name: &'static str, passed: bool, detail: String) -> CheckOutcome {
    CheckOutcome {
        suite,
        name,
        passed,
        detail,
    }
}

fn check_fbs_lowering(max_n: usize, seed: u64) -> CheckOutcome {
    let mut gen = TestMatrices::new(seed ^ 0x11);
    let mut worst: f64 = 0.0;
    for n in 2..=max_n.min(6) {
        for i in 1..n {
            for j in i + 1..=n {
                for _ in 0..3 {
                    let theta = (gen.uniform() - 0.5) * 6.0;
                    let mut c = Circuit::new(n).unwrap();
                    for g in lower_fbs(i, j, theta) {
                        c.push(g).unwrap();
                    }
                    let dense = circuit_unitary(&c).unwrap();
                    let reference = fbs_definition_matrix(n, i, j, theta);
                    worst = worst.max((dense - reference).abs().max());
                }
            }
        }
    }
    outcome(
        "gates",
        "fbs-lowering-matches-definition",
        worst <= 1e-12,
        format!("max residual {worst:.3e} (tolerance 1e-12)"),
    )
}

fn check_weight_preservation(max_n: usize, seed: u64) -> CheckOutcome {
    let mut gen = TestMatrices::new(seed ^ 0x12);
    let n = max_n.clamp(3, 6);
    let mut worst: f64 = 0.0;
    for trial in 0..10 {
        let mut c = Circuit::new(n).unwrap();
        for _ in 0..12 {
            let i = 1 + (gen.uniform() * (n - 1) as f64) as usize;
            let j = i + 1 + (gen.uniform() * (n - i) as f64) as usize;
            let j = j.min(n);
            let theta = (gen.uniform() - 0.5) * 6.0;
            if gen.uniform() < 0.5 {
                c.rbs(i, j, theta).unwrap();
            } else {
                c.fbs(i, j, theta).unwrap();
            }
        }
        let d = 1 + trial % (n - 1);
        let start = enumerate_subsets(n, d)[0];
        let mut st = StateVector::basis(n, start.mask()).unwrap();
        st.apply_circuit(&c).unwrap();
        let (_, leak) = st.weight_projection(d).unwrap();
        worst = worst.max(leak);
    }
    outcome(
        "gates",
        "rotations-preserve-weight-sector",
        worst <= 1e-12,
        format!("max sector leak {worst:.3e}"),
    )
}

fn check_rotation_on_subspace_state(max_n: usize, seed: u64) -> CheckOutcome {
    let mut gen = TestMatrices::new(seed ^ 0x21);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for n in 2..=max_n.min(8) {
        for d in 1..=n {
            for _ in 0..3 {
                let frame = gen.frame(n, d);
                let i = 1 + (gen.uniform() * (n - 1) as f64) as usize;
                let j = (i + 1 + (gen.uniform() * (n - i) as f64) as usize).min(n);
                let theta = (gen.uniform() - 0.5) * 6.0;

                let mut state = SectorState::from_frame(&frame).unwrap();
                state.apply_gate(&Gate::fbs(i, j, theta).unwrap()).unwrap();

                let rotated = givens_matrix(n, i, j, theta) * frame.matrix();
                let target = SectorState::from_frame(
                    &crate::linalg::OrthonormalFrame::new(rotated).unwrap(),
                )
                .unwrap();
                let diff: f64 = state
                    .amplitudes()
                    .iter()
                    .zip(target.amplitudes())
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                worst = worst.max(diff);
                cases += 1;
            }
        }
    }
    outcome(
        "givens",
        "rotation-acts-on-subspace-state",
        worst <= 1e-10,
        format!("{cases} cases, max state distance {worst:.3e}"),
    )
}

fn decomposition_minor_residual(u: &DMatrix<f64>, dec: &GivensDecomposition) -> Result<f64> {
    let n = u.nrows();
    let circuit = dec.to_circuit()?;
    let mut worst: f64 = 0.0;
    for k in 1..=n {
        let action = sector_matrix(&circuit, k)?;
        let reference = compound(u, k)?;
        let subsets = enumerate_subsets(n, k);
        for (col, _) in subsets.iter().enumerate() {
            let got: Vec<f64> = (0..action.nrows()).map(|r| action[(r, col)]).collect();
            let want: Vec<f64> = (0..reference.nrows())
                .map(|r| reference[(r, col)])
                .collect();
            let (_, resid) = align_global_sign(&want, &got);
            worst = worst.max(resid);
        }
    }
    Ok(worst)
}

fn check_decomposition_minors(max_n: usize, seed: u64) -> CheckOutcome {
    let mut gen = TestMatrices::new(seed ^ 0x22);
    let mut worst: f64 = 0.0;
    for n in 2..=max_n.min(6) {
        let u = gen.orthogonal(n);
        let mut decs = vec![pyramid_decompose(&u)];
        if n.is_power_of_two() {
            decs.push(sine_cosine_decompose(&u));
        }
        for dec in decs {
            match dec.and_then(|d| decomposition_minor_residual(&u, &d)) {
                Ok(r) => worst = worst.max(r),
                Err(e) => {
                    return outcome(
                        "givens",
                        "decomposition-columns-are-minors",
                        false,
                        format!("error: {e}"),
                    )
                }
            }
        }
    }
    outcome(
        "givens",
        "decomposition-columns-are-minors",
        worst <= 1e-9,
        format!("max sign-aligned residual {worst:.3e}"),
    )
}

fn check_pyramid_counts(max_n: usize, seed: u64) -> CheckOutcome {
    let mut gen = TestMatrices::new(seed ^ 0x23);
    let mut ok = true;
    let mut detail = String::new();
    for n in 2..=max_n.min(10) {
        for d in 1..=n {
            let frame = gen.frame(n, d);
            let dec = match pyramid_decompose(frame.matrix()) {
                Ok(d) => d,
                Err(e) => {
                    return outcome(
                        "givens",
                        "pyramid-count-and-depth",
                        false,
                        format!("error: {e}"),
                    )
                }
            };
            let expected = (2 * n - 1 - d) * d / 2;
            if dec.rotation_count() != expected || dec.rotation_depth() > n + d {
                ok = false;
                detail = format!(
                    "n={n} d={d}: {} rotations (expected {expected}), depth {}",
                    dec.rotation_count(),
                    dec.rotation_depth()
                );
            }
        }
    }
    if detail.is_empty() {
        detail = "rotation count = (2n-1-d)d/2 everywhere, depth <= n+d".into();
    }
    outcome("givens", "pyramid-count-and-depth", ok, detail)
}

fn check_loader_reflection(max_n: usize, seed: u64) -> CheckOutcome {
    let mut gen = TestMatrices::new(seed ^ 0x31);
    let mut worst: f64 = 0.0;
    for n in [2usize, 4, 8] {
        if n > max_n.max(4) {
            continue;
        }
        for _ in 0..5 {
            let x = gen.unit_vector(n);
            let reference = gamma_dense(&x).unwrap();
            for kind in [LoaderKind::Linear, LoaderKind::Log] {
                let c = loader_circuit(&x, kind).unwrap();
                let dense = circuit_unitary(&c).unwrap();
                worst = worst.max((&dense - &reference).abs().max());
            }
        }
    }
    outcome(
        "loaders",
        "loader-equals-dense-reflection",
        worst <= 1e-11,
        format!("max unitary residual {worst:.3e}"),
    )
}

fn check_loader_product_minors(max_n: usize, seed: u64) -> CheckOutcome {
    let mut gen = TestMatrices::new(seed ^ 0x32);
    let mut worst: f64 = 0.0;
    let mut worst_leak: f64 = 0.0;
    for n in 2..=max_n.min(8) {
        for d in 1..=n {
            let frame = gen.frame(n, d);
            let state = match loader_product_state(&frame, LoaderKind::Linear) {
                Ok(s) => s,
                Err(e) => {
                    return outcome(
                        "loaders",
                        "loader-product-amplitudes-are-minors",
                        false,
                        format!("error: {e}"),
                    )
                }
            };
            let (sector, leak) = state.weight_projection(d).unwrap();
            worst_leak = worst_leak.max(leak);
            let subsets = enumerate_subsets(n, d);
            let want: Vec<f64> = subsets
                .iter()
                .map(|s| subset_determinant(frame.matrix(), s).unwrap())
                .collect();
            let (_, resid) = align_global_sign(&want, sector.amplitudes());
            worst = worst.max(resid);
        }
    }
    outcome(
        "loaders",
        "loader-product-amplitudes-are-minors",
        worst <= 1e-9 && worst_leak <= 1e-12,
        format!("max aligned residual {worst:.3e}, max off-sector mass {worst_leak:.3e}"),
    )
}

fn check_log_mapper_depth(max_n: usize, _seed: u64) -> CheckOutcome {
    let mut rows = Vec::new();
    let mut ok = true;
    for n in [4usize, 8] {
        if n > max_n.max(4) {
            continue;
        }
        let x = DVector::from_element(n, 1.0 / (n as f64).sqrt());
        let depth = mapper(&x, LoaderKind::Log).unwrap().depth();
        let formula = 4 * ((n as f64).log2() as usize - 1);
        // The measured depth may run one layer past the idealized formula
        // (parity tails serialize on one wire); more than that fails.
        if depth > formula + 1 {
            ok = false;
        }
        rows.push(format!(
            "n={n}: measured {depth}, formula {formula}{}",
            if depth == formula { "" } else { " (flagged)" }
        ));
    }
    outcome(
        "loaders",
        "log-mapper-depth-within-formula-allowance",
        ok,
        rows.join("; "),
    )
}

fn check_exact_distribution(max_n: usize, seed: u64) -> CheckOutcome {
    let mut gen = TestMatrices::new(seed ^ 0x41);
    let n = max_n.clamp(3, 8);
    let d = (n / 2).max(1);
    let a = gen.general(n, d);
    match exact_distribution(&a) {
        Ok(dist) => {
            let total: f64 = dist.probs().iter().sum();
            let renorm = (total - 1.0).abs();
            // Scaling columns must not change the normalized distribution.
            let scaled = &a * 3.0;
            let dist2 = exact_distribution(&scaled).unwrap();
            let drift = dist
                .probs()
                .iter()
                .zip(dist2.probs())
                .map(|(p, q)| (p - q).abs())
                .fold(0.0f64, f64::max);
            outcome(
                "sampling",
                "exact-distribution-normalized-and-scale-free",
                renorm <= 1e-12 && drift <= 1e-12,
                format!("normalization residual {renorm:.3e}, scale drift {drift:.3e}"),
            )
        }
        Err(e) => outcome(
            "sampling",
            "exact-distribution-normalized-and-scale-free",
            false,
            format!("error: {e}"),
        ),
    }
}

fn check_sampler(max_n: usize, seed: u64, quantum: bool) -> CheckOutcome {
    let name = if quantum {
        "quantum-sampler-matches-exact"
    } else {
        "classical-sampler-matches-exact"
    };
    let mut gen = TestMatrices::new(seed ^ if quantum { 0x43 } else { 0x42 });
    let n = max_n.clamp(4, 6);
    let d = 2;
    let frame = gen.frame(n, d);
    let dist = exact_distribution(frame.matrix()).unwrap();
    let shots = 20_000u64;
    let samples = if quantum {
        match quantum_det_sample(&frame, shots, seed ^ 0x5150, LoaderKind::Linear) {
            Ok(s) => s,
            Err(e) => return outcome("sampling", name, false, format!("error: {e}")),
        }
    } else {
        classical_dpp_sample(&frame, shots, seed ^ 0x5150)
    };
    let stats = method_stats(&dist, &counts_vector(n, d, &samples)).unwrap();
    outcome(
        "sampling",
        name,
        stats.tv_distance <= 0.03 && stats.p_value > 0.001,
        format!(
            "tv {:.4} (<= 0.03), chi-square p {:.4} (> 0.001) at {shots} shots",
            stats.tv_distance, stats.p_value
        ),
    )
}

fn check_sampling_determinism(max_n: usize, seed: u64) -> CheckOutcome {
    let mut gen = TestMatrices::new(seed ^ 0x44);
    let n = max_n.clamp(4, 6);
    let frame = gen.frame(n, 2);
    let a = classical_dpp_sample(&frame, 500, 777);
    let b = classical_dpp_sample(&frame, 500, 777);
    let c = classical_dpp_sample(&frame, 500, 778);
    outcome(
        "sampling",
        "seeded-sampling-reproducible",
        a == b && a != c,
        format!(
            "same seed identical: {}, different seed distinct: {}",
            a == b,
            a != c
        ),
    )
}

fn check_sector_compound(max_n: usize, seed: u64) -> CheckOutcome {
    let mut gen = TestMatrices::new(seed ^ 0x51);
    let mut worst: f64 = 0.0;
    for n in 2..=max_n.min(6) {
        let u = gen.orthogonal(n);
        let dec = pyramid_decompose(&u).unwrap();
        let circuit = dec.to_circuit().unwrap();
        for k in 1..=n {
            let su = match SectorUnitary::from_circuit(&circuit, k) {
                Ok(s) => s,
                Err(e) => {
                    return outcome(
                        "compound",
                        "sector-action-is-compound-matrix",
                        false,
                        format!("error: {e}"),
                    )
                }
            };
            let want = compound(&u, k).unwrap();
            // The circuit realizes U up to column signs absorbed in the sign
            // layer; the decomposition circuit includes them, so equality is
            // exact (no alignment).
            worst = worst.max((su.matrix() - &want).abs().max());
        }
    }
    outcome(
        "compound",
        "sector-action-is-compound-matrix",
        worst <= 1e-9,
        format!("max residual {worst:.3e}"),
    )
}

fn check_compound_multiplicative(max_n: usize, seed: u64) -> CheckOutcome {
    let mut gen = TestMatrices::new(seed ^ 0x52);
    let n = max_n.clamp(3, 6);
    let a = gen.general(n, n);
    let b = gen.general(n, n);
    let mut worst: f64 = 0.0;
    for k in 1..=n {
        let ab = compound(&(&a * &b), k).unwrap();
        let akbk = compound(&a, k).unwrap() * compound(&b, k).unwrap();
        worst = worst.max((ab - akbk).abs().max());
    }
    outcome(
        "compound",
        "compound-is-multiplicative",
        worst <= 1e-10,
        format!("max residual {worst:.3e}"),
    )
}

fn check_compound_spectrum(max_n: usize, seed: u64) -> CheckOutcome {
    let mut gen = TestMatrices::new(seed ^ 0x53);
    let n = max_n.clamp(4, 6);
    let u = gen.orthogonal(n);
    let mut worst: f64 = 0.0;
    for k in 1..=n.min(3) {
        match compound_spectrum_check(&u, k) {
            Ok(r) => worst = worst.max(r),
            Err(e) => {
                return outcome(
                    "compound",
                    "compound-eigenphases-are-sums",
                    false,
                    format!("error: {e}"),
                )
            }
        }
    }
    outcome(
        "compound",
        "compound-eigenphases-are-sums",
        worst <= 1e-8,
        format!("max eigenpair residual {worst:.3e}"),
    )
}

fn check_principal_angles(max_n: usize, seed: u64) -> CheckOutcome {
    let mut gen = TestMatrices::new(seed ^ 0x54);
    let n = max_n.clamp(4, 6);
    let p = gen.orthogonal(n);
    let q = gen.orthogonal(n);
    let i_set = Subset::from_elements(&[1, 2, 3], n).unwrap();
    let j_set = Subset::from_elements(&[2, 3, n], n).unwrap();
    match principal_angles_oracle(&p, &q, &i_set, &j_set, 2) {
        Ok(list) => outcome(
            "compound",
            "principal-angle-cosines-are-sigma-products",
            true,
            format!("{} subset angles cross-checked", list.len()),
        ),
        Err(e) => outcome(
            "compound",
            "principal-angle-cosines-are-sigma-products",
            false,
            format!("error: {e}"),
        ),
    }
}

fn check_phase_estimation(_max_n: usize, seed: u64) -> CheckOutcome {
    let mut gen = TestMatrices::new(seed ^ 0x61);
    let t = 8usize;
    let tol = 2.0 * 2.0 * std::f64::consts::PI / (1u64 << t) as f64;
    let runs = 20;
    let mut successes = 0;
    for run in 0..runs {
        let sigma1 = 0.2 + 0.78 * gen.uniform();
        let (sigma2, k) = if run % 2 == 0 {
            (1.0, 2) // product sigma1 * 1 over a weight-2 subset
        } else {
            (0.2 + 0.78 * gen.uniform(), 1) // singleton subsets
        };
        let a = DMatrix::from_row_slice(2, 2, &[sigma1, 0.0, 0.0, sigma2]);
        let u = rotation_embedding(&a).unwrap();
        let uk = SectorUnitary::from_orthogonal(&u, k).unwrap();
        let pairs = orthogonal_eigendecomposition(&u).unwrap();
        let target_product = if k == 2 { sigma1 * sigma2 } else { sigma1 };
        let want_phases: Vec<f64> = if k == 2 {
            vec![sigma1.acos(), sigma2.acos()]
        } else {
            vec![sigma1.acos()]
        };
        let mut frame = DMatrix::zeros(4, k);
        let mut used = Vec::new();
        for (c, target) in want_phases.iter().enumerate() {
            let (idx, (_, v)) = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| !used.contains(i))
                .min_by(|(_, (t1, _)), (_, (t2, _))| {
                    (t1 - target)
                        .abs()
                        .partial_cmp(&(t2 - target).abs())
                        .unwrap()
                })
                .unwrap();
            used.push(idx);
            for r in 0..4 {
                frame[(r, c)] = v[r];
            }
        }
        let input = crate::sve::complex_subspace_amplitudes(&frame).unwrap();
        let out = subspace_sve(&uk, &input, t, 1e-9).unwrap();
        let top = &out.outcomes[0];
        if (top.cos_theta() - target_product).abs() <= tol {
            successes += 1;
        }
    }
    outcome(
        "sve",
        "phase-estimate-cosine-matches-sigma-product",
        successes * 10 >= runs * 8,
        format!("{successes}/{runs} runs within 2 * 2pi/2^{t}"),
    )
}

fn check_boundary_squares(max_n: usize, seed: u64) -> CheckOutcome {
    let mut gen = TestMatrices::new(seed ^ 0x71);
    let mut ok = true;
    for trial in 0..20 {
        let n = 3 + (trial % max_n.clamp(3, 8));
        let mask_count = 1 + (gen.uniform() * (n + 2) as f64) as usize;
        let simplices: Vec<Vec<usize>> = (0..mask_count)
            .map(|_| {
                let mask = 1 + (gen.uniform() * ((1u64 << n) - 1) as f64) as u64;
                (0..n)
                    .filter(|b| mask >> b & 1 == 1)
                    .map(|b| b + 1)
                    .collect()
            })
            .collect();
        let c = SimplicialComplex::explicit(n, &simplices, true).unwrap();
        if !boundary_matrix(&c).squares_to_zero() {
            ok = false;
        }
    }
    outcome(
        "tda",
        "boundary-squares-to-zero",
        ok,
        "20 random downward-closed complexes, exact integer check".into(),
    )
}

fn check_laplacian_rules(max_n: usize, seed: u64) -> CheckOutcome {
    let mut gen = TestMatrices::new(seed ^ 0x72);
    let mut offdiag: Vec<i64> = Vec::new();
    for trial in 0..10 {
        let n = 3 + (trial % max_n.clamp(3, 8));
        let mask_count = 1 + (gen.uniform() * (n + 2) as f64) as usize;
        let simplices: Vec<Vec<usize>> = (0..mask_count)
            .map(|_| {
                let mask = 1 + (gen.uniform() * ((1u64 << n) - 1) as f64) as u64;
                (0..n)
                    .filter(|b| mask >> b & 1 == 1)
                    .map(|b| b + 1)
                    .collect()
            })
            .collect();
        let c = SimplicialComplex::explicit(n, &simplices, true).unwrap();
        match dirac_and_laplacian(&c) {
            // The diagonal rule is validated inside assembly; collect the
            // off-diagonal values for the recorded range check.
            Ok((_, lap)) => offdiag.extend(lap.offdiagonal_values),
            Err(e) => {
                return outcome(
                    "tda",
                    "laplacian-diagonal-and-offdiagonal-rules",
                    false,
                    format!("error: {e}"),
                )
            }
        }
    }
    offdiag.sort_unstable();
    offdiag.dedup();
    let in_range = offdiag.iter().all(|v| [-2, -1, 0, 1, 2].contains(v));
    outcome(
        "tda",
        "laplacian-diagonal-and-offdiagonal-rules",
        in_range,
        format!("off-diagonal values seen: {offdiag:?}"),
    )
}

fn check_embedding(max_n: usize, seed: u64) -> CheckOutcome {
    let mut gen = TestMatrices::new(seed ^ 0x73);
    let mut worst: f64 = 0.0;
    for trial in 0..10 {
        let n = 3 + (trial % max_n.clamp(3, 10));
        let mask_count = 1 + (gen.uniform() * (n + 2) as f64) as usize;
        let simplices: Vec<Vec<usize>> = (0..mask_count)
            .map(|_| {
                let mask = 1 + (gen.uniform() * ((1u64 << n) - 1) as f64) as u64;
                (0..n)
                    .filter(|b| mask >> b & 1 == 1)
                    .map(|b| b + 1)
                    .collect()
            })
            .collect();
        let c = SimplicialComplex::explicit(n, &simplices, true).unwrap();
        match embedding_check(&c) {
            Ok(r) => worst = worst.max(r),
            Err(e) => {
                return outcome(
                    "tda",
                    "operator-is-reflection-submatrix",
                    false,
                    format!("error: {e}"),
                )
            }
        }
    }
    outcome(
        "tda",
        "operator-is-reflection-submatrix",
        worst <= 1e-12,
        format!("max entrywise residual {worst:.3e}"),
    )
}

fn check_betti(_max_n: usize, _seed: u64) -> CheckOutcome {
    let complete3 = betti_numbers(&SimplicialComplex::complete(3).unwrap()).unwrap();
    let hollow = betti_numbers(
        &SimplicialComplex::explicit(3, &[vec![1, 2], vec![1, 3], vec![2, 3]], true).unwrap(),
    )
    .unwrap();
    let two_edges =
        betti_numbers(&SimplicialComplex::explicit(4, &[vec![1, 2], vec![3, 4]], true).unwrap())
            .unwrap();
    let ok = complete3.betti == vec![1, 0, 0]
        && hollow.betti == vec![1, 1]
        && two_edges.betti == vec![2, 0];
    outcome(
        "tda",
        "betti-numbers-of-known-complexes",
        ok,
        format!(
            "complete(3) {:?}, hollow triangle {:?}, two edges {:?}",
            complete3.betti, hollow.betti, two_edges.betti
        ),
    )
}

/// Suites accepted by [`run_suite`], besides `all`.
pub const SUITES: &[&str] = &[
    "gates", "givens", "loaders", "sampling", "compound", "sve", "tda",
];

/// Runs one named suite (or `all`) at the given size bound and seed.
pub fn run_suite(suite: &str, max_n: usize, seed: u64) -> Result<Vec<CheckOutcome>> {
    if max_n < 2 {
        return Err(Error::InvalidArgument(format!(
            "max-n must be at least 2, got {max_n}"
        )));
    }
    type Check = (&'static str, fn(usize, u64) -> CheckOutcome);
    let checks: Vec<Check> = vec![
        ("gates", check_fbs_lowering),
        ("gates", check_weight_preservation),
        ("givens", check_rotation_on_subspace_state),
        ("givens", check_decomposition_minors),
        ("givens", check_pyramid_counts),
        ("loaders", check_loader_reflection),
        ("loaders", check_loader_product_minors),
        ("loaders", check_log_mapper_depth),
        ("sampling", check_exact_distribution),
        ("sampling", |n, s| check_sampler(n, s, false)),
        ("sampling", |n, s| check_sampler(n, s, true)),
        ("sampling", check_sampling_determinism),
        ("compound", check_sector_compound),
        ("compound", check_compound_multiplicative),
        ("compound", check_compound_spectrum),
        ("compound", check_principal_angles),
        ("sve", check_phase_estimation),
        ("tda", check_boundary_squares),
        ("tda", check_laplacian_rules),
        ("tda", check_embedding),
        ("tda", check_betti),
    ];
    if suite != "all" && !SUITES.contains(&suite) {
        return Err(Error::InvalidArgument(format!(
            "unknown suite '{suite}' (available: all, {})",
            SUITES.join(", ")
        )));
    }
    Ok(checks
        .into_iter()
        .filter(|(s, _)| suite == "all" || *s == suite)
        .map(|(_, f)| f(max_n, seed))
        .collect())
}

/// Formats outcomes as a fixed-width text table.
pub fn format_table(rows: &[CheckOutcome]) -> String {
    let name_w = rows.iter().map(|r| r.name.len()).max().unwrap_or(4).max(4);
    let mut out = String::new();
    out.push_str(&format!(
        "{:<8} {:<name_w$} {:<6} detail\n",
        "suite", "check", "result"
    ));
    for r in rows {
        out.push_str(&format!(
            "{:<8} {:<name_w$} {:<6} {}\n",
            r.suite,
            r.name,
            if r.passed { "pass" } else { "FAIL" },
            r.detail
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_alignment_flips_and_measures() {
        let reference = [0.3, -0.8, 0.1];
        let flipped = [-0.3, 0.8, -0.1];
        let (sign, resid) = align_global_sign(&reference, &flipped);
        assert_eq!(sign, -1.0);
        assert!(resid < 1e-15);
        let (sign2, resid2) = align_global_sign(&reference, &[0.3, -0.8, 0.2]);
        assert_eq!(sign2, 1.0);
        assert!((resid2 - 0.1).abs() < 1e-12);
    }

    #[test]
    fn fbs_definition_matrix_is_orthogonal() {
        let m = fbs_definition_matrix(4, 1, 3, 0.7);
        let dim = m.nrows();
        assert!(
            (&m * m.transpose() - DMatrix::<f64>::identity(dim, dim))
                .abs()
                .max()
                < 1e-12
        );
    }

    #[test]
    fn full_suite_passes_at_small_scale() {
        let rows = run_suite("all", 4, 20260814).unwrap();
        assert_eq!(rows.len(), 21);
        for r in &rows {
            assert!(r.passed, "{} failed: {}", r.name, r.detail);
        }
        let table = format_table(&rows);
        assert!(table.contains("pass"));
        assert!(!table.contains("FAIL"));
    }

    #[test]
    fn single_suite_filters_rows() {
        let rows = run_suite("tda", 4, 7).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r.suite == "tda"));
        assert!(run_suite("nope", 4, 7).is_err());
    }
}
