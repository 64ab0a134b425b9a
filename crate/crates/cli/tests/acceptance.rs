//! End-to-end acceptance gate for the workspace. Each test checks one
//! shipping criterion at its stated tolerance and prints exactly one
//! `[acceptance] NN name: pass|FAIL (detail)` line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines
//! for passing criteria as well.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use nalgebra::{Complex, DMatrix};
use rayon::prelude::*;
use subspace_core::circuit::Circuit;
use subspace_core::detsample::{
    classical_dpp_sample, counts_vector, exact_distribution, method_stats, quantum_det_sample,
};
use subspace_core::givens::{givens_matrix, pyramid_decompose, sine_cosine_decompose};
use subspace_core::linalg::{compound, OrthonormalFrame};
use subspace_core::loader::{gamma_dense, loader_circuit, loader_product_state, LoaderKind};
use subspace_core::rng::TestMatrices;
use subspace_core::simulator::{circuit_unitary, sector_matrix, SectorState};
use subspace_core::sve::{
    complex_subspace_amplitudes, orthogonal_eigendecomposition, rotation_embedding, subspace_sve,
    SectorUnitary,
};
use subspace_core::tda::{
    betti_numbers, boundary_matrix, dirac_and_laplacian, embedding_check,
    loader_block_encoding_depth, SimplicialComplex,
};
use subspace_core::verify::align_global_sign;

/// Prints the single pass/fail line for a criterion, then enforces it.
fn criterion(num: u32, name: &str, ok: bool, detail: &str) {
    let status = if ok { "pass" } else { "FAIL" };
    println!("[acceptance] {num:02} {name}: {status} ({detail})");
    assert!(ok, "criterion {num:02} {name} failed: {detail}");
}

/// Dense matrix of the parity-signed two-level rotation, written out directly
/// from its definition: it rotates each |..1_i..0_j..>, |..0_i..1_j..> pair
/// by theta, with the rotation direction flipped when an odd number of bits
/// strictly between wires i and j are set, and fixes every other basis state.
fn fbs_reference(n: usize, i: usize, j: usize, theta: f64) -> DMatrix<f64> {
    let dim = 1usize << n;
    let (bi, bj) = (1u64 << (i - 1), 1u64 << (j - 1));
    let interior = ((1u64 << (j - 1)) - 1) & !((1u64 << i) - 1);
    let (sin, cos) = theta.sin_cos();
    let mut m = DMatrix::zeros(dim, dim);
    for col in 0..dim as u64 {
        let has_i = col & bi != 0;
        let has_j = col & bj != 0;
        if has_i == has_j {
            m[(col as usize, col as usize)] = 1.0;
            continue;
        }
        // The interior bits agree on both members of the pair, so the sign is
        // read off the member that has wire i set.
        let with_i = if has_i { col } else { col ^ bi ^ bj };
        let sign = if (with_i & interior).count_ones().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        m[(col as usize, col as usize)] = cos;
        let partner = (col ^ bi ^ bj) as usize;
        if has_i {
            m[(partner, col as usize)] = -sign * sin;
        } else {
            m[(partner, col as usize)] = sign * sin;
        }
    }
    m
}

#[test]
fn acceptance_01_fbs_lowering_matches_definition() {
    let start = Instant::now();
    let mut gen = TestMatrices::new(11);
    let mut cases: Vec<(usize, usize, usize, f64)> = Vec::new();
    for n in 2..=8usize {
        for i in 1..n {
            for j in i + 1..=n {
                for _ in 0..20 {
                    cases.push((n, i, j, (gen.uniform() - 0.5) * 4.0 * PI));
                }
            }
        }
    }
    let worst = cases
        .par_iter()
        .map(|&(n, i, j, theta)| {
            let mut c = Circuit::new(n).unwrap();
            c.fbs(i, j, theta).unwrap();
            let lowered = c.lowered();
            assert!(
                lowered.gates().iter().all(|g| g.name() != "fbs"),
                "lowering left a composite gate in place"
            );
            let dense = circuit_unitary(&lowered).unwrap();
            (dense - fbs_reference(n, i, j, theta)).abs().max()
        })
        .reduce(|| 0.0f64, f64::max);
    let secs = start.elapsed().as_secs_f64();
    criterion(
        1,
        "fbs-lowering-matches-definition",
        worst <= 1e-12 && secs < 30.0,
        &format!(
            "{} cases (n<=8, all i<j, 20 angles), max residual {worst:.3e} <= 1e-12, {secs:.1}s < 30s",
            cases.len()
        ),
    );
}

#[test]
fn acceptance_02_rotation_acts_on_subspace_states() {
    let start = Instant::now();
    let mut gen = TestMatrices::new(22);
    let mut worst = 0.0f64;
    let mut cases = 0usize;
    while cases < 100 {
        for n in 2..=8usize {
            for d in 1..=n {
                if cases >= 100 {
                    break;
                }
                let frame = gen.frame(n, d);
                let i = 1 + (gen.uniform() * (n - 1) as f64) as usize;
                let j = (i + 1 + (gen.uniform() * (n - i) as f64) as usize).min(n);
                let theta = (gen.uniform() - 0.5) * 6.0;

                let mut state = SectorState::from_frame(&frame).unwrap();
                state
                    .apply_gate(&subspace_core::circuit::Gate::fbs(i, j, theta).unwrap())
                    .unwrap();

                let rotated = givens_matrix(n, i, j, theta) * frame.matrix();
                let target =
                    SectorState::from_frame(&OrthonormalFrame::new(rotated).unwrap()).unwrap();
                let dist: f64 = state
                    .amplitudes()
                    .iter()
                    .zip(target.amplitudes())
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                worst = worst.max(dist);
                cases += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    criterion(
        2,
        "rotation-acts-on-subspace-states",
        worst <= 1e-10 && secs < 60.0,
        &format!("{cases} random (X,i,j,theta), max state distance {worst:.3e} <= 1e-10, {secs:.1}s < 60s"),
    );
}

#[test]
fn acceptance_03_decomposition_prepares_minor_amplitudes() {
    let start = Instant::now();
    let mut gen = TestMatrices::new(33);
    let mut worst = 0.0f64;
    let mut columns = 0usize;
    for n in 2..=6usize {
        for _ in 0..2 {
            let u = gen.orthogonal(n);
            let mut circuits = vec![pyramid_decompose(&u).unwrap().to_circuit().unwrap()];
            if n.is_power_of_two() {
                circuits.push(sine_cosine_decompose(&u).unwrap().to_circuit().unwrap());
            }
            for c in &circuits {
                for d in 1..=n {
                    let sector = sector_matrix(c, d).unwrap();
                    let minors = compound(&u, d).unwrap();
                    for s in 0..sector.ncols() {
                        let reference: Vec<f64> = minors.column(s).iter().copied().collect();
                        let candidate: Vec<f64> = sector.column(s).iter().copied().collect();
                        let (_, resid) = align_global_sign(&reference, &candidate);
                        worst = worst.max(resid);
                        columns += 1;
                    }
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    criterion(
        3,
        "decomposition-prepares-minor-amplitudes",
        worst <= 1e-9 && secs < 60.0,
        &format!(
            "{columns} prepared states (pyramid all n<=6, sine-cosine n in {{2,4}}, every start subset), \
             max sign-aligned residual {worst:.3e} <= 1e-9, {secs:.1}s < 60s"
        ),
    );
}

#[test]
fn acceptance_04_pyramid_gate_count_and_depth() {
    let mut gen = TestMatrices::new(44);
    let mut checked = 0usize;
    let mut count_ok = true;
    let mut depth_ok = true;
    let mut adjacency_ok = true;
    for n in 2..=10usize {
        for d in 1..=n {
            let frame = gen.frame(n, d);
            let dec = pyramid_decompose(frame.matrix()).unwrap();
            // The free-parameter count of an n x d orthonormal frame:
            // nd - d(d+1)/2 = (2n - 1 - d) d / 2 rotations, one per parameter.
            let expected = (2 * n - 1 - d) * d / 2;
            if dec.rotation_count() != expected {
                count_ok = false;
            }
            if dec.rotation_depth() > n + d {
                depth_ok = false;
            }
            if dec.rotations().iter().any(|r| r.j != r.i + 1) {
                adjacency_ok = false;
            }
            checked += 1;
        }
    }
    criterion(
        4,
        "pyramid-gate-count-and-depth",
        count_ok && depth_ok && adjacency_ok,
        &format!(
            "{checked} random frames n<=10: rotation count == (2n-1-d)d/2 (the frame's \
             free-parameter count: {count_ok}), depth <= n+d ({depth_ok}), all rotations adjacent ({adjacency_ok})"
        ),
    );
}

#[test]
fn acceptance_05_loader_unitaries_match_reflection_and_depth() {
    let mut gen = TestMatrices::new(55);
    let mut worst = 0.0f64;
    let mut cases = 0usize;
    for n in [2usize, 4, 8] {
        for _ in 0..20 {
            let x = gen.unit_vector(n);
            let reference = gamma_dense(&x).unwrap();
            for kind in [LoaderKind::Linear, LoaderKind::Log] {
                let c = loader_circuit(&x, kind).unwrap();
                let dense = circuit_unitary(&c).unwrap();
                worst = worst.max((&dense - &reference).abs().max());
                cases += 1;
            }
        }
    }

    // Shallow-loader depth: the closed form 4(log2 n - 1) must either hold or
    // the measured depth must be reported alongside it with a mismatch flag.
    let mut depth_detail = String::new();
    let mut depth_ok = true;
    for n in [4usize, 8] {
        let r = loader_block_encoding_depth(n).unwrap();
        let formula = 4 * (n.trailing_zeros() as usize - 1);
        if r.formula_mapper_depth != formula {
            depth_ok = false;
        }
        if r.matches_formula {
            if r.mapper_depth != formula {
                depth_ok = false;
            }
            depth_detail.push_str(&format!("n={n}: depth {} == closed form; ", r.mapper_depth));
        } else {
            // The discrepancy path: both values present and genuinely different.
            if r.mapper_depth == r.formula_mapper_depth {
                depth_ok = false;
            }
            depth_detail.push_str(&format!(
                "n={n}: measured depth {} recorded with flag vs closed form {}; ",
                r.mapper_depth, r.formula_mapper_depth
            ));
        }
    }
    criterion(
        5,
        "loader-unitaries-match-reflection-and-depth",
        worst <= 1e-11 && depth_ok,
        &format!(
            "{cases} loader circuits (n in {{2,4,8}}, 20 unit vectors, both modes), \
             max dense residual {worst:.3e} <= 1e-11; {depth_detail}"
        ),
    );
}

#[test]
fn acceptance_06_loader_product_amplitudes_are_minors() {
    let mut gen = TestMatrices::new(66);
    let mut worst = 0.0f64;
    let mut worst_leak = 0.0f64;
    for trial in 0..50usize {
        let n = 2 + trial % 7; // 2..=8
        let d = 1 + trial % n;
        let frame = gen.frame(n, d);
        let kind = if trial % 2 == 1 && n.is_power_of_two() {
            LoaderKind::Log
        } else {
            LoaderKind::Linear
        };
        let state = loader_product_state(&frame, kind).unwrap();
        let (sector, leak) = state.weight_projection(d).unwrap();
        let minors = SectorState::from_frame(&frame).unwrap();
        let (_, resid) = align_global_sign(minors.amplitudes(), sector.amplitudes());
        worst = worst.max(resid);
        worst_leak = worst_leak.max(leak);
    }
    criterion(
        6,
        "loader-product-amplitudes-are-minors",
        worst <= 1e-9 && worst_leak <= 1e-18,
        &format!(
            "50 random frames n<=8: max sign-aligned amplitude residual {worst:.3e} <= 1e-9, \
             max mass outside the weight sector {worst_leak:.3e} <= 1e-18"
        ),
    );
}

#[test]
fn acceptance_07_samplers_match_exact_distribution() {
    let start = Instant::now();
    let (n, d, shots) = (8usize, 3usize, 100_000u64);
    let mut gen = TestMatrices::new(77);
    let frame = gen.frame(n, d);
    let dist = exact_distribution(frame.matrix()).unwrap();

    let classical = classical_dpp_sample(&frame, shots, 7001);
    let c_stats = method_stats(&dist, &counts_vector(n, d, &classical)).unwrap();

    let quantum = quantum_det_sample(&frame, shots, 7002, LoaderKind::Linear).unwrap();
    let q_stats = method_stats(&dist, &counts_vector(n, d, &quantum)).unwrap();

    let secs = start.elapsed().as_secs_f64();
    let ok = c_stats.tv_distance <= 0.015
        && c_stats.p_value > 0.001
        && q_stats.tv_distance <= 0.015
        && q_stats.p_value > 0.001
        && secs < 300.0;
    criterion(
        7,
        "samplers-match-exact-distribution",
        ok,
        &format!(
            "n=8 d=3, 1e5 shots each: row-subset sampler TV {:.4} p {:.3}, \
             simulated-circuit sampler TV {:.4} p {:.3} (need TV <= 0.015, p > 0.001), {secs:.1}s < 300s",
            c_stats.tv_distance, c_stats.p_value, q_stats.tv_distance, q_stats.p_value
        ),
    );
}

#[test]
fn acceptance_08_sector_action_is_compound_and_multiplicative() {
    let mut gen = TestMatrices::new(88);
    let mut worst_sector = 0.0f64;
    let mut worst_mult = 0.0f64;
    for n in 2..=6usize {
        let u = gen.orthogonal(n);
        let c = pyramid_decompose(&u).unwrap().to_circuit().unwrap();
        for k in 1..=n {
            let sector = sector_matrix(&c, k).unwrap();
            let uk = compound(&u, k).unwrap();
            worst_sector = worst_sector.max((sector - uk).abs().max());
        }
        let a = gen.general(n, n);
        let b = gen.general(n, n);
        let ab = &a * &b;
        for k in 1..=n {
            let lhs = compound(&ab, k).unwrap();
            let rhs = compound(&a, k).unwrap() * compound(&b, k).unwrap();
            worst_mult = worst_mult.max((lhs - rhs).abs().max());
        }
    }
    criterion(
        8,
        "sector-action-is-compound-and-multiplicative",
        worst_sector <= 1e-9 && worst_mult <= 1e-10,
        &format!(
            "n<=6, all k: max |sector(circuit) - minor matrix| {worst_sector:.3e} <= 1e-9, \
             max |(AB)^k - A^k B^k| {worst_mult:.3e} <= 1e-10"
        ),
    );
}

#[test]
fn acceptance_09_phase_estimation_reads_sigma_products() {
    let mut gen = TestMatrices::new(99);
    let t = 8usize;
    let tol = 2.0 * 2.0 * PI / (1u64 << t) as f64;
    let runs = 100usize;
    let mut successes = 0usize;
    for run in 0..runs {
        let sigma1 = 0.2 + 0.78 * gen.uniform();
        let (sigma2, k) = if run % 2 == 0 {
            (1.0, 2) // product sigma1 * 1 over the weight-2 subset
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
        // Assemble the eigenvector frame whose subspace state carries the
        // summed phase, one distinct eigenvector per wanted phase.
        let mut frame: DMatrix<Complex<f64>> = DMatrix::zeros(4, k);
        let mut used: Vec<usize> = Vec::new();
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
        let input = complex_subspace_amplitudes(&frame).unwrap();
        let out = subspace_sve(&uk, &input, t, 1e-9).unwrap();
        let top = &out.outcomes[0];
        if (top.cos_theta() - target_product).abs() <= tol {
            successes += 1;
        }
    }
    criterion(
        9,
        "phase-estimation-reads-sigma-products",
        successes * 10 >= runs * 8,
        &format!(
            "{successes}/{runs} runs with |cos(theta_top) - prod sigma| <= 2*2pi/2^{t} \
             on 4x4 embeddings with known singular values (need >= 80%)"
        ),
    );
}

#[test]
fn acceptance_10_boundary_dirac_laplacian_betti() {
    let mut gen = TestMatrices::new(1010);
    let mut squares = true;
    let mut laplacian_rules = true;
    let mut worst_embed = 0.0f64;
    for trial in 0..20usize {
        let n = 3 + trial % 8; // 3..=10
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
            squares = false;
        }
        // Construction validates diagonal = cardinality + external-extension
        // count on every basis element and fails loudly otherwise.
        if dirac_and_laplacian(&c).is_err() {
            laplacian_rules = false;
        }
        worst_embed = worst_embed.max(embedding_check(&c).unwrap());
    }

    let hollow =
        SimplicialComplex::explicit(3, &[vec![1, 2], vec![1, 3], vec![2, 3]], true).unwrap();
    let hollow_betti = betti_numbers(&hollow).unwrap().betti;
    let full = SimplicialComplex::complete(3).unwrap();
    let full_betti = betti_numbers(&full).unwrap().betti;

    let ok = squares
        && laplacian_rules
        && worst_embed <= 1e-12
        && hollow_betti == vec![1, 1]
        && full_betti == vec![1, 0, 0];
    criterion(
        10,
        "boundary-dirac-laplacian-betti",
        ok,
        &format!(
            "20 random complexes n<=10: boundary squares to zero exactly ({squares}), \
             Laplacian diagonal rule holds ({laplacian_rules}), max reflection-submatrix \
             residual {worst_embed:.3e} <= 1e-12; hollow triangle Betti {hollow_betti:?} == [1, 1], \
             full triangle Betti {full_betti:?} == [1, 0, 0]"
        ),
    );
}

/// Runs the shipped binary with the given arguments and returns the report,
/// with the wall-clock `timing` section removed and the rest re-serialized
/// canonically (object keys are emitted in sorted order).
fn run_binary_report(args: &[&str], out: &PathBuf) -> String {
    let status = Command::new(env!("CARGO_BIN_EXE_subspace"))
        .args(args)
        .status()
        .expect("binary runs");
    assert!(status.success(), "binary exited nonzero for {args:?}");
    let text = std::fs::read_to_string(out).expect("report written");
    let mut value: serde_json::Value = serde_json::from_str(&text).expect("report parses");
    let map = value.as_object_mut().expect("report is an object");
    assert!(
        map.remove("timing").is_some(),
        "report carries a timing key"
    );
    serde_json::to_string(&value).expect("report re-serializes")
}

#[test]
fn acceptance_11_cli_reports_are_deterministic() {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    std::fs::create_dir_all(&dir).unwrap();

    let mut gen = TestMatrices::new(1111);
    let frame_path = dir.join("determinism_frame.txt");
    subspace_core::io::write_matrix(&frame_path, gen.frame(6, 2).matrix()).unwrap();
    let square_path = dir.join("determinism_square.txt");
    subspace_core::io::write_matrix(
        &square_path,
        &DMatrix::from_row_slice(2, 2, &[0.9, 0.0, 0.0, 0.5]),
    )
    .unwrap();

    let mut checked = 0usize;
    for (name, args) in [
        (
            "detsample",
            vec![
                "detsample",
                "--matrix",
                frame_path.to_str().unwrap(),
                "--shots",
                "40000",
                "--seed",
                "5",
            ],
        ),
        (
            "sve",
            vec![
                "sve",
                "--matrix",
                square_path.to_str().unwrap(),
                "--k",
                "2",
                "--bits",
                "6",
                "--shots",
                "20000",
                "--seed",
                "3",
            ],
        ),
        (
            "verify",
            vec![
                "verify", "--suite", "sampling", "--max-n", "4", "--seed", "2",
            ],
        ),
    ] {
        let out = dir.join(format!("determinism_{name}.json"));
        let out_str = out.to_str().unwrap().to_owned();
        let mut full: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        full.extend(["--out".to_owned(), out_str]);

        let with = |threads: &str| {
            let mut v = vec!["--threads".to_owned(), threads.to_owned()];
            v.extend(full.iter().cloned());
            v
        };
        let one_owned = with("1");
        let four_owned = with("4");
        let one: Vec<&str> = one_owned.iter().map(String::as_str).collect();
        let four: Vec<&str> = four_owned.iter().map(String::as_str).collect();

        let first = run_binary_report(&one, &out);
        let rerun = run_binary_report(&one, &out);
        let threaded = run_binary_report(&four, &out);
        assert_eq!(first, rerun, "{name}: re-execution changed the report");
        assert_eq!(first, threaded, "{name}: thread count changed the report");
        checked += 1;
    }
    criterion(
        11,
        "cli-reports-are-deterministic",
        checked == 3,
        "detsample, sve, and verify reports byte-identical across re-execution \
         and --threads 1 vs 4 (wall-clock timing key excluded)",
    );
}
