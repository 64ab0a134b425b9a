//! Command-line driver: seeded, reproducible runs over the subspace-state
//! toolkit with versioned JSON reports.
//!
//! Every run emits `{"schema": 1, "config": ..., "results": ..., "timing": ...}`.
//! The config echoes the parsed arguments verbatim; all wall-clock numbers
//! live under the `timing` key so that reports are byte-identical across
//! re-runs and thread counts once that key is dropped. Exit codes: 0 on
//! success, 1 with a machine-readable error JSON on failure, 2 on usage
//! errors.

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::{Complex, DMatrix, DVector};
use serde::Serialize;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::time::Instant;
use subspace_core::detsample::{
    classical_dpp_sample, counts_vector, exact_distribution, method_stats, quantum_final_state,
    SampleRecord,
};
use subspace_core::error::{Error, Result};
use subspace_core::givens::{pyramid_decompose, sine_cosine_decompose, GivensDecomposition};
use subspace_core::io;
use subspace_core::linalg::orthogonalize;
use subspace_core::loader::{gamma_dense, loader_circuit, mapper, LoaderKind};
use subspace_core::simulator::circuit_unitary;
use subspace_core::subsets::enumerate_subsets;
use subspace_core::sve::{
    complex_subspace_amplitudes, orthogonal_eigendecomposition, rotation_embedding, subspace_sve,
    sve_sample, SectorUnitary,
};
use subspace_core::tda::{
    betti_numbers, dirac_and_laplacian, embedding_check, loader_block_encoding_depth, ComplexJson,
};
use subspace_core::verify::{format_table, run_suite};
use subspace_core::Circuit;

#[derive(Parser)]
#[command(
    name = "subspace",
    version,
    about = "Subspace-state toolkit: circuit synthesis, simulation, determinant sampling, spectral estimation, and homology"
)]
struct Cli {
    /// Worker threads for parallel sections (0 = library default).
    /// Results do not depend on this; it is excluded from reports.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample row subsets with probability det(A_S)^2 and cross-check
    /// samplers against the exact distribution.
    Detsample(DetsampleArgs),
    /// Factor an orthonormal frame into plane rotations.
    Decompose(DecomposeArgs),
    /// Build a vector-loader circuit and verify it realizes the dense
    /// reflection.
    Loader(LoaderArgs),
    /// Phase-estimate products of singular values on the weight-k sector of
    /// a block-embedded matrix.
    Sve(SveArgs),
    /// Assemble simplicial operators, check the reflection embedding, and
    /// compute Betti numbers.
    Tda(TdaArgs),
    /// Run the named invariant suites and print a pass/fail table.
    Verify(VerifyArgs),
    /// Measure circuit sizes and sampler throughput.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Method {
    Exact,
    Classical,
    Quantum,
    All,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Linear,
    Log,
}

impl From<Mode> for LoaderKind {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Linear => LoaderKind::Linear,
            Mode::Log => LoaderKind::Log,
        }
    }
}

#[derive(Args, Serialize)]
struct DetsampleArgs {
    /// Whitespace-separated matrix file (rows = lines, `#` comments).
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long, default_value_t = 10_000)]
    shots: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Method::All)]
    method: Method,
    /// Loader family used by the quantum-simulated sampler.
    #[arg(long, value_enum, default_value_t = Mode::Linear)]
    loader: Mode,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum DecomposeMethod {
    Pyramid,
    Csd,
}

#[derive(Args, Serialize)]
struct DecomposeArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long, value_enum, default_value_t = DecomposeMethod::Pyramid)]
    method: DecomposeMethod,
    /// Write the rotation circuit as circuit JSON.
    #[arg(long)]
    emit: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct LoaderArgs {
    /// Vector file (one entry per line or one row).
    #[arg(long)]
    vector: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Linear)]
    mode: Mode,
    /// Write the loader circuit as circuit JSON.
    #[arg(long)]
    emit: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct SveArgs {
    /// Square matrix with singular values in [0, 1].
    #[arg(long)]
    matrix: PathBuf,
    /// Subset size: phases add over k singular directions.
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Phase-register bits.
    #[arg(long, default_value_t = 8)]
    bits: usize,
    #[arg(long, default_value_t = 10_000)]
    shots: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct TdaArgs {
    /// Complex JSON: {"n": ..., "simplices": [[1,2], ...]}.
    #[arg(long)]
    complex: PathBuf,
    /// Take the downward closure instead of rejecting non-closed input.
    #[arg(long, default_value_t = false)]
    auto_close: bool,
    /// Report Betti numbers.
    #[arg(long, default_value_t = false)]
    betti: bool,
    /// Check the operator equals the dense-reflection submatrix.
    #[arg(long, default_value_t = false)]
    verify_embedding: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    /// Suite name: all, gates, givens, loaders, sampling, compound, sve, tda.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Size bound for randomized checks.
    #[arg(long, default_value_t = 6)]
    max_n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct BenchArgs {
    /// Suite name: loaders or samplers.
    #[arg(long, default_value = "loaders")]
    suite: String,
    #[arg(long, default_value_t = 8)]
    n: usize,
    /// Shots for the samplers suite.
    #[arg(long, default_value_t = 20_000)]
    shots: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    if cli.threads > 0 {
        // A failure here only means a pool already exists; results are
        // thread-count independent either way.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    let start = Instant::now();
    let run = dispatch(&cli.command, start);
    match run {
        Ok(()) => {}
        Err(e) => {
            let payload = json!({
                "schema": 1,
                "error": {"category": e.category(), "message": e.to_string()},
            });
            println!("{}", serde_json::to_string_pretty(&payload).unwrap());
            std::process::exit(1);
        }
    }
}

fn dispatch(command: &Command, start: Instant) -> Result<()> {
    match command {
        Command::Detsample(a) => {
            let (results, timing) = run_detsample(a)?;
            emit("detsample", a, &a.out, results, timing, start, None)
        }
        Command::Decompose(a) => {
            let (results, timing) = run_decompose(a)?;
            emit("decompose", a, &a.out, results, timing, start, None)
        }
        Command::Loader(a) => {
            let (results, timing) = run_loader(a)?;
            emit("loader", a, &a.out, results, timing, start, None)
        }
        Command::Sve(a) => {
            let (results, timing) = run_sve(a)?;
            emit("sve", a, &a.out, results, timing, start, None)
        }
        Command::Tda(a) => {
            let (results, timing) = run_tda(a)?;
            emit("tda", a, &a.out, results, timing, start, None)
        }
        Command::Verify(a) => run_verify_command(a, start),
        Command::Bench(a) => {
            let (results, timing) = run_bench(a)?;
            emit("bench", a, &a.out, results, timing, start, None)
        }
    }
}

/// Assembles the versioned report, writes or prints it, and prints the
/// optional human-readable summary when the report went to a file.
fn emit<C: Serialize>(
    command: &str,
    config: &C,
    out: &Option<PathBuf>,
    results: Value,
    mut timing: Value,
    start: Instant,
    summary: Option<String>,
) -> Result<()> {
    let mut config_value = serde_json::to_value(config)?;
    if let Value::Object(map) = &mut config_value {
        map.insert("command".into(), Value::String(command.into()));
    }
    if let Value::Object(map) = &mut timing {
        map.insert("total_seconds".into(), json!(start.elapsed().as_secs_f64()));
    }
    let report = json!({
        "schema": 1,
        "config": config_value,
        "results": results,
        "timing": timing,
    });
    match out {
        Some(path) => {
            io::write_json(path, &report)?;
            if let Some(s) = summary {
                println!("{s}");
            }
            println!("wrote {}", path.display());
        }
        None => {
            if let Some(s) = summary {
                eprintln!("{s}");
            }
            println!("{}", io::to_json_string(&report)?.trim_end());
        }
    }
    Ok(())
}

fn subset_probability_map(n: usize, d: usize, probs: &[f64]) -> Value {
    let subsets = enumerate_subsets(n, d);
    let mut map = serde_json::Map::new();
    for (s, p) in subsets.iter().zip(probs) {
        map.insert(s.index_list(), json!(p));
    }
    Value::Object(map)
}

fn run_detsample(a: &DetsampleArgs) -> Result<(Value, Value)> {
    let matrix = io::read_matrix(&a.matrix)?;
    let t0 = Instant::now();
    let dist = exact_distribution(&matrix)?;
    let exact_seconds = t0.elapsed().as_secs_f64();
    let (n, d) = (dist.n(), dist.d());
    let frame = orthogonalize(&matrix)?;

    let mut results = serde_json::Map::new();
    results.insert("n".into(), json!(n));
    results.insert("d".into(), json!(d));
    results.insert("shots".into(), json!(a.shots));
    results.insert("seed".into(), json!(a.seed));
    results.insert("support_cells".into(), json!(dist.probs().len()));
    if dist.probs().len() <= 10_000 {
        results.insert(
            "exact_probabilities".into(),
            subset_probability_map(n, d, dist.probs()),
        );
    }

    let mut timing = serde_json::Map::new();
    timing.insert("exact_seconds".into(), json!(exact_seconds));

    if matches!(a.method, Method::Classical | Method::All) {
        let t = Instant::now();
        let samples = classical_dpp_sample(&frame, a.shots, a.seed);
        timing.insert("classical_seconds".into(), json!(t.elapsed().as_secs_f64()));
        let record = SampleRecord::new(n, d, a.seed, &samples);
        let stats = method_stats(&dist, &counts_vector(n, d, &samples))?;
        results.insert(
            "classical".into(),
            json!({"counts": record.counts, "stats": stats}),
        );
    }
    if matches!(a.method, Method::Quantum | Method::All) {
        let t = Instant::now();
        let (sector, leak, circuit) = quantum_final_state(&frame, a.loader.into())?;
        let samples = sector.sample_sequence(a.shots, a.seed);
        timing.insert("quantum_seconds".into(), json!(t.elapsed().as_secs_f64()));
        let record = SampleRecord::new(n, d, a.seed, &samples);
        let stats = method_stats(&dist, &counts_vector(n, d, &samples))?;
        results.insert(
            "quantum".into(),
            json!({
                "counts": record.counts,
                "stats": stats,
                "gate_count": circuit.gate_count(),
                "depth": circuit.depth(),
                "sector_leak": leak,
            }),
        );
    }
    Ok((Value::Object(results), Value::Object(timing)))
}

fn decomposition_json(dec: &GivensDecomposition) -> Value {
    json!({
        "n": dec.n(),
        "rotations": dec
            .rotations()
            .iter()
            .map(|r| json!([r.i, r.j, r.theta]))
            .collect::<Vec<_>>(),
        "signs": dec.signs(),
    })
}

fn run_decompose(a: &DecomposeArgs) -> Result<(Value, Value)> {
    let matrix = io::read_matrix(&a.matrix)?;
    let t0 = Instant::now();
    let dec = match a.method {
        DecomposeMethod::Pyramid => pyramid_decompose(&matrix)?,
        DecomposeMethod::Csd => sine_cosine_decompose(&matrix)?,
    };
    let factor_seconds = t0.elapsed().as_secs_f64();
    let residual = dec.residual(&matrix);
    let mut results = serde_json::Map::new();
    results.insert("n".into(), json!(dec.n()));
    results.insert("columns".into(), json!(dec.cols()));
    results.insert("rotation_count".into(), json!(dec.rotation_count()));
    results.insert("rotation_depth".into(), json!(dec.rotation_depth()));
    results.insert("reconstruction_residual".into(), json!(residual));
    results.insert("decomposition".into(), decomposition_json(&dec));
    if let Some(path) = &a.emit {
        let circuit = dec.to_circuit()?;
        io::write_json(path, &circuit)?;
        results.insert(
            "circuit".into(),
            json!({
                "path": path.display().to_string(),
                "gate_count": circuit.gate_count(),
                "depth": circuit.depth(),
            }),
        );
    }
    Ok((
        Value::Object(results),
        json!({"factor_seconds": factor_seconds}),
    ))
}

fn gate_tallies(c: &Circuit) -> Value {
    let mut map = std::collections::BTreeMap::new();
    for g in c.gates() {
        *map.entry(g.name()).or_insert(0u64) += 1;
    }
    json!(map)
}

fn run_loader(a: &LoaderArgs) -> Result<(Value, Value)> {
    let mut x = io::read_vector(&a.vector)?;
    let norm = x.norm();
    if norm == 0.0 {
        return Err(Error::InvalidArgument("zero vector has no loader".into()));
    }
    let renormalized = (norm - 1.0).abs() > 1e-10;
    if renormalized {
        x /= norm;
    }
    let kind: LoaderKind = a.mode.into();
    let t0 = Instant::now();
    let circuit = loader_circuit(&x, kind)?;
    let map = mapper(&x, kind)?;
    let build_seconds = t0.elapsed().as_secs_f64();

    let mut results = serde_json::Map::new();
    results.insert("n".into(), json!(x.len()));
    results.insert("renormalized_input".into(), json!(renormalized));
    results.insert("gate_count".into(), json!(circuit.gate_count()));
    results.insert("depth".into(), json!(circuit.depth()));
    results.insert("mapper_depth".into(), json!(map.depth()));
    results.insert("gate_tallies".into(), gate_tallies(&circuit));

    let mut verify_seconds = 0.0;
    if x.len() <= 12 {
        let t1 = Instant::now();
        let dense = circuit_unitary(&circuit)?;
        let gamma = gamma_dense(&x)?;
        let dim = dense.nrows();
        let reflection = (&dense * &dense - DMatrix::<f64>::identity(dim, dim))
            .abs()
            .max();
        verify_seconds = t1.elapsed().as_secs_f64();
        results.insert(
            "reflection_equality_residual".into(),
            json!((dense - gamma).abs().max()),
        );
        results.insert("reflection_squared_residual".into(), json!(reflection));
    }
    if let Some(path) = &a.emit {
        io::write_json(path, &circuit)?;
        results.insert("circuit_path".into(), json!(path.display().to_string()));
    }
    Ok((
        Value::Object(results),
        json!({"build_seconds": build_seconds, "verify_seconds": verify_seconds}),
    ))
}

fn run_sve(a: &SveArgs) -> Result<(Value, Value)> {
    let matrix = io::read_matrix(&a.matrix)?;
    if matrix.nrows() != matrix.ncols() {
        return Err(Error::InvalidArgument(format!(
            "need a square matrix, got {}x{}",
            matrix.nrows(),
            matrix.ncols()
        )));
    }
    let n = matrix.nrows();
    if a.k == 0 || a.k > n {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= k <= {n}, got k = {}",
            a.k
        )));
    }
    let symmetric = (&matrix - matrix.transpose()).abs().max() <= 1e-12;
    let mut sigma: Vec<f64> = matrix
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    sigma.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let sigma_product: f64 = sigma[..a.k].iter().product();

    let t0 = Instant::now();
    let u = rotation_embedding(&matrix)?;
    let uk = SectorUnitary::from_orthogonal(&u, a.k)?;
    let pairs = orthogonal_eigendecomposition(&u)?;
    // Eigenstate input: the complex eigenvectors whose phases are closest to
    // arccos of the top-k singular values (exact for symmetric matrices).
    let mut frame = DMatrix::zeros(2 * n, a.k);
    let mut phases_used = Vec::new();
    let mut used = Vec::new();
    for (c, s) in sigma[..a.k].iter().enumerate() {
        let target = s.clamp(-1.0, 1.0).acos();
        let (idx, (theta, v)) = pairs
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
        phases_used.push(*theta);
        for r in 0..2 * n {
            frame[(r, c)] = v[r];
        }
    }
    let input = complex_subspace_amplitudes(&frame)?;
    let norm = input.norm();
    if norm <= 1e-12 {
        return Err(Error::DegenerateInput(
            "selected eigenvectors span no weight-k amplitude; try distinct singular values".into(),
        ));
    }
    let input: DVector<Complex<f64>> = input / Complex::new(norm, 0.0);
    let build_seconds = t0.elapsed().as_secs_f64();

    let t1 = Instant::now();
    let outcome = subspace_sve(&uk, &input, a.bits, 1e-9)?;
    let samples = sve_sample(&uk, &input, a.bits, a.shots, a.seed)?;
    let estimate_seconds = t1.elapsed().as_secs_f64();

    let mut register_counts: std::collections::BTreeMap<String, u64> =
        std::collections::BTreeMap::new();
    for (_, m) in &samples {
        *register_counts
            .entry(format!("{m:0width$b}", width = a.bits))
            .or_insert(0) += 1;
    }
    let top = &outcome.outcomes[0];
    let tolerance = 2.0 * 2.0 * std::f64::consts::PI / (1u64 << a.bits) as f64;
    let deviation = (top.cos_theta() - sigma_product).abs();
    let cells: Vec<Value> = outcome
        .outcomes
        .iter()
        .take(16)
        .map(|c| {
            json!({
                "subset": c.subset.index_list(),
                "register": c.register,
                "theta": c.theta,
                "cos_theta": c.cos_theta(),
                "probability": c.probability,
            })
        })
        .collect();
    let results = json!({
        "n": n,
        "embedding_dim": 2 * n,
        "k": a.k,
        "bits": a.bits,
        "shots": a.shots,
        "seed": a.seed,
        "symmetric_input": symmetric,
        "sigma": sigma,
        "sigma_product_top_k": sigma_product,
        "eigen_phases_used": phases_used,
        "top_outcome": {
            "register": top.register,
            "theta": top.theta,
            "cos_theta": top.cos_theta(),
            "probability": top.probability,
        },
        "cos_deviation_from_sigma_product": deviation,
        "phase_tolerance_two_bins": tolerance,
        "within_tolerance": deviation <= tolerance,
        "joint_outcomes_top16": cells,
        "pruned_mass": outcome.pruned_mass,
        "register_counts": register_counts,
    });
    Ok((
        results,
        json!({"build_seconds": build_seconds, "estimate_seconds": estimate_seconds}),
    ))
}

fn run_tda(a: &TdaArgs) -> Result<(Value, Value)> {
    let parsed: ComplexJson = io::read_json(&a.complex)?;
    let t0 = Instant::now();
    let complex = parsed.to_complex(a.auto_close)?;
    let (_, lap) = dirac_and_laplacian(&complex)?;
    let assemble_seconds = t0.elapsed().as_secs_f64();

    let mut results = serde_json::Map::new();
    results.insert("n".into(), json!(complex.n()));
    results.insert("simplices".into(), json!(complex.masks().len()));
    results.insert("max_cardinality".into(), json!(complex.max_cardinality()));
    results.insert(
        "laplacian_offdiagonal_values".into(),
        json!(lap.offdiagonal_values),
    );

    let mut timing = serde_json::Map::new();
    timing.insert("assemble_seconds".into(), json!(assemble_seconds));

    if a.betti {
        let t = Instant::now();
        let b = betti_numbers(&complex)?;
        timing.insert("betti_seconds".into(), json!(t.elapsed().as_secs_f64()));
        results.insert("betti".into(), json!(b.betti));
        results.insert("reduced_b0".into(), json!(b.reduced_b0));
    }
    if a.verify_embedding {
        let t = Instant::now();
        let residual = embedding_check(&complex)?;
        timing.insert("embedding_seconds".into(), json!(t.elapsed().as_secs_f64()));
        results.insert("embedding_residual".into(), json!(residual));
        results.insert("embedding_ok".into(), json!(residual <= 1e-12));
    }
    Ok((Value::Object(results), Value::Object(timing)))
}

fn run_verify_command(a: &VerifyArgs, start: Instant) -> Result<()> {
    let t0 = Instant::now();
    let rows = run_suite(&a.suite, a.max_n, a.seed)?;
    let suite_seconds = t0.elapsed().as_secs_f64();
    let failures: Vec<&str> = rows.iter().filter(|r| !r.passed).map(|r| r.name).collect();
    let results = json!({
        "suite": a.suite,
        "max_n": a.max_n,
        "seed": a.seed,
        "checks": rows,
        "passed": failures.is_empty(),
        "failures": failures,
    });
    let table = format_table(&rows);
    emit(
        "verify",
        a,
        &a.out,
        results,
        json!({"suite_seconds": suite_seconds}),
        start,
        Some(table.trim_end().to_string()),
    )?;
    if !failures.is_empty() {
        return Err(Error::InvalidOperation(format!(
            "{} verification check(s) failed: {}",
            failures.len(),
            failures.join(", ")
        )));
    }
    Ok(())
}

fn run_bench(a: &BenchArgs) -> Result<(Value, Value)> {
    match a.suite.as_str() {
        "loaders" => {
            let t0 = Instant::now();
            let report = loader_block_encoding_depth(a.n)?;
            let x = DVector::from_element(a.n, 1.0 / (a.n as f64).sqrt());
            let linear = loader_circuit(&x, LoaderKind::Linear)?;
            let seconds = t0.elapsed().as_secs_f64();
            let results = json!({
                "suite": "loaders",
                "n": a.n,
                "log": report,
                "linear": {
                    "gate_count": linear.gate_count(),
                    "depth": linear.depth(),
                },
            });
            Ok((results, json!({"bench_seconds": seconds})))
        }
        "samplers" => {
            let mut gen = subspace_core::rng::TestMatrices::new(a.seed);
            let n = a.n.clamp(2, 12);
            let d = (n / 2).max(1);
            let frame = gen.frame(n, d);
            let dist = exact_distribution(frame.matrix())?;
            let t1 = Instant::now();
            let classical = classical_dpp_sample(&frame, a.shots, a.seed);
            let classical_seconds = t1.elapsed().as_secs_f64();
            let t2 = Instant::now();
            let (sector, _, circuit) = quantum_final_state(&frame, LoaderKind::Linear)?;
            let quantum = sector.sample_sequence(a.shots, a.seed);
            let quantum_seconds = t2.elapsed().as_secs_f64();
            let cstats = method_stats(&dist, &counts_vector(n, d, &classical))?;
            let qstats = method_stats(&dist, &counts_vector(n, d, &quantum))?;
            let results = json!({
                "suite": "samplers",
                "n": n,
                "d": d,
                "shots": a.shots,
                "seed": a.seed,
                "classical_stats": cstats,
                "quantum_stats": qstats,
                "quantum_gate_count": circuit.gate_count(),
                "quantum_depth": circuit.depth(),
            });
            let timing = json!({
                "classical_seconds": classical_seconds,
                "classical_seconds_per_shot": classical_seconds / a.shots.max(1) as f64,
                "quantum_seconds": quantum_seconds,
                "quantum_seconds_per_shot": quantum_seconds / a.shots.max(1) as f64,
            });
            Ok((results, timing))
        }
        other => Err(Error::InvalidArgument(format!(
            "unknown bench suite '{other}' (available: loaders, samplers)"
        ))),
    }
}
