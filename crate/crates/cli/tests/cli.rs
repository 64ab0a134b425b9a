//! Pinned end-to-end behaviors of the `subspace` binary: the documented
//! example invocations, report envelope, and exit codes.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_subspace"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn detsample_on_top_identity_frame_always_draws_first_rows() {
    // The 4x2 frame whose only nonzero minor is det over rows {1,2}.
    let path = tmp("identity42.txt");
    std::fs::write(&path, "1 0\n0 1\n0 0\n0 0\n").unwrap();
    let out = bin()
        .args([
            "detsample",
            "--matrix",
            path.to_str().unwrap(),
            "--shots",
            "10",
            "--seed",
            "1",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["schema"], 1);
    for method in ["classical", "quantum"] {
        let counts = report["results"][method]["counts"].as_object().unwrap();
        assert_eq!(counts.len(), 1, "{method} drew a subset other than {{1,2}}");
        assert_eq!(counts["1,2"], 10);
    }
    assert_eq!(report["results"]["exact_probabilities"]["1,2"], 1.0);
}

#[test]
fn verify_all_passes_and_exits_zero() {
    let out = bin()
        .args(["verify", "--suite", "all", "--max-n", "4", "--seed", "7"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["results"]["failures"].as_array().unwrap().is_empty());
    assert_eq!(report["results"]["checks"].as_array().unwrap().len(), 21);
}

#[test]
fn bench_loaders_reports_depth_formula_for_n8() {
    let out = bin()
        .args(["bench", "--suite", "loaders", "--n", "8"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let log = &report["results"]["log"];
    assert_eq!(log["formula_mapper_depth"], 8);
    // The measured depth is reported beside the closed form with a flag.
    assert!(log["mapper_depth"].is_u64());
    assert!(log["matches_formula"].is_boolean());
}

#[test]
fn runtime_failures_emit_error_json_and_exit_one() {
    let path = tmp("not_a_frame.txt");
    std::fs::write(&path, "1 1\n1 1\n").unwrap();
    let out = bin()
        .args(["decompose", "--matrix", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["schema"], 1);
    assert!(report["error"]["category"].is_string());
    assert!(report["error"]["message"].is_string());
}

#[test]
fn usage_errors_exit_two() {
    let out = bin()
        .args(["decompose", "--no-such-flag"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
