use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qcoherence"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn example_passes_and_is_byte_identical() {
    let a = run(&["example"]);
    let b = run(&["example"]);
    assert_eq!(code(&a), 0, "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.trim_end().ends_with("PASS"));
    assert!(text.contains("rhs_theorem"));
}

#[test]
fn example_passes_at_zero_tolerance() {
    let out = run(&["example", "--tol", "0"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn example_writes_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("example.json");
    let out = run(&["example", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(json["report"]["m"], 1);
    assert_eq!(json["quantities"].as_array().unwrap().len(), 13);
}

fn verify(file: &str) -> Output {
    run(&["verify", "--state", data(file).to_str().unwrap()])
}

#[test]
fn verify_reference_state_matches_example() {
    let out = verify("example_state.json");
    assert_eq!(code(&out), 0);
    let r: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let close = |key: &str, v: f64| (r[key].as_f64().unwrap() - v).abs() <= 1e-12;
    assert!(close("rhs_theorem", 64.0 / 25.0), "{r}");
    assert!(close("rhs_baseline_k1", 52.0 / 25.0));
    assert!(close("lhs", 121.0 / 25.0));
    assert!(close("k", 0.6));
    assert_eq!(r["m"], 1);
}

#[test]
fn verify_diagonal_state_is_all_zero() {
    let out = verify("diagonal_state.json");
    assert_eq!(code(&out), 0);
    let r: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    for key in [
        "lhs",
        "rhs_theorem",
        "rhs_baseline_k1",
        "rhs_plain_sum",
        "gap",
    ] {
        assert_eq!(r[key].as_f64().unwrap(), 0.0, "{key}");
    }
}

#[test]
fn verify_error_exit_codes_are_distinct() {
    assert_eq!(code(&verify("malformed_state.json")), 3);
    assert_eq!(code(&verify("nonphysical_state.json")), 4);
    assert_eq!(code(&verify("does_not_exist.json")), 5);
    assert_eq!(code(&run(&["verify"])), 2);
}

#[test]
fn verify_with_chain_check() {
    let out = run(&[
        "verify",
        "--state",
        data("example_state.json").to_str().unwrap(),
        "--alpha",
        "3",
        "--beta",
        "2",
        "--check-chain",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("0 failed"));
}

#[test]
fn too_few_qubits_is_an_argument_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one.json");
    std::fs::write(&path, r#"{"amplitudes": [[0.6, 0.0], [0.8, 0.0]]}"#).unwrap();
    assert_eq!(
        code(&run(&["verify", "--state", path.to_str().unwrap()])),
        6
    );
}

fn sweep(config: &str, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["sweep", "--config", config, "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

#[test]
fn sweep_is_deterministic_and_reports_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = data("sweep_haar.json");
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    let out_a = sweep(cfg.to_str().unwrap(), &a, &[]);
    let out_b = sweep(cfg.to_str().unwrap(), &b, &[]);
    assert_eq!(
        code(&out_a),
        0,
        "{}",
        String::from_utf8_lossy(&out_a.stderr)
    );
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(out_a.stdout, out_b.stdout);

    let summary: serde_json::Value = serde_json::from_str(&stdout(&out_a)).unwrap();
    assert_eq!(summary["total"], 400);
    assert_eq!(summary["violations"], 0);
    assert_eq!(summary["chain_failures"], 0);
    let lines = std::fs::read_to_string(&a).unwrap().lines().count();
    assert_eq!(lines, 401);
}

#[test]
fn sweep_seed_override_changes_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = data("sweep_haar.json");
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    assert_eq!(code(&sweep(cfg.to_str().unwrap(), &a, &[])), 0);
    assert_eq!(
        code(&sweep(cfg.to_str().unwrap(), &b, &["--seed", "43"])),
        0
    );
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn sweep_single_targeted_sample_meets_conditions() {
    let dir = tempfile::tempdir().unwrap();
    let out = sweep(
        data("sweep_targeted_one.json").to_str().unwrap(),
        &dir.path().join("t.csv"),
        &["--check-chain"],
    );
    assert_eq!(code(&out), 0);
    let summary: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(summary["conditions_satisfied"], 1);
    assert_eq!(summary["chain_checked"], 1);
}

#[test]
fn sweep_rejects_unknown_key_by_name() {
    let dir = tempfile::tempdir().unwrap();
    let out = sweep(
        data("sweep_unknown_key.json").to_str().unwrap(),
        &dir.path().join("x.csv"),
        &[],
    );
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("samplez"));
}

#[test]
fn sweep_unwritable_output_is_io_error() {
    let out = sweep(
        data("sweep_targeted_one.json").to_str().unwrap(),
        Path::new("/nonexistent/dir/out.csv"),
        &[],
    );
    assert_eq!(code(&out), 5);
}

#[test]
fn lemmas_small_grid_passes() {
    let out = run(&[
        "lemmas",
        "--config",
        data("lemma_grid_small.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let s: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(s["lemma2_points"], 36);
    assert_eq!(s["lemma1_checks"], 40 * 3 * 2);
}

#[test]
fn lemmas_x_above_k_is_rejected_not_counted() {
    let out = run(&[
        "lemmas",
        "--config",
        data("lemma_grid_x_above_k.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("x_fractions"));
}

#[test]
fn size_guard_is_configurable() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args([
            "sweep",
            "--config",
            data("sweep_targeted_one.json").to_str().unwrap(),
            "--out",
            dir.path().join("t.csv").to_str().unwrap(),
        ])
        .env("COHERENCE_MAX_QUBITS", "3")
        .output()
        .unwrap();
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("n_qubits"));
}
