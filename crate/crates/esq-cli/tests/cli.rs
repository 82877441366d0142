//! Behavioral tests for the `esq` binary: exit codes, output stability,
//! JSON round-trips, and channel-file diagnostics.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn esq() -> Command {
    Command::new(env!("CARGO_BIN_EXE_esq"))
}

fn run(args: &[&str]) -> Output {
    esq().args(args).output().expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 stderr")
}

fn channel_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/channels")
}

#[test]
fn pauli_identity_prints_unit_bound() {
    let out = run(&["pauli", "1", "0", "0", "0"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("upper = 1.00000000000"), "{text}");
    assert!(text.contains("lower = 1.00000000000"), "{text}");
    assert!(text.contains("gap = 0"), "{text}");
}

#[test]
fn pauli_fixed_phases_match_dephasing_closed_form() {
    let out = run(&["pauli", "0.9", "0", "0", "0.1", "--phi3", "0"]);
    assert!(out.status.success());
    assert!(stdout_of(&out).contains("upper = 0.721928094887"));
}

#[test]
fn bad_probabilities_exit_two() {
    let out = run(&["pauli", "0.5", "0.5", "0.5", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("sum"));
}

#[test]
fn slightly_off_probabilities_renormalize_with_note() {
    let out = run(&["pauli", "0.9001", "0", "0", "0.1"]);
    assert!(out.status.success());
    assert!(stderr_of(&out).contains("renormalizing"));
}

#[test]
fn eta1_without_ns_exits_two() {
    let out = run(&["pure-loss", "0.5", "--eta1", "0.3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("--ns"));
}

#[test]
fn pure_loss_at_unit_transmissivity_renders_inf() {
    let out = run(&["pure-loss", "1"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("upper = inf"), "{text}");
    assert!(text.contains("lower = inf"), "{text}");

    let out = run(&["pure-loss", "1", "--json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("valid JSON");
    assert_eq!(doc["upper"]["value"], serde_json::json!("inf"));
    let bound: esq_core::BoundResult =
        serde_json::from_value(doc["upper"].clone()).expect("BoundResult parses");
    assert!(bound.value.is_infinite());
}

#[test]
fn json_output_round_trips_exactly() {
    let out = run(&["pure-loss", "0.5", "--json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("valid JSON");
    let bound: esq_core::BoundResult =
        serde_json::from_value(doc["upper"].clone()).expect("BoundResult parses");
    let expected = esq_core::gaussian::pure_loss_bound_limit(0.5).unwrap();
    assert_eq!(bound.value, expected);
    assert_eq!(doc["lower"].as_f64().unwrap(), 1.0);
    assert_eq!(doc["gap"].as_f64().unwrap(), expected - 1.0);
}

#[test]
fn figure_csv_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a.csv");
    let second = dir.path().join("b.csv");
    for path in [&first, &second] {
        let out = run(&["figure", "dephasing", "--out", path.to_str().unwrap()]);
        assert!(out.status.success());
    }
    let a = std::fs::read(&first).unwrap();
    let b = std::fs::read(&second).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("param,upper_bound,lower_bound\n"));
    assert_eq!(text.lines().count(), 102);
}

#[test]
fn figure_rejects_tiny_grid() {
    let out = run(&["figure", "dephasing", "--grid", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn figure_unwritable_path_exits_three() {
    let out = run(&[
        "figure",
        "dephasing",
        "--out",
        "/nonexistent-dir/out.csv",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn missing_channel_file_exits_three() {
    let out = run(&["generic", "/no/such/channel.json"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn malformed_channel_file_reports_parse_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{ \"in_dim\": 2,\n  broken\n}").unwrap();
    let out = run(&["generic", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_of(&out);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn non_closing_kraus_reports_deviation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("open.json");
    std::fs::write(
        &path,
        r#"{
  "in_dim": 2,
  "out_dim": 2,
  "kraus": [
    [
      [[0.5, 0.0], [0.0, 0.0]],
      [[0.0, 0.0], [0.5, 0.0]]
    ]
  ]
}"#,
    )
    .unwrap();
    let out = run(&["generic", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_of(&out);
    assert!(err.contains("Kraus"), "{err}");
}

#[test]
fn wrong_kraus_shape_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("shape.json");
    std::fs::write(
        &path,
        r#"{
  "in_dim": 2,
  "out_dim": 2,
  "kraus": [
    [
      [[1.0, 0.0]],
      [[0.0, 0.0]]
    ]
  ]
}"#,
    )
    .unwrap();
    let out = run(&["generic", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("2x2"));
}

#[test]
fn generic_is_deterministic_for_a_fixed_seed() {
    let path = channel_dir().join("dephasing-0.9.json");
    let args = ["generic", path.to_str().unwrap(), "--seed", "11", "--json"];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(stdout_of(&first), stdout_of(&second));
}

#[test]
fn generic_identity_file_is_tight() {
    let path = channel_dir().join("identity.json");
    let out = run(&["generic", path.to_str().unwrap(), "--json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let value = doc["upper"]["value"].as_f64().unwrap();
    assert!((value - 1.0).abs() < 1e-6, "{value}");
}

#[test]
fn amplitude_damping_regression_snapshot() {
    // pinned from the first run at the default seed; guards optimizer drift
    let path = channel_dir().join("amplitude-damping-0.3.json");
    let out = run(&["generic", path.to_str().unwrap(), "--json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let value = doc["upper"]["value"].as_f64().unwrap();
    assert!((value - 0.603311370239).abs() < 1e-9, "{value}");
    assert!(value >= 0.0);
}

#[test]
fn selftest_passes() {
    let out = run(&["selftest"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.lines().all(|l| l.ends_with(": ok")), "{text}");
}

#[test]
fn thermal_at_zero_photons_matches_pure_loss_limit() {
    let thermal = run(&["thermal", "0.8", "0"]);
    let loss = run(&["pure-loss", "0.8"]);
    let line = |o: &Output| {
        stdout_of(o)
            .lines()
            .find(|l| l.starts_with("upper = "))
            .unwrap()
            .to_string()
    };
    assert_eq!(line(&thermal), line(&loss));
}
