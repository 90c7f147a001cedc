//! End-to-end CLI coverage: exit codes, report schemas, determinism, and the
//! plot-data emission.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ctxcert_core::report::CertificationReport;
use serde_json::Value;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_ctxcert")
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("spawning ctxcert")
}

fn stdout_json(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

fn strip_timestamp(v: &mut Value) {
    if let Some(p) = v.pointer_mut("/provenance") {
        p.as_object_mut().unwrap().remove("generated_at");
    }
}

#[test]
fn pentagon_ideal_certifies_via_cli() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("ideal.json");
    let gen = run(&["gen-qubit", "--pentagon", "-o", scenario.to_str().unwrap()]);
    assert!(gen.status.success());

    let plot = dir.path().join("points.csv");
    let out = run(&[
        "certify-pentagon",
        scenario.to_str().unwrap(),
        "--plot",
        plot.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: CertificationReport = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report.verdict_consistent());
    let json = stdout_json(&out);
    assert_eq!(json["verdict"], "CONTEXTUAL");
    assert_eq!(json["witnesses"].as_array().unwrap().len(), 5);
    for case in json["witnesses"].as_array().unwrap() {
        assert_eq!(case["violated"], true);
    }

    let csv = std::fs::read_to_string(&plot).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("case,prep,x,y"));
    assert_eq!(lines.count(), 25);
}

#[test]
fn twin_scenario_is_inconclusive_with_witness() {
    let out = run(&["certify-algorithm", data("twin.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let json = stdout_json(&out);
    assert_eq!(json["verdict"], "INCONCLUSIVE");
    let witnesses = json["witnesses"].as_array().unwrap();
    assert!(!witnesses.is_empty());
    assert_eq!(witnesses[0]["left_set"], serde_json::json!([0]));
    assert_eq!(witnesses[0]["right_set"], serde_json::json!([1]));
}

#[test]
fn corner_scenario_is_contextual() {
    let out = run(&["certify-algorithm", data("corners.json").to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let json = stdout_json(&out);
    assert_eq!(json["verdict"], "CONTEXTUAL");
    assert_eq!(json["preconditions"]["soundness_gate"], true);
    assert!(json["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn decompose_square_matches_expected_supports() {
    let out = run(&["decompose", data("square.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    assert_eq!(json["left"]["indices"], serde_json::json!([0, 3]));
    assert_eq!(json["right"]["indices"], serde_json::json!([1, 2]));
    assert_eq!(json["left"]["weights"], serde_json::json!(["1/2", "1/2"]));
    assert_eq!(json["right"]["weights"], serde_json::json!(["1/2", "1/2"]));
    assert_eq!(json["point"], serde_json::json!(["1/2", "1/2"]));
}

#[test]
fn equivalences_lists_twin_pair() {
    let out = run(&["equivalences", data("twin.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    assert_eq!(json["count"], 1);
    assert_eq!(json["pairs"][0]["left"]["indices"], serde_json::json!([0]));
}

#[test]
fn audit_model_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("qubit.json");
    let gen = run(&[
        "gen-qubit",
        "--k",
        "1",
        "--denominator-bound",
        "1000",
        "-o",
        scenario.to_str().unwrap(),
    ]);
    assert!(gen.status.success());

    // Candidate model: the trivial product model of the same table.
    let file: ctxcert_core::scenario::ScenarioFile =
        serde_json::from_slice(&std::fs::read(&scenario).unwrap()).unwrap();
    let table = file.to_exact().unwrap();
    let model = ctxcert_core::models::trivial_product_model(&table, false).unwrap();
    let model_path = dir.path().join("model.json");
    std::fs::write(&model_path, serde_json::to_vec(&model).unwrap()).unwrap();

    let out = run(&[
        "audit-model",
        scenario.to_str().unwrap(),
        model_path.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let json = stdout_json(&out);
    assert_eq!(json["outcome"]["status"], "applicable");
    assert_eq!(json["outcome"]["vectors_distinct"], true);
}

#[test]
fn reports_are_deterministic_modulo_timestamp() {
    for args in [
        vec!["certify-algorithm", data("twin.json").to_str().unwrap()],
        vec!["equivalences", data("corners.json").to_str().unwrap()],
        vec!["decompose", data("square.json").to_str().unwrap()],
    ] {
        let mut a = stdout_json(&run(&args));
        let mut b = stdout_json(&run(&args));
        strip_timestamp(&mut a);
        strip_timestamp(&mut b);
        assert_eq!(a, b, "nondeterministic output for {args:?}");
    }
}

#[test]
fn certification_report_roundtrips() {
    let out = run(&["certify-algorithm", data("corners.json").to_str().unwrap()]);
    let report: CertificationReport = serde_json::from_slice(&out.stdout).unwrap();
    let json = serde_json::to_string(&report).unwrap();
    let back: CertificationReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, report);

    let out = run(&["certify-pentagon", "/nonexistent/scenario.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn report_flag_writes_identical_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&[
        "certify-algorithm",
        data("twin.json").to_str().unwrap(),
        "--report",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let on_disk = std::fs::read_to_string(&path).unwrap();
    assert_eq!(
        on_disk.trim_end(),
        String::from_utf8_lossy(&out.stdout).trim_end()
    );
}

#[test]
fn malformed_inputs_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, b"{ not json").unwrap();
    let out = run(&["certify-algorithm", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // Decimal probabilities without a declared denominator bound are rejected
    // on the exact path, with a diagnostic naming the rule.
    let undeclared = dir.path().join("undeclared.json");
    std::fs::write(
        &undeclared,
        br#"{"prob0": [["0.25", "0.5"], ["0.5", "0.25"]]}"#,
    )
    .unwrap();
    let out = run(&["certify-algorithm", undeclared.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("denominator_bound"));

    // The same file is fine for the float pipeline, except it is not 5×3.
    let out = run(&["certify-pentagon", undeclared.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // Guard violation: scenario wider than --max-m.
    let out = run(&[
        "certify-algorithm",
        data("twin.json").to_str().unwrap(),
        "--max-m",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gen_qubit_unknown_count_flows_through() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("p.json");
    let gen = run(&[
        "gen-qubit",
        "--pentagon",
        "--denominator-bound",
        "100000",
        "--unknown-count",
        "1",
        "-o",
        scenario.to_str().unwrap(),
    ]);
    assert!(gen.status.success());
    let file: Value = serde_json::from_slice(&std::fs::read(&scenario).unwrap()).unwrap();
    assert_eq!(file["unknown_count"], 1);
    assert_eq!(file["measurements"], serde_json::json!(["X", "Z", "W"]));
    // Entries are exact "p/q" strings after rationalization.
    let entry = file["prob0"][0][0].as_str().unwrap();
    assert!(entry.contains('/'));
}
