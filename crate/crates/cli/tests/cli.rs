use std::process::Command;

use serde_json::Value;

fn schwarz(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_schwarz")).args(args).output().expect("binary runs")
}

fn write(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn describe_identity_and_extremal() {
    let dir = tempfile::tempdir().unwrap();
    let id = write(&dir, "id.json", r#"{"kind": "blaschke", "rotation": 0, "zeros": [[0, 0]]}"#);
    let out = schwarz(&["describe", &id]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("f(0) = 0.000000000000 + 0.000000000000i"), "{text}");
    assert!(text.contains("f'(0) = 1.000000000000 + 0.000000000000i"), "{text}");

    let ext = write(&dir, "ext.json", r#"{"kind": "blaschke", "rotation": 0, "zeros": [[0, 0], [-0.5, 0]]}"#);
    let text = String::from_utf8(schwarz(&["describe", &ext]).stdout).unwrap();
    assert!(text.contains("f'(0) = 0.500000000000"), "{text}");
    assert!(text.contains("certification: self-map"));
}

#[test]
fn describe_rejects_negative_mass() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(&dir, "m.json", r#"{"atoms": [[0.5, -1.0]]}"#);
    let out = schwarz(&["describe", &m]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("negative mass"));

    let ok = write(&dir, "ok.json", r#"{"atoms": [[0.0, 6.283185307179586]]}"#);
    let text = String::from_utf8(schwarz(&["describe", &ok]).stdout).unwrap();
    assert!(text.contains("positive semidefinite"), "{text}");
}

#[test]
fn malformed_json_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(&dir, "bad.json", "[\n  {\"kind\": \"polynomial\", \"coefficients\": [[0, 0], [1, 0]],}\n]");
    let out = schwarz(&["--suite", "schwarz-pick", "--input", &bad]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2 column"), "{err}");
}

#[test]
fn unknown_tolerance_and_missing_suite_are_config_errors() {
    assert_eq!(schwarz(&["--suite", "cartan", "--tolerance", "certify=1"]).status.code(), Some(1));
    assert_eq!(schwarz(&["--suite", "cartan", "--tolerance", "growth"]).status.code(), Some(1));
    assert_eq!(schwarz(&[]).status.code(), Some(1));
    let list = schwarz(&["--list-suites"]);
    assert_eq!(list.status.code(), Some(0));
    assert_eq!(String::from_utf8(list.stdout).unwrap().lines().count(), 9);
}

#[test]
fn burns_krantz_seed_seven() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bk.json");
    let run = schwarz(&["--suite", "burns-krantz", "--seed", "7", "--output", out.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(report["metadata"]["suite"], "burns-krantz");
    assert_eq!(report["metadata"]["seed"], 7);
    let find = |name: &str| {
        report["reports"]
            .as_array()
            .unwrap()
            .iter()
            .find(|r| r["details"]["case"] == name)
            .cloned()
            .unwrap()
    };
    assert_eq!(find("identity")["details"]["classification"], "identity");
    assert_eq!(find("cubic counterexample")["details"]["classification"], "non_identity");
    assert!(String::from_utf8(run.stderr).unwrap().contains("wall time"));
}

#[test]
fn herglotz_roundtrip_reports_max_error() {
    let run = schwarz(&["--suite", "herglotz-roundtrip", "--seed", "1"]);
    assert_eq!(run.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&run.stdout).unwrap();
    let summary = report["reports"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["verifier"] == "herglotz-summary")
        .unwrap();
    assert!(summary["details"]["max_roundtrip_error"].as_f64().unwrap() < 1e-8);
}

#[test]
fn ball_and_contact_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let ball = write(
        &dir,
        "ball.json",
        r#"[{"kind": "product", "first": {"kind": "blaschke", "rotation": 0, "zeros": [[0, 0]]}, "kappa": 0.5}]"#,
    );
    let run = schwarz(&["--suite", "ball", "--input", &ball]);
    assert_eq!(run.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&run.stdout).unwrap();
    let input = report["reports"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["details"]["case"] == "input #0")
        .unwrap();
    assert_eq!(input["details"]["classification"], "non_identity");

    let disc = write(&dir, "disc.json", r#"{"kind": "tangent", "c": [0.0, 1.0]}"#);
    assert_eq!(schwarz(&["--suite", "contact", "--input", &disc]).status.code(), Some(0));
}
