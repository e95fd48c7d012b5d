//! End-to-end tests of the `dualvol` binary: printed values, exit codes,
//! and byte-identical reports for identical (config, seed).

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn dualvol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dualvol"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn dmv_two_unit_balls_prints_pi() {
    let dir = tempfile::tempdir().unwrap();
    let bodies = write(
        dir.path(),
        "balls.json",
        r#"[{"shape":"ball","r":1.0},{"shape":"ball","r":1.0}]"#,
    );
    let out = dualvol(&["dmv", "--bodies", &bodies]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "3.141592653589793");
}

#[test]
fn dmv_wrong_body_count_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let bodies = write(dir.path(), "one.json", r#"[{"shape":"ball","r":1.0}]"#);
    let out = dualvol(&["dmv", "--bodies", &bodies]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pm_variation_prints_sum_of_absolute_entries() {
    let dir = tempfile::tempdir().unwrap();
    let tensor = write(
        dir.path(),
        "t.json",
        r#"{"order":2,"atoms":2,"entries":[1,-1,-1,1]}"#,
    );
    let out = dualvol(&["pm", "variation", "--tensor", &tensor]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "4");
}

#[test]
fn pm_diagonal_failure_exits_one_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let tensor = write(
        dir.path(),
        "t.json",
        r#"{"order":2,"atoms":2,"entries":[1.0,0.5,0.0,1.0]}"#,
    );
    let report = dir.path().join("report.json");
    let out = dualvol(&[
        "pm",
        "diagonal",
        "--tensor",
        &tensor,
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["diagonal"], false);
    assert_eq!(json["witness"], serde_json::json!([0, 1]));
}

#[test]
fn malformed_json_is_usage_error_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let tensor = write(dir.path(), "bad.json", r#"{"order":2,"atoms""#);
    let out = dualvol(&["pm", "variation", "--tensor", &tensor]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line"), "diagnostics missing position: {err}");
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = dualvol(&["grid", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn lutwak_single_ball_passes() {
    let dir = tempfile::tempdir().unwrap();
    let bodies = write(dir.path(), "b.json", r#"[{"shape":"ball","r":1.5}]"#);
    let out = dualvol(&["lutwak", "--bodies", &bodies, "--lambdas", "2.0"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(json["abs_diff"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn characterize_diagonal_passes_and_planted_tensor_fails() {
    let dir = tempfile::tempdir().unwrap();
    let masses: Vec<f64> = (0..8).map(|i| 1.0 + 0.1 * i as f64).collect();
    let measure = write(
        dir.path(),
        "m.json",
        &serde_json::json!({ "masses": masses }).to_string(),
    );
    let out = dualvol(&[
        "characterize",
        "--backing",
        &measure,
        "--arity",
        "2",
        "--grid-res",
        "8",
        "--trials",
        "6",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let mut entries = vec![0.0f64; 64];
    for i in 0..8 {
        entries[i * 8 + i] = 1.0;
    }
    entries[3] = 0.5; // off-diagonal (0, 3)
    let tensor = write(
        dir.path(),
        "t.json",
        &serde_json::json!({"order": 2, "atoms": 8, "entries": entries}).to_string(),
    );
    let report = dir.path().join("report.json");
    let out = dualvol(&[
        "characterize",
        "--backing",
        &tensor,
        "--arity",
        "2",
        "--grid-res",
        "8",
        "--trials",
        "6",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["pass"], false);
    let vanishing = &json["checks"][0];
    assert_eq!(vanishing["name"], "vanishing_on_disjoint");
    assert_eq!(vanishing["pass"], false);
    assert!(vanishing["witness"].is_string());
}

#[test]
fn reduce_recovers_planted_constant() {
    let dir = tempfile::tempdir().unwrap();
    let res = 12usize;
    let w = 2.0 * std::f64::consts::PI / res as f64;
    let masses: Vec<f64> = (0..res).map(|_| 3.0 * w / 2.0).collect();
    let measure = write(
        dir.path(),
        "m.json",
        &serde_json::json!({ "masses": masses }).to_string(),
    );
    let out = dualvol(&["reduce", "--measure", &measure]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((json["c"].as_f64().unwrap() - 3.0).abs() <= 1e-9 * 3.0);
}

#[test]
fn accept_full_suite_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a.json");
    let second = dir.path().join("b.json");
    for path in [&first, &second] {
        let out = dualvol(&[
            "accept",
            "--suite",
            "all",
            "--seed",
            "0",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(fs::read(&first).unwrap(), fs::read(&second).unwrap());
}

#[test]
fn accept_csv_export() {
    let out = dualvol(&["accept", "--suite", "1", "--seed", "0", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("id,name,pass,detail\n"));
    assert!(text.contains("1,ball_identities,true"));
}
