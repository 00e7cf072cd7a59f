//! End-to-end CLI tests: problem files in, certificates out, exit codes
//! as documented, and the verify round trip.

use std::path::PathBuf;
use std::process::{Command, Output};

fn opkit() -> Command {
    Command::new(env!("CARGO_BIN_EXE_opkit"))
}

fn write_file(dir: &tempfile::TempDir, name: &str, contents: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    opkit().args(args).output().unwrap()
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad JSON output: {}\nstdout: {}\nstderr: {}",
            e,
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

#[test]
fn decompose_and_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_file(
        &dir,
        "dec.json",
        r#"{
            "poly": {"leading": 1, "factors": [{"lambda": 1, "p": 1}, {"lambda": 2, "p": 1}]},
            "operator": {"dense": [[-1, 0], [0, -2]]},
            "vectors": [[1, 1]]
        }"#,
    );
    let out = run(&["decompose", problem.to_str().unwrap()]);
    assert!(out.status.success());
    let value = stdout_json(&out);
    let cert = &value["certificate"];
    assert_eq!(cert["cofactors"][0], serde_json::json!([1]));
    assert_eq!(cert["cofactors"][1], serde_json::json!([-1]));
    assert_eq!(value["projector_report"]["factor_null_dims"], serde_json::json!([1, 1]));

    // certificates re-validate through the verify subcommand
    let cert_file = write_file(&dir, "cert.json", &String::from_utf8(out.stdout).unwrap());
    let verify = run(&["verify", cert_file.to_str().unwrap()]);
    assert!(verify.status.success());
    assert_eq!(stdout_json(&verify)["verified"], serde_json::json!(true));
}

#[test]
fn decompose_duplicate_root_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_file(
        &dir,
        "dup.json",
        r#"{"poly": {"factors": [{"lambda": 1, "p": 1}, {"lambda": 1, "p": 2}]}}"#,
    );
    let out = run(&["decompose", problem.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("duplicate root"));
}

#[test]
fn unknown_fields_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_file(
        &dir,
        "bad.json",
        r#"{"poly": {"factors": [{"lambda": 1, "p": 1}]}, "surprise": 1}"#,
    );
    let out = run(&["decompose", problem.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown field"));
}

#[test]
fn solve_reports_exact_zero_residual() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_file(
        &dir,
        "solve.json",
        r#"{
            "poly": {"factors": [{"lambda": 1, "p": 1}, {"lambda": 2, "p": 1}]},
            "operator": {"dense": [[0, 0], [0, 0]]},
            "f": [4, 6]
        }"#,
    );
    let out = run(&["solve", problem.to_str().unwrap()]);
    assert!(out.status.success());
    let value = stdout_json(&out);
    assert_eq!(value["exact_zero"], serde_json::json!(true));
    assert_eq!(value["reconstruction"], serde_json::json!([2, 3]));
}

#[test]
fn koszul_noncommuting_exits_2_naming_the_pair() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_file(
        &dir,
        "koszul.json",
        r#"{"factors": [{"dense": [[1, 0], [0, 2]]}, {"dense": [[0, 1], [0, 0]]}]}"#,
    );
    let out = run(&["koszul", problem.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("0 and 1"), "stderr must name the failing pair: {}", err);
}

#[test]
fn koszul_commuting_family_reports_exactness() {
    let dir = tempfile::tempdir().unwrap();
    // multiplication by x and x+1 on Q[x]/(x(x+1)), plus Bezout homotopy
    let problem = write_file(
        &dir,
        "koszul.json",
        r#"{
            "factors": [{"dense": [[0, 0], [1, -1]]}, {"dense": [[1, 0], [1, 0]]}],
            "homotopy": [{"dense": [[-1, 0], [0, -1]]}, {"dense": [[1, 0], [0, 1]]}]
        }"#,
    );
    let out = run(&["koszul", problem.to_str().unwrap()]);
    assert!(out.status.success());
    let value = stdout_json(&out);
    assert_eq!(value["complex"]["is_complex"], serde_json::json!(true));
    assert_eq!(value["homotopy"]["holds"], serde_json::json!(true));
    let all_exact = value["exactness"]
        .as_array()
        .unwrap()
        .iter()
        .all(|g| g["exact"] == serde_json::json!(true));
    assert!(all_exact);
}

#[test]
fn certify_unit_and_not_unit_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let unit = write_file(
        &dir,
        "unit.json",
        r#"{"generators": [
            {"nvars": 1, "terms": [{"exp": [1], "num": 1}]},
            {"nvars": 1, "terms": [{"exp": [1], "num": 1}, {"exp": [0], "num": 1}]}
        ]}"#,
    );
    let out = run(&["certify", unit.to_str().unwrap()]);
    assert!(out.status.success());
    let value = stdout_json(&out);
    assert_eq!(value["certificate"]["status"], serde_json::json!("unit"));

    // the emitted certificate re-validates
    let cert_file = write_file(&dir, "cert.json", &String::from_utf8(out.stdout).unwrap());
    let verify = run(&["verify", cert_file.to_str().unwrap()]);
    assert!(verify.status.success());

    // {x, y}: common zero, mathematical failure -> exit 1
    let not_unit = write_file(
        &dir,
        "notunit.json",
        r#"{"generators": [
            {"nvars": 2, "terms": [{"exp": [1, 0], "num": 1}]},
            {"nvars": 2, "terms": [{"exp": [0, 1], "num": 1}]}
        ]}"#,
    );
    let out = run(&["certify", not_unit.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn certify_budget_exceeded_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    // cyclic-3 with an absurdly small budget
    let problem = write_file(
        &dir,
        "cyclic.json",
        r#"{"generators": [
            {"nvars": 3, "terms": [{"exp": [1,0,0], "num": 1}, {"exp": [0,1,0], "num": 1}, {"exp": [0,0,1], "num": 1}]},
            {"nvars": 3, "terms": [{"exp": [1,1,0], "num": 1}, {"exp": [0,1,1], "num": 1}, {"exp": [1,0,1], "num": 1}]},
            {"nvars": 3, "terms": [{"exp": [1,1,1], "num": 1}, {"exp": [0,0,0], "num": -1}]}
        ]}"#,
    );
    let out = opkit()
        .args(["--budget-terms", "12", "certify", problem.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));

    // the OPKIT_BUDGET environment variable does the same
    let out = opkit()
        .env("OPKIT_BUDGET", "12")
        .args(["certify", problem.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn gjms_sphere_preset_with_table() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_file(
        &dir,
        "gjms.json",
        r#"{"n": 5, "k": 2, "Sc": 20, "model": {"entries": [[1, 1], [3, 2]]}, "f": [5, 1, 2]}"#,
    );
    let out = run(&["gjms", problem.to_str().unwrap()]);
    assert!(out.status.success());
    let value = stdout_json(&out);
    assert_eq!(value["solve"]["exact_zero"], serde_json::json!(true));
    assert_eq!(value["solve"]["sign_audit"]["relative_sign"], serde_json::json!(-1));
    assert_eq!(value["b"][0], serde_json::json!(0));

    // plot-ready CSV table
    let out = run(&["--table", "gjms", problem.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("entry,lap_eigenvalue,y_eigenvalue,p_k,deviation_vs_direct"));
    assert_eq!(text.lines().count(), 3); // header + 2 model entries
}

#[test]
fn gjms_float_mode_sphere() {
    let dir = tempfile::tempdir().unwrap();
    // small sphere model in float mode (S^5 keeps all factors
    // invertible); f of the full model dimension 1 + 6 = 7
    let problem = write_file(
        &dir,
        "gjms_float.json",
        r#"{"n": 5, "k": 3, "model": {"preset": "unit-sphere", "l_max": 1},
            "f": [0.5, 1.0, -1.0, 2.0, 0.25, -0.75, 1.5]}"#,
    );
    let out = opkit()
        .args(["--mode", "float", "gjms", problem.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let value = stdout_json(&out);
    let residual = value["solve"]["residual"].as_f64().unwrap();
    assert!(residual <= 1e-10, "residual {}", residual);
}

#[test]
fn decompose_grouped_real_mode() {
    let dir = tempfile::tempdir().unwrap();
    // x (x^2 + 1): one real root and a conjugate pair
    let problem = write_file(
        &dir,
        "real.json",
        r#"{
            "poly": {"factors": [
                {"lambda": 0, "p": 1},
                {"lambda": {"re": 0, "im": 1}, "p": 1},
                {"lambda": {"re": 0, "im": -1}, "p": 1}
            ]},
            "real_partition": true
        }"#,
    );
    let out = run(&["decompose", problem.to_str().unwrap()]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let value = stdout_json(&out);
    assert_eq!(
        value["certificate"]["certificate_mode"],
        serde_json::json!("grouped-real")
    );
    // grouped certificates re-validate too
    let cert_file = write_file(&dir, "cert.json", &String::from_utf8(out.stdout).unwrap());
    let verify = run(&["verify", cert_file.to_str().unwrap()]);
    assert!(verify.status.success());
}
