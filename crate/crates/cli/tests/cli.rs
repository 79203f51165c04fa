use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn here(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(rel)
}

fn chern(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chern")).args(args).env_remove("CHERN_CHAR").output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn result<'a>(report: &'a Value, op: &str) -> &'a Value {
    report["results"].as_array().unwrap().iter().find(|r| r["op"] == op).unwrap()
}

#[test]
fn golden_report_is_stable() {
    let job = here("tests/jobs/two_plane.json");
    let out = chern(&["compute", job.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let golden = fs::read_to_string(here("tests/golden/two_plane.json")).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim_end(), golden.trim_end());
}

#[test]
fn two_plane_values() {
    let job = here("tests/jobs/two_plane.json");
    let rep = stdout_json(&chern(&["compute", job.to_str().unwrap()]));
    assert_eq!(result(&rep, "hilbert-coefficients")["result"]["e"], serde_json::json!([2, -1, 0]));
    assert_eq!(result(&rep, "hdeg")["result"]["hdeg"], 3);
    assert_eq!(result(&rep, "classify")["result"]["h"], serde_json::json!([0, 1]));
    assert_eq!(result(&rep, "estimate-lambda")["result"]["distinct"], serde_json::json!([-1]));
    assert_eq!(rep["pass"], true);
}

#[test]
fn free_module_coefficients_and_csv() {
    let job = here("tests/jobs/free_plane.json");
    let rep = stdout_json(&chern(&["compute", job.to_str().unwrap()]));
    assert_eq!(result(&rep, "hilbert-coefficients")["result"]["e"], serde_json::json!([1, 0, 0]));
    let csv = chern(&["compute", job.to_str().unwrap(), "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("job,op,target,n,value\n"));
    assert!(text.contains("free,hilbert-samuel,m,3,10\n"));
}

#[test]
fn field_from_environment() {
    let job = here("tests/jobs/free_plane.json");
    let out = Command::new(env!("CARGO_BIN_EXE_chern"))
        .args(["compute", job.to_str().unwrap()])
        .env("CHERN_CHAR", "101")
        .output()
        .unwrap();
    assert_eq!(stdout_json(&out)["field"], "GF(101)");
}

#[test]
fn compute_is_byte_identical_across_runs() {
    let job = here("tests/jobs/two_plane.json");
    let a = chern(&["compute", job.to_str().unwrap(), "--seed", "7"]);
    let b = chern(&["compute", job.to_str().unwrap(), "--seed", "7", "--jobs", "1"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn malformed_polynomial_exits_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(
        &path,
        r#"{"name":"bad","ring":{"variables":["x","y"]},"module":{"ideal":["x*+y"]},"operations":[{"op":"dimension"}]}"#,
    )
    .unwrap();
    let out = chern(&["compute", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("position"), "{err}");
}

#[test]
fn unknown_field_in_job_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, r#"{"name":"bad","ring":{"variables":["x"]},"modul":{}}"#).unwrap();
    assert_eq!(chern(&["compute", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn empty_corpus_gives_empty_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let out = chern(&["check", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let rep = stdout_json(&out);
    assert_eq!(rep["matrix"], serde_json::json!({}));
    assert_eq!(rep["pass"], true);
}

#[test]
fn injected_cm_claim_fails_only_that_check() {
    let dir = tempfile::tempdir().unwrap();
    let mut job: Value =
        serde_json::from_str(&fs::read_to_string(here("../../corpus/line_embedded.json")).unwrap()).unwrap();
    job["claims"]["cohen_macaulay"] = Value::Bool(true);
    fs::write(dir.path().join("line_embedded.json"), job.to_string()).unwrap();
    let out = chern(&["check", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let rep = stdout_json(&out);
    let failing: Vec<&String> = rep["matrix"]
        .as_object()
        .unwrap()
        .iter()
        .filter(|(_, row)| row.as_object().unwrap().values().any(|c| c["pass"] == false))
        .map(|(k, _)| k)
        .collect();
    assert_eq!(failing, vec!["claims"]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("FAIL claims on line_embedded"), "{err}");
}

#[test]
fn duplicate_names_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(here("../../corpus/free_plane.json")).unwrap();
    fs::write(dir.path().join("a.json"), &text).unwrap();
    fs::write(dir.path().join("b.json"), &text).unwrap();
    assert_eq!(chern(&["check", dir.path().to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn suite_output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    fs::create_dir(&corpus).unwrap();
    fs::copy(here("../../corpus/line_embedded.json"), corpus.join("line_embedded.json")).unwrap();
    let out_path = dir.path().join("report.json");
    let a = chern(&["check", corpus.to_str().unwrap(), "--out", out_path.to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0));
    let b = chern(&["check", corpus.to_str().unwrap()]);
    assert_eq!(fs::read(&out_path).unwrap(), b.stdout);
}
