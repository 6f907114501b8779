use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_amfcong"))
}

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus/v1").join(name)
}

fn run(args: &[&str]) -> (i32, serde_json::Value) {
    let out = bin().args(args).output().unwrap();
    let report = serde_json::from_slice(&out.stdout).unwrap_or(serde_json::Value::Null);
    (out.status.code().unwrap(), report)
}

fn tmp(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("amfcong-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn validate_tiny_model() {
    let (code, r) = run(&["validate", corpus("tiny.model.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["validation"]["index_k"], "2");
    assert_eq!(r["results"]["validation"]["index_kp"], "2");
}

#[test]
fn broken_mass_formula_exits_two() {
    let text = std::fs::read_to_string(corpus("ribet-q7-x5.model.json")).unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    doc["w_k"]["a1"] = serde_json::json!("2");
    let p = tmp("broken.json", &doc.to_string());
    let (code, r) = run(&["validate", p.to_str().unwrap()]);
    assert_eq!(code, 2);
    let failures = r["results"]["validation"]["failures"].as_array().unwrap();
    assert!(failures.iter().any(|f| f["invariant"] == "MassFormula"));
}

#[test]
fn malformed_document_exits_one() {
    let p = tmp("malformed.json", "{\"x_k\": [");
    let (code, r) = run(&["validate", p.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(r["results"]["error"]["kind"], "parse");
}

#[test]
fn raise_bundled_model() {
    let path = corpus("flag-s5.model.json");
    let (code, r) = run(&["raise", path.to_str().unwrap(), "--ell", "3", "--character", "std"]);
    assert_eq!(code, 0);
    let cert = &r["results"]["certificate"];
    assert!(cert["n"].as_i64().unwrap() >= 1);
    assert_eq!(cert["status"], "found");
    assert!(r["warnings"][0].as_str().unwrap().contains("class-partition surrogate"));
}

#[test]
fn raise_reports_are_deterministic() {
    let path = corpus("ribet-q7-x5.model.json");
    let args = ["raise", path.to_str().unwrap(), "--ell", "5", "--character", "f", "--rank-one"];
    let a = bin().args(args).output().unwrap().stdout;
    let b = bin().args(args).output().unwrap().stdout;
    assert_eq!(a, b);
}

#[test]
fn constant_character_exits_three() {
    let (code, r) = run(&["raise", corpus("tiny.model.json").to_str().unwrap(), "--ell", "3", "--character", "#0"]);
    assert_eq!(code, 3);
    assert_eq!(r["results"]["error"]["kind"], "abelian");
}

#[test]
fn ell_dividing_index_exits_two() {
    let (code, r) = run(&["raise", corpus("tiny.model.json").to_str().unwrap(), "--ell", "2", "--character", "0"]);
    assert_eq!(code, 2);
    assert!(r["results"]["error"]["message"].as_str().unwrap().contains("[K':J]"));
}

#[test]
fn classify_gsp4_with_satake_check() {
    let (code, r) = run(&["classify", "--group", "gsp4", "--q", "3", "--ell", "7", "--satake-check", "1,3,2,6"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["condition"]["holds"], true);
    assert_eq!(r["results"]["condition"]["refinement"], true);
    assert_eq!(r["results"]["allowed_types"], serde_json::json!(["I", "IIa", "IIIa"]));
}

#[test]
fn classify_gl3_refuses_seven_at_two() {
    let (code, r) = run(&["classify", "--group", "gl3", "--q", "2", "--ell", "7"]);
    assert_eq!(code, 2);
    assert!(r["results"]["error"]["message"].as_str().unwrap().contains("1+q+q^2"));
}

#[test]
fn classify_profile_and_parameters() {
    let (code, r) = run(&["classify", "--group", "gsp4", "--q", "3", "--type", "IVa", "1/9", "1/3", "1"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["profile"]["dims"], serde_json::json!([0, 0, 0, 0, 1]));
    assert_eq!(r["results"]["family"], "IV");
}

#[test]
fn bad_arguments_exit_one() {
    let out = bin().args(["raise", "--ell", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn selftest_detects_corrupted_table() {
    let (code, r) = run(&["selftest", "--corrupt-table-d", "--seed", "11"]);
    assert_eq!(code, 6);
    assert_eq!(r["results"]["seed"], 11);
    assert_eq!(r["results"]["first_failure"], "01 table fidelity");
    assert!(r["results"]["criteria"][0]["detail"].as_str().unwrap().contains("checksum"));
}
