//! End-to-end smoke tests of the command-line front end: every verb, the
//! exit-code contract (0 ok, 1 domain error, 2 parse error), and output
//! determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_skeleta"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("examples/data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("run skeleta")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn normalize_and_eq() {
    let sr = data("simplex2.sr");
    let o = run(&["normalize", sr.to_str().unwrap(), "--expr", "X1 + X2 + 1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "0");
    let o = run(&[
        "eq",
        sr.to_str().unwrap(),
        "--lhs",
        "X1 + X2",
        "--rhs",
        "-1",
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "equal");
    let o = run(&["eq", sr.to_str().unwrap(), "--lhs", "X1", "--rhs", "X2", "--format", "json"]);
    assert!(stdout(&o).contains("\"verdict\":\"distinct\""));
}

#[test]
fn spec_emits_points_json() {
    let o = run(&["spec", data("simplex2.sr").to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], "skeleta/1");
    assert_eq!(v["points"].as_array().unwrap().len(), 3);
}

#[test]
fn localize_verbs() {
    let sr = data("disc2.sr");
    let o = run(&[
        "localize",
        sr.to_str().unwrap(),
        "--at",
        "X",
        "--bound",
        "free",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["generators"].as_array().unwrap().len(), 3);
    // a non-integral element is a domain error: exit code 1
    let o = run(&[
        "localize",
        data("simplex2.sr").to_str().unwrap(),
        "--at",
        "1",
        "--bound",
        "zero",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn polytope_verbs() {
    let q = data("quad.json");
    let o = run(&["polytope", "faces", "--polytope", q.to_str().unwrap()]);
    assert!(o.status.success());
    let o = run(&[
        "polytope",
        "eval",
        "--polytope",
        q.to_str().unwrap(),
        "--expr",
        "U + 1 v V + 1 v -1",
        "--point",
        "-2,-3",
    ]);
    assert_eq!(stdout(&o).trim(), "-1");
    let o = run(&["polytope", "spec", "--polytope", q.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["points"].as_array().unwrap().len(), 4);
}

#[test]
fn dualcx_and_ks() {
    let o = run(&["dualcx", "--ambient", "2", "--mults", "1,1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["points"].as_array().unwrap().len(), 3);
    let o = run(&["ks", "--n", "4"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["points"].as_array().unwrap().len(), 8);
    let o = run(&["ks", "--n", "4", "--format", "svg"]);
    let s = stdout(&o);
    assert!(s.starts_with("<svg"));
    assert!(s.contains(">v2<"));
    // n < 3 is a domain error
    let o = run(&["ks", "--n", "2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn trop_curve_and_relations() {
    let o = run(&[
        "trop",
        "--poly",
        "x + y + t",
        "--clip",
        "[-4,1]^2",
        "--resolution",
        "1/8",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["vertices"].as_array().unwrap().len(), 1);
    assert_eq!(v["rays"].as_array().unwrap().len(), 3);
    assert_eq!(v["oracle_agrees"], true);
    let o = run(&[
        "trop",
        "--poly",
        "x + y + t",
        "--polytope",
        data("quad.json").to_str().unwrap(),
        "--relations",
    ]);
    assert!(stdout(&o).lines().count() >= 3);
}

#[test]
fn cover_check_verb() {
    let o = run(&[
        "cover-check",
        data("disc2.sr").to_str().unwrap(),
        "--parts",
        "X;Y",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["holds"], true);
    assert_eq!(v["join_open"].as_array().unwrap().len(), 3);
}

#[test]
fn accept_single_case() {
    let o = run(&["accept", "--case", "1", "--seed", "7"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("PASS  1"));
}

#[test]
fn parse_errors_exit_2() {
    let bad = std::env::temp_dir().join("skeleta_bad.sr");
    std::fs::write(&bad, "semiring over Zv; gens X contracting; rel X =;").unwrap();
    let o = run(&["spec", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr).into_owned();
    assert!(err.contains("parse error"), "stderr was: {err}");
}

#[test]
fn deterministic_output() {
    let sr = data("simplex2.sr");
    let a = stdout(&run(&["spec", sr.to_str().unwrap()]));
    let b = stdout(&run(&["spec", sr.to_str().unwrap()]));
    assert_eq!(a, b);
    let a = stdout(&run(&["ks", "--n", "5"]));
    let b = stdout(&run(&["ks", "--n", "5"]));
    assert_eq!(a, b);
}
