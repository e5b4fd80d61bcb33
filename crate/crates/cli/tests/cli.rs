use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn nefcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nefcert")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn search_into(dir: &Path, name: &str, p: &str, seed: &str) -> std::path::PathBuf {
    let out = dir.join(name);
    let o = nefcert(&["search", "--p", p, "--seed", seed, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

#[test]
fn search_verify_round_trip_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = search_into(dir.path(), "a.json", "3", "11");
    let b = search_into(dir.path(), "b.json", "3", "11");
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let o = nefcert(&["verify", a.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches("[PASS]").count(), 7);
    let o = nefcert(&["--format", "json", "verify", a.to_str().unwrap()]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["valid"], Value::Bool(true));
    assert_eq!(v["config"]["command"], "verify");
}

#[test]
fn exit_code_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let good = search_into(dir.path(), "good.json", "5", "3");
    let mut cert: Value = serde_json::from_slice(&std::fs::read(&good).unwrap()).unwrap();
    cert["gamma"] = serde_json::json!([0, 0]);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&cert).unwrap()).unwrap();
    let o = nefcert(&["verify", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("[FAIL] (3)"));

    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "not json").unwrap();
    assert_eq!(nefcert(&["verify", junk.to_str().unwrap()]).status.code(), Some(2));
    let missing = dir.path().join("missing.json");
    assert_eq!(nefcert(&["verify", missing.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(nefcert(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(nefcert(&["search", "--p", "x"]).status.code(), Some(2));
    assert_eq!(nefcert(&["search", "--p", "4"]).status.code(), Some(2));
    assert_eq!(nefcert(&["lattice", "--base", "p3"]).status.code(), Some(2));
    assert_eq!(nefcert(&["curve-info", "--p", "3", "--f", "1,0,0,0,0,0"]).status.code(), Some(2));
}

#[test]
fn failed_search_writes_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fail.json");
    let o = nefcert(&[
        "search", "--p", "3", "--seed", "7", "--curves", "0", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(v["status"], "failed");
    assert_eq!(v["stats"]["curves"], 0);
}

#[test]
fn lattice_example() {
    let o = nefcert(&["lattice", "--base", "p1xp1", "--d", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("Picard number rho = 5"));
    assert!(s.contains("6 exceptional curves"));
    let o = nefcert(&["--format", "json", "lattice", "--base", "p2", "--d", "4"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["exceptional_count"], 4);
    assert_eq!(v["picard_number"], 5);
    assert_eq!(v["signature"], serde_json::json!([1, 4]));
}

#[test]
fn curve_info_examples() {
    let o = nefcert(&["curve-info", "--p", "3", "--f", "1,0,0,0,0,1"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("ordinary: false"));
    assert!(s.contains("Cartier-Manin: [[0, 0], [1, 0]]"));
    let o = nefcert(&["--format", "json", "curve-info", "--p", "3", "--f", "1,0,0,0,1,0"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["ordinary"], true);
    assert_eq!(v["cartier_manin"], serde_json::json!([["0", "1"], ["1", "0"]]));
    assert_eq!(v["genus"], 2);
}

#[test]
fn identical_flags_give_identical_stdout() {
    let a = nefcert(&["--format", "json", "search", "--p", "3", "--seed", "5"]);
    let b = nefcert(&["--format", "json", "search", "--p", "3", "--seed", "5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
