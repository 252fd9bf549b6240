use std::path::PathBuf;
use std::process::Command;

use coincalc::cli::{main_with_args, QueryResponse, Status};
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn machine(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = ["coincalc", "--format", "machine"].iter().chain(args).copied();
    let code = main_with_args(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

fn parsed(args: &[&str]) -> (i32, Value) {
    let (code, out) = machine(args);
    (code, serde_json::from_str(&out).unwrap())
}

#[test]
fn filtration_of_rp6() {
    let (code, v) = parsed(&["filtration", "--space", "rp", "--nprime", "6", "--m", "9", "--q", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "ok");
    assert_eq!(v["payload"]["subgroup"]["group"]["torsion"], serde_json::json!([2]));
    assert_eq!(v["payload"]["ambient"]["torsion"], serde_json::json!([24]));
    assert_eq!(v["payload"]["pi_c"]["group"]["torsion"], serde_json::json!([]));
    let trace: Vec<&str> = v["rule_trace"].as_array().unwrap().iter().map(|r| r.as_str().unwrap()).collect();
    assert!(trace.contains(&"filtration-projective") && trace.contains(&"stable-range-boundary"), "{trace:?}");
}

#[test]
fn classify_row_one() {
    let (code, v) = parsed(&["classify", "--space", "rp", "--nprime", "6", "--m", "9", "--f1", "12", "--f2", "12"]);
    assert_eq!(code, 0);
    let verdict = &v["payload"]["verdict"];
    assert_eq!(verdict["row"], 1);
    assert_eq!((&verdict["nielsen"], &verdict["mcc"], &verdict["mc"]), (&0.into(), &0.into(), &0.into()));
    assert_eq!(verdict["loose"], true);
}

#[test]
fn infinite_minimum_is_spelled_out() {
    let (_, v) = parsed(&["classify", "--space", "sphere", "--n", "2", "--m", "3", "--f1", "1", "--f2", "0"]);
    assert_eq!(v["payload"]["verdict"]["mc"], "infinity");
}

#[test]
fn machine_output_round_trips() {
    for args in [
        &["pi-space", "--space", "grassmann", "--r", "6", "--m", "5"][..],
        &["filtration", "--space", "cp", "--nprime", "3", "--m", "8", "--q", "inf"],
        &["loose", "--space", "sphere", "--n", "4", "--m", "4", "--f1", "1", "--f2", "-1"],
        &["validate-db"],
    ] {
        let (_, out) = machine(args);
        let r: QueryResponse = serde_json::from_str(&out).unwrap();
        assert_eq!(r.to_machine() + "\n", out, "{args:?}");
        assert_eq!(machine(args).1, out, "output must be deterministic");
    }
}

#[test]
fn gaps_are_unknown_not_errors() {
    let (code, v) = parsed(&["classify", "--space", "hp", "--nprime", "2", "--m", "11", "--f1", "1,0", "--f2", "1,0"]);
    assert_eq!(code, 2, "{v}");
    assert_eq!(v["status"], "unknown");
    assert!(v["message"].as_str().is_some());
}

#[test]
fn user_errors_exit_one() {
    let (code, v) = parsed(&["classify", "--space", "rp", "--nprime", "6", "--m", "9", "--f1", "1,1", "--f2", "0"]);
    assert_eq!((code, v["status"].as_str()), (1, Some("error")));
    let (code, v) = parsed(&["pi-space", "--space", "rp", "--m", "9"]);
    assert_eq!(code, 1);
    assert!(v["message"].as_str().unwrap().contains("--nprime"));
    let mut err = Vec::new();
    assert_eq!(main_with_args(["coincalc", "bogus"], &mut Vec::new(), &mut err), 1);
    assert!(!err.is_empty());
}

#[test]
fn seeded_faults_are_named() {
    for (file, key) in [
        ("non_bijective_suspension.json", "suspension(m=9, n=6)"),
        ("missing_pi8_s5.json", "pi(m=8, n=5)"),
        ("non_involutive_antipodal.json", "antipodal(m=13, n=6)"),
    ] {
        let path = fixture(file);
        let (code, v) = parsed(&["--db", path.to_str().unwrap(), "validate-db"]);
        assert_eq!(code, 1, "{file}");
        let keys: Vec<&str> = v["payload"]["failures"]
            .as_array()
            .unwrap()
            .iter()
            .map(|f| f["key"].as_str().unwrap())
            .collect();
        assert!(keys.contains(&key), "{file}: {keys:?}");
    }
}

#[test]
fn binary_reads_database_from_environment() {
    let bin = env!("CARGO_BIN_EXE_coincalc");
    let out = Command::new(bin)
        .args(["--format", "machine", "validate-db"])
        .env("COINCALC_DB", fixture("missing_pi8_s5.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let r: QueryResponse = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r.status, Status::Error);

    let out = Command::new(bin).args(["pi-sphere", "--m", "9", "--n", "6"]).env_remove("COINCALC_DB").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("Z24"));
}
