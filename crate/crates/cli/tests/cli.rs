use std::process::{Command, Output};

use serde_json::Value;

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pancake-lab")).args(args).output().expect("binary runs")
}

fn without_timings(raw: &[u8]) -> Value {
    let mut v: Value = serde_json::from_slice(raw).unwrap();
    v.as_object_mut().unwrap().remove("timings");
    v
}

#[test]
fn edge_list_line_counts() {
    let dir = tempfile::tempdir().unwrap();
    for (n, lines) in [(3, 6), (4, 36), (5, 240)] {
        let path = dir.path().join(format!("p{n}.txt"));
        let out = lab(&["build", "--n", &n.to_string(), "--emit", path.to_str().unwrap(), "--format", "edgelist"]);
        assert!(out.status.success());
        assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), lines);
    }
}

#[test]
fn json_export_of_p4() {
    let out = lab(&["build", "--n", "4", "--format", "json"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["vertices"].as_array().unwrap().len(), 24);
    assert_eq!(v["edges"].as_array().unwrap().len(), 36);
}

#[test]
fn n9_is_a_scale_refusal() {
    let out = lab(&["verify", "--n", "9", "--suite", "all"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("scale refusal"));
    assert_eq!(lab(&["build", "--n", "9"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(lab(&["verify", "--n", "4", "--suite", "nonsense"]).status.code(), Some(2));
    assert_eq!(lab(&["verify"]).status.code(), Some(2));
}

#[test]
fn n5_all_suites_pass_and_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = lab(&["verify", "--n", "5", "--suite", "all", "--out", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    let (ra, rb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    // `timings` is the last field; everything before it must match byte for byte.
    let cut = |raw: &[u8]| {
        let text = String::from_utf8(raw.to_vec()).unwrap();
        text[..text.find("\"timings\"").unwrap()].to_string()
    };
    assert_eq!(cut(&ra), cut(&rb));
    let report = without_timings(&ra);
    assert_eq!(report["status"], "pass");
    let aut = report["suites"].as_array().unwrap().iter().find(|s| s["suite"] == "automorphisms").unwrap();
    assert_eq!(aut["certificate"]["grr"], true);
}

#[test]
fn n3_connectivity_expected_negative() {
    let out = lab(&["verify", "--n", "3", "--suite", "connectivity"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let suite = &v["suites"][0];
    assert_eq!(suite["status"], "pass");
    assert_eq!(suite["certificate"]["super"]["result"], false);
    assert_eq!(suite["mode"], "exhaustive");
}

#[test]
fn module_certificates() {
    let out = lab(&["verify", "connectivity", "--n", "4", "--exhaustive"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["kappa"], 3);
    assert_eq!(v["super"]["mode"], "exhaustive");
    assert_eq!(v["super"]["result"], true);
    assert_eq!(v["hyper"]["result"], true);

    let v: Value = serde_json::from_slice(&lab(&["verify", "domination", "--n", "4"]).stdout).unwrap();
    assert_eq!(v["count"], 4);
    assert_eq!(v["sets"][0]["size"], 6);
    assert_eq!(v["sets"][0]["members"][0], serde_json::json!([1, 2, 3, 4]));

    let v: Value = serde_json::from_slice(&lab(&["verify", "automorphisms", "--n", "5"]).stdout).unwrap();
    assert_eq!(v["order"], 120);
    assert_eq!(v["regular"], true);
    assert_eq!(v["grr"], true);
    assert_eq!(v["edge_orbits"], 4);
    assert_eq!(v["generators"][0].as_array().unwrap().len(), 120);
}

#[test]
fn exhaustive_flag_is_never_downgraded() {
    let out = lab(&["verify", "--n", "6", "--suite", "connectivity", "--exhaustive"]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["suites"][0]["status"], "refused");
}

#[test]
fn budget_env_var_caps_suites() {
    let out = Command::new(env!("CARGO_BIN_EXE_pancake-lab"))
        .args(["verify", "--n", "6", "--suite", "automorphisms"])
        .env("PANCAKE_LAB_BUDGET_SECS", "0.000001")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let bad = Command::new(env!("CARGO_BIN_EXE_pancake-lab"))
        .args(["verify", "--n", "3", "--suite", "structure"])
        .env("PANCAKE_LAB_BUDGET_SECS", "soon")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn n4_neighborhood_suite_reports_violation() {
    let out = lab(&["verify", "--n", "4", "--suite", "thm31"]);
    assert_eq!(out.status.code(), Some(1));
}
