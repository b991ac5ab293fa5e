use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn orba(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orba"))
        .args(args)
        .env_remove("ORBA_SEED")
        .output()
        .expect("binary runs")
}

fn scenarios_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn reports(out: &Output) -> Vec<Value> {
    match serde_json::from_slice(&out.stdout).expect("stdout is JSON") {
        Value::Array(v) => v,
        v => vec![v],
    }
}

#[test]
fn shipped_scenarios_pass() {
    let mut seen = 0;
    for entry in std::fs::read_dir(scenarios_dir()).unwrap() {
        let path = entry.unwrap().path();
        let out = orba(&["run", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}: {}", path.display(), String::from_utf8_lossy(&out.stdout));
        for r in reports(&out) {
            assert_eq!(r["schema_version"], 1);
            assert_eq!(r["passed"], true, "{r}");
            seen += 1;
        }
    }
    assert!(seen >= 6);
}

#[test]
fn every_example_reproduces() {
    let list = orba(&["list-examples"]);
    let text = String::from_utf8(list.stdout).unwrap();
    let ids: Vec<&str> = text.lines().filter_map(|l| l.split_whitespace().next()).collect();
    assert!(ids.contains(&"alternating"));
    for id in ids {
        let out = orba(&["reproduce", id]);
        assert_eq!(out.status.code(), Some(0), "{id}");
        let r = &reports(&out)[0];
        assert_eq!(r["seed"], 42);
        assert!(r["checks"].as_array().is_some_and(|c| !c.is_empty()), "{id} has no checks");
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let failing = dir.path().join("schedule.json");
    std::fs::write(
        &failing,
        r#"{"name": "bad-tail",
            "spaces": {"l": {"dim": 1, "cone": {"kind": "orthant", "dim": 1},
                             "norm": {"kind": "weighted_l1", "weights": [1]}}},
            "operation": {"op": "dominate", "epsilon": 0.1,
              "function": {"atoms": [{"label": "1", "weight": 1}], "values": [[1]],
                           "carrier": "l", "tail_bound": 0.5}}}"#,
    )
    .unwrap();
    let out = orba(&["run", failing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(reports(&out)[0]["error"]["kind"], "schedule");

    let invalid = dir.path().join("invalid.json");
    std::fs::write(&invalid, r#"{"name": "x", "operation": {"op": "norm", "space": "missing", "x": [1]}}"#).unwrap();
    assert_eq!(orba(&["run", invalid.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(orba(&["run", "/nonexistent/scenario.json"]).status.code(), Some(2));
    assert_eq!(orba(&["reproduce", "no-such-example"]).status.code(), Some(2));

    let empty = dir.path().join("empty.json");
    std::fs::write(&empty, r#"{"scenarios": []}"#).unwrap();
    let out = orba(&["run", empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(reports(&out).is_empty());
}

#[test]
fn seed_flag_and_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_orba"))
        .args(["reproduce", "renorm"])
        .env("ORBA_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(reports(&out)[0]["seed"], 9);
    let out = orba(&["--seed", "5", "reproduce", "renorm"]);
    assert_eq!(reports(&out)[0]["seed"], 5);
}

#[test]
fn out_and_csv_files() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("alternating.json");
    let table = dir.path().join("alternating.csv");
    let out = orba(&[
        "--out",
        report.to_str().unwrap(),
        "--csv",
        table.to_str().unwrap(),
        "reproduce",
        "alternating",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["name"], "alternating");
    let csv = std::fs::read_to_string(&table).unwrap();
    assert!(csv.lines().count() >= 5, "{csv}");
    assert!(csv.contains("n_norm_x"));
}

#[test]
fn schemas_are_json() {
    for kind in ["scenario", "report", "space", "cover", "function"] {
        let out = orba(&["schema", kind]);
        assert_eq!(out.status.code(), Some(0));
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert!(v.is_object(), "{kind}");
    }
}

#[test]
fn convolve_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let mu = dir.path().join("mu.json");
    let f = dir.path().join("f.json");
    std::fs::write(&mu, r#"{"support": [[0, 0.5], [2, 0.5]]}"#).unwrap();
    std::fs::write(&f, r#"{"values": [1, 0, 0, 0, 0]}"#).unwrap();
    let out = orba(&[
        "convolve",
        "--group",
        "z5",
        "--mu",
        mu.to_str().unwrap(),
        "--f",
        f.to_str().unwrap(),
        "--check-integral",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(reports(&out)[0]["passed"], true);
}
