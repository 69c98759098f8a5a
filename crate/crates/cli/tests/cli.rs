//! The binary's commands, outputs and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

use scrollkit::Field;
use scrollkit_cli::suites::{run_instance, Suite};
use serde_json::Value;

fn scrollkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scrollkit")).args(args).output().expect("binary runs")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("scrollkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn bundle_reports_cohomology() {
    let out = scrollkit(&["--field", "Q", "bundle", "--split", "3,-2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["splitting"], serde_json::json!([3, -2]));
    assert_eq!((v["h0"].as_u64(), v["h1"].as_u64(), v["degree"].as_i64()), (Some(4), Some(1), Some(1)));
}

#[test]
fn disguised_bundle_file_feeds_eltrans() {
    let dir = std::env::temp_dir().join(format!("scrollkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let b = dir.join("b.json");
    let out = scrollkit(&["--seed", "4", "bundle", "--split", "1,-3", "--disguise", "--json-out", b.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let t = scratch("t.json", r#"[{"point": "inf", "generators": [{"pole": 1, "vector": [["1"], ["2"]]}]}]"#);
    let out = scrollkit(&["eltrans", "--bundle", b.to_str().unwrap(), "--torsion", t.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["degree"], 1);
    assert_eq!(v["vtilde"]["degree"], -1);
    assert_eq!(v["scheme"].as_array().map(Vec::len), Some(1));
}

#[test]
fn scheme_input_is_normalized_with_a_note() {
    let b = scratch(
        "o.json",
        r#"{"field": "Fp:7", "rank": 2, "lattice0": [[["1"], ["0"]], [["0"], ["1"]]], "latticeInf": [[["1"], ["0"]], [["0"], ["1"]]]}"#,
    );
    let z = scratch("z.json", r#"[{"x": "1", "k": 1, "jet": [["2"], ["4"]]}]"#);
    let out = scrollkit(&["eltrans", "--bundle", b.to_str().unwrap(), "--scheme", z.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("normalized"));
    assert_eq!(stdout_json(&out)["vz"]["splitting"], serde_json::json!([1, 0]));
}

#[test]
fn census_counts() {
    let out = scrollkit(&["census", "--q", "2", "--r", "2", "--d", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!((v["quot"].as_u64(), v["hilb"].as_u64()), (Some(27), Some(27)));
    assert_eq!(scrollkit(&["census", "--q", "4", "--r", "2", "--d", "1"]).status.code(), Some(2));
    assert_eq!(scrollkit(&["census", "--q", "3", "--r", "2", "--d", "2", "--budget", "5"]).status.code(), Some(2));
}

#[test]
fn verify_runs_selected_suites() {
    let out = scrollkit(&["--seed", "9", "--samples", "2", "verify", "--ggrr", "--spans"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("PASS ggrr Fp:101 2/2"));
    assert!(text.contains("PASS spans Fp:101 2/2"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(scrollkit(&["verify"]).status.code(), Some(2));
    assert_eq!(scrollkit(&["verify", "--nope"]).status.code(), Some(2));
    assert_eq!(scrollkit(&["--field", "F6", "bundle", "--split", "1"]).status.code(), Some(2));
    assert_eq!(scrollkit(&["--field", "Q", "verify", "--census"]).status.code(), Some(2));
}

#[test]
fn malformed_input_reports_its_location() {
    let p = scratch("bad.json", "{\"field\": \"Q\", \"rank\": 1,\n \"lattice0\": [[[\"1\"]]],");
    let out = scrollkit(&["bundle", "--input", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("at byte"));
    let p = scratch("bad2.json", r#"{"field": "Q", "rank": 1, "lattice0": [[["1/0"]]], "latticeInf": [[["1"]]]}"#);
    let out = scrollkit(&["bundle", "--input", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("$.lattice0[0][0]"));
}

#[test]
fn replay_reproduces_verdicts() {
    let (inst, _, _) = run_instance(Suite::Samespan, Field::Prime(101), 1, 0);
    let mut payload = inst.unwrap().to_json();
    let p = scratch("pass.json", &payload.to_string());
    let out = scrollkit(&["verify", "--replay", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("PASS samespan"));
    // A degenerate pair is rejected, wrapped as a counterexample record.
    payload["z2"] = payload["z1"].clone();
    let p = scratch("fail.json", &serde_json::json!({ "index": 0, "instance": payload }).to_string());
    let out = scrollkit(&["verify", "--replay", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("FAIL samespan"));
}

#[test]
fn reports_are_reproducible() {
    let dir = std::env::temp_dir().join(format!("scrollkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    for p in [&a, &b] {
        let out = scrollkit(&["--seed", "3", "--samples", "1", "report", "--json-out", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let (ra, rb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ra, rb);
    let v: Value = serde_json::from_slice(&ra).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["suites"].as_array().map(Vec::len), Some(16));
}
