use std::process::{Command, Output};

use serde_json::Value;

fn sl3cb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sl3cb")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn dim_on_a_genus_one_graph() {
    let out = sl3cb(&["dim", "--graph", "gamma:1,1", "--weights", "0,0", "--level", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["result"]["dim"], 3);
    assert_eq!(v["query"]["graph"], "gamma:1,1");
    assert!(v["checks"].as_array().unwrap().is_empty());
}

#[test]
fn oracle_cross_check_passes() {
    let out = sl3cb(&["dim", "--graph", "caterpillar:5", "--weights", "1,0", "0,1", "1,1", "1,1", "0,0", "--level", "2", "--oracle"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["checks"][0]["passed"], true);
    assert_eq!(v["checks"][0]["detail"]["oracle"], v["result"]["dim"]);
}

#[test]
fn input_errors_exit_2() {
    let arity = sl3cb(&["dim", "--graph", "caterpillar:7", "--weights", "0,0", "0,0", "0,0", "--level", "1"]);
    assert_eq!(arity.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&arity.stderr).contains("expected 7 leaf weights"));
    assert_eq!(sl3cb(&["dim", "--graph", "caterpillar:3", "--bogus"]).status.code(), Some(2));
    assert_eq!(sl3cb(&["fusion", "--weights", "1,x", "0,1", "0,0", "--level", "1"]).status.code(), Some(2));
    assert_eq!(sl3cb(&["dim", "--graph", "pentagon", "--level", "1"]).status.code(), Some(2));
    assert_eq!(sl3cb(&["hilbert", "--max-level", "2"]).status.code(), Some(2));
}

#[test]
fn gorenstein_report() {
    let out = sl3cb(&["check", "gorenstein", "--graph", "caterpillar:3", "--max-level", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    let omega = &v["result"]["omega"];
    assert_eq!(omega["level"], 6);
    assert_eq!(omega["leaf_weights"], serde_json::json!(["2,2", "2,2", "2,2"]));
    assert_eq!(v["result"]["h_vector"]["h"], serde_json::json!([1, 1, 1]));
}

#[test]
fn failed_check_exits_1() {
    let out = sl3cb(&["check", "relations", "--graph", "caterpillar:3", "--max-level", "3", "--move-degree", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["checks"][0]["passed"], false);
    let ok = sl3cb(&["check", "relations", "--graph", "caterpillar:3", "--max-level", "3"]);
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn other_checks() {
    for args in [
        vec!["check", "normal", "--graph", "caterpillar:4", "--max-level", "3"],
        vec!["check", "generation", "--graph", "gamma:1,1", "--max-level", "5"],
        vec!["verify-presentation"],
        vec!["markov"],
        vec!["classical", "--weights", "2,1", "1,2", "1,1"],
    ] {
        assert_eq!(sl3cb(&args).status.code(), Some(0), "{args:?}");
    }
    let gen = sl3cb(&["generators", "--graph", "gamma:1,1", "--max-level", "4"]);
    assert_eq!(json_of(&gen)["result"]["max_level"], 3);
    let normal = sl3cb(&["check", "normal", "--graph", "gamma:1,1", "--max-level", "2"]);
    assert_eq!(normal.status.code(), Some(2));
}

#[test]
fn fusion_classical_verlinde() {
    let f = json_of(&sl3cb(&["fusion", "--weights", "1,0", "1,0", "1,0", "--level", "1"]));
    assert_eq!(f["result"]["fusion"], 1);
    let c = json_of(&sl3cb(&["classical", "--weights", "1,1", "1,1", "1,1"]));
    assert_eq!(c["result"]["classical"], 2);
    assert_eq!(c["result"]["bz_triangles"], 2);
    let v = json_of(&sl3cb(&["verlinde", "--genus", "2", "--level", "1"]));
    assert_eq!(v["result"]["dim"], 9);
    assert_eq!(v["result"]["torus_order"], 48);
}

#[test]
fn csv_output() {
    let out = sl3cb(&["--csv", "hilbert", "--graph", "caterpillar:3", "--max-level", "3"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "level,h\n0,1\n1,9\n2,45\n3,164\n");
    let out = sl3cb(&["hilbert", "--graph", "gamma:1,1", "--max-level", "1", "--multigraded", "--csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("level,w1,dim\n0,\"0,0\",1\n"));
}

#[test]
fn graph_file_input() {
    let dir = std::env::temp_dir().join(format!("sl3cb-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("loop.json");
    std::fs::write(&path, r#"{"internal":[0],"edges":[[[0,1],[0,2]]],"leaves":{"1":[0,3]}}"#).unwrap();
    let out = sl3cb(&["dim", "--graph-file", path.to_str().unwrap(), "--weights", "0,0", "--level", "1"]);
    assert_eq!(json_of(&out)["result"]["dim"], 3);
    let both = sl3cb(&["dim", "--graph", "theta", "--graph-file", path.to_str().unwrap(), "--level", "1"]);
    assert_eq!(both.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_is_deterministic() {
    let args = ["generators", "--graph", "caterpillar:4", "--max-level", "2"];
    let a = sl3cb(&args);
    let b = sl3cb(&args);
    assert_eq!(a.stdout, b.stdout);
    let args = ["hilbert", "--graph", "caterpillar:4", "--max-level", "1", "--multigraded"];
    assert_eq!(sl3cb(&args).stdout, sl3cb(&args).stdout);
}
