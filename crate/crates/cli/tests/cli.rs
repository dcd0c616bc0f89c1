use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn starcalc(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_starcalc")).args(args).current_dir(dir).output().expect("binary runs")
}

fn ok(args: &[&str], dir: &Path) -> String {
    let out = starcalc(args, dir);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

const EDGE: &str = r#"{"signature":[{"name":"E","arity":2}],"size":2,"relations":{"E":[[0,1]]}}"#;
const TRIANGLE: &str = r#"{"signature":[{"name":"E","arity":2}],"size":3,"relations":{"E":[[0,1],[1,2],[2,0]]}}"#;

fn reparses_identically(text: &str) -> Value {
    let v: Value = serde_json::from_str(text).unwrap();
    assert_eq!(starcalc::json::to_text(&v), text);
    v
}

#[test]
fn emitted_json_reparses_to_equal_values() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    write(d, "edge.json", EDGE);
    write(d, "tri.json", TRIANGLE);
    ok(&["clique", "--n", "3", "--r", "1", "-o", "k31.json"], d);
    let path = r#"{"signature":[{"name":"E","arity":2}],"size":3,"relations":{"E":[[1,0],[1,2]]},"p":[0,1,2]}"#;
    write(d, "path.json", path);
    let runs: Vec<Vec<&str>> = vec![
        vec!["gaifman", "tri.json"],
        vec!["clique", "--n", "3", "--r", "1"],
        vec!["subdivide", "tri.json", "--r", "2"],
        vec!["star", "--graph", "tri.json", "--gadget", "fixture:ternary-marked"],
        vec!["ostar", "--h", "fixture:H", "--gadget", "fixture:path1"],
        vec!["arc", "tri.json"],
        vec!["reconstruct", "tri.json"],
        vec!["detect", "k31.json", "--n", "3", "--r", "1"],
        vec!["orient", "path.json"],
        vec!["hom", "--from", "edge.json", "--to", "tri.json"],
        vec!["iso", "tri.json", "tri.json"],
        vec!["profile", "k31.json", "--max-n", "4", "--max-r", "1"],
        vec!["classify", "first", "--n", "5"],
    ];
    for args in runs {
        let text = ok(&args, d);
        let v = reparses_identically(&text);
        if v.get("signature").is_some() {
            let s = starcalc::json::structure_from_json(&v).unwrap();
            let back = starcalc::json::structure_to_json(&s);
            for key in ["signature", "size", "relations", "labels"] {
                assert_eq!(back.get(key), v.get(key), "{args:?} {key}");
            }
        }
    }
}

#[test]
fn hom_count_prints_an_integer() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    write(d, "edge.json", EDGE);
    write(d, "tri.json", TRIANGLE);
    assert_eq!(ok(&["hom", "--from", "edge.json", "--to", "tri.json", "--injective", "--count"], d), "3\n");
    assert_eq!(ok(&["hom", "--from", "tri.json", "--to", "edge.json", "--exists"], d), "false\n");
    let maps: Value = serde_json::from_str(&ok(&["hom", "--from", "edge.json", "--to", "tri.json", "--pin", "0=1"], d)).unwrap();
    assert_eq!(maps, serde_json::json!([[1, 2]]));
}

#[test]
fn star_and_mine_round_trip() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let k3 = r#"{"signature":[{"name":"E","arity":2}],"size":3,"relations":{"E":[[0,1],[0,2],[1,0],[1,2],[2,0],[2,1]]}}"#;
    write(d, "k3.json", k3);
    ok(&["star", "--graph", "k3.json", "--gadget", "fixture:path1", "-o", "host.json"], d);
    let mined: Value = serde_json::from_str(&ok(&["mine", "host.json", "--n", "3", "--r", "1"], d)).unwrap();
    assert_eq!(mined["verified_m"], 3);
    assert_eq!(mined["size"], 3);
}

#[test]
fn dot_output_uses_tags() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    write(d, "edge.json", EDGE);
    let dot = ok(&["star", "--graph", "edge.json", "--gadget", "fixture:path1", "--format", "dot"], d);
    assert!(dot.starts_with("digraph G {"));
    assert!(dot.contains("\"(0,1,1)\""));
    ok(&["star", "--graph", "edge.json", "--gadget", "fixture:path1", "-o", "s.json"], d);
    assert_eq!(ok(&["export-dot", "s.json"], d), dot);
}

#[test]
fn verify_prints_a_table_and_signals_failure() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let table = ok(&["verify", "hcal", "--max-vertices", "4", "--max-r", "1"], d);
    let rows: Vec<&str> = table.lines().filter(|l| l.starts_with("hcal/r=")).collect();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|l| l.ends_with("| PASS")));
    // no graphs means no instances, which is not a pass
    let out = starcalc(&["verify", "hcal", "--max-vertices", "0"], d);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(starcalc(&["verify", "nope"], d).status.code(), Some(2));
}

#[test]
fn exit_codes_separate_domain_and_usage_errors() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let undirected = r#"{"signature":[{"name":"E","arity":2}],"size":2,"relations":{"E":[[0,1],[1,0]]}}"#;
    write(d, "u.json", undirected);
    write(d, "edge.json", EDGE);
    write(d, "bad.json", "{ not json");
    write(d, "range.json", r#"{"signature":[{"name":"E","arity":2}],"size":1,"relations":{"E":[[0,3]]}}"#);
    assert_eq!(starcalc(&["arc", "u.json"], d).status.code(), Some(1));
    assert_eq!(starcalc(&["detect", "edge.json", "--n", "2", "--r", "0"], d).status.code(), Some(1));
    assert_eq!(starcalc(&["gaifman", "range.json"], d).status.code(), Some(1));
    assert_eq!(starcalc(&["gaifman", "bad.json"], d).status.code(), Some(2));
    assert_eq!(starcalc(&["gaifman", "missing.json"], d).status.code(), Some(2));
    assert_eq!(starcalc(&["frobnicate"], d).status.code(), Some(2));
    assert_eq!(starcalc(&["star", "--graph", "edge.json", "--gadget", "fixture:nope"], d).status.code(), Some(2));
    let out = starcalc(&["mine", "edge.json", "--n", "3", "--r", "0"], d);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}
