use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn algramsey(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_algramsey")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, serde_json::to_string(v).unwrap()).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// `K_N` over `F_p^n`: the constant polynomial 1 never vanishes.
fn complete(p: u64, n: usize, vertices: Vec<Vec<u64>>) -> Value {
    json!({
        "p": p, "r": 2, "n": n, "d": 1, "m": 1, "kind": "stronglyAlgebraic",
        "polys": [[{"c": 1, "e": vec![0; 2 * n]}]],
        "formula": ["not", ["atom", 1]],
        "vertices": vertices,
    })
}

#[test]
fn paley_13_builds() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("p13.json");
    assert_eq!(code(&algramsey(&["generate", "paley", "--p", "13", "--out", s(&path)])), 0);
    let out = algramsey(&["build", s(&path), "--materialize"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["N"], 13);
    assert_eq!(v["r"], 2);
    // x + y = 0 counts as an edge under the literal polynomial
    assert_eq!(v["edgeCount"], 42);
}

#[test]
fn frankl_wilson_5_2_has_ten_vertices() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("fw.json");
    assert_eq!(code(&algramsey(&["generate", "frankl-wilson", "--n", "5", "--p", "2", "--out", s(&path)])), 0);
    let v = stdout_json(&algramsey(&["build", s(&path)]));
    assert_eq!(v["N"], 10);
}

#[test]
fn duplicate_vertex_is_a_validation_error() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "dup.json", &complete(5, 1, vec![vec![1], vec![2], vec![1]]));
    let out = algramsey(&["build", s(&path)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("DuplicateVertex"));
}

#[test]
fn malformed_json_is_a_validation_error() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{ not json").unwrap();
    assert_eq!(code(&algramsey(&["build", s(&path)])), 2);
}

#[test]
fn unknown_subcommand_is_usage() {
    assert_eq!(code(&algramsey(&["frobnicate"])), 1);
}

#[test]
fn graph_mode_rejects_hypergraphs() {
    let dir = TempDir::new().unwrap();
    let spec = json!({
        "p": 5, "r": 3, "n": 1, "d": 1, "m": 1, "kind": "stronglyAlgebraic",
        "polys": [[{"c": 1, "e": [0, 0, 0]}]],
        "formula": ["not", ["atom", 1]],
        "vertices": [[0], [1], [2], [3]],
    });
    let path = write(&dir, "r3.json", &spec);
    assert_eq!(code(&algramsey(&["ramsey", s(&path), "--mode", "graph"])), 1);
    assert_eq!(code(&algramsey(&["ramsey", s(&path)])), 0);
}

#[test]
fn complete_graph_clique_oracle() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "k5.json", &complete(5, 1, (0..5).map(|x| vec![x]).collect()));
    let out = algramsey(&["oracle", s(&path), "--what", "clique"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["value"], 5);
    let out = algramsey(&["oracle", s(&path), "--what", "independent"]);
    assert_eq!(stdout_json(&out)["value"], 1);
}

#[test]
fn oracle_budget_exhaustion_exits_4() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("p61.json");
    algramsey(&["generate", "paley", "--p", "61", "--out", s(&path)]);
    assert_eq!(code(&algramsey(&["oracle", s(&path), "--what", "clique", "--budget", "10"])), 4);
}

#[test]
fn ramsey_output_is_verified_and_deterministic() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("p29.json");
    algramsey(&["generate", "paley", "--p", "29", "--out", s(&path)]);
    for mode in ["graph", "hypergraph", "multicolor"] {
        let a = algramsey(&["ramsey", s(&path), "--mode", mode, "--seed", "7"]);
        let b = algramsey(&["ramsey", s(&path), "--mode", mode, "--seed", "7", "--sequential"]);
        assert_eq!(code(&a), 0, "{mode}");
        assert_eq!(a.stdout, b.stdout, "{mode}");
        assert_eq!(stdout_json(&a)["verified"], true);
    }
}

#[test]
fn regularity_rejects_boolean_instances() {
    let dir = TempDir::new().unwrap();
    let mut spec = complete(5, 1, (0..5).map(|x| vec![x]).collect());
    spec["kind"] = json!("general");
    let path = write(&dir, "boolean.json", &spec);
    assert_eq!(code(&algramsey(&["regularity", s(&path)])), 1);
}

#[test]
fn regularity_on_a_complete_graph() {
    let dir = TempDir::new().unwrap();
    let vertices: Vec<Vec<u64>> = (0..7).flat_map(|a| (0..7).map(move |b| vec![a, b])).collect();
    let path = write(&dir, "k49.json", &complete(7, 2, vertices));
    let report = dir.path().join("reg.json");
    let out = algramsey(&["regularity", s(&path), "--epsilon", "1/4", "--out", s(&report)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["report"]["tuplesBad"], 0);
}

#[test]
fn verify_mixing_writes_csv() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("mixing.csv");
    assert_eq!(code(&algramsey(&["verify", "--suite", "mixing", "--out", s(&csv)])), 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("suite,case,params,observed,bound,pass"));
    assert!(lines.all(|l| l.contains(",pass,")));
}

#[test]
fn bad_epsilon_is_usage() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("p13.json");
    algramsey(&["generate", "paley", "--p", "13", "--out", s(&path)]);
    assert_eq!(code(&algramsey(&["regularity", s(&path), "--epsilon", "abc"])), 1);
}
