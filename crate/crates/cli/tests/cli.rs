use std::collections::HashSet;

use antiflags::{AntiFlags, RelGraph, RelationKind};
use antiflags_cli::export::parse_graph6;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = antiflags_cli::run(std::iter::once("antiflags").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn recover_from_gamma1_refuses_when_formulas_coincide() {
    let (code, _, err) = run(&["--n", "3", "--q", "2", "recover", "--from", "1"]);
    assert_eq!(code, 1);
    assert!(err.contains("formula values coincide"), "{err}");
}

#[test]
fn recover_defaults_agree_with_geometry() {
    for from in ["1", "2", "3", "4"] {
        let (code, out, err) = run(&["--n", "3", "--q", "3", "--jobs", "2", "recover", "--from", from]);
        assert_eq!(code, 0, "from {from}: {err}");
        assert!(out.contains("mismatches against the geometry: 0"), "{out}");
    }
    let (code, out, _) = run(&["--n", "3", "--q", "2", "recover", "--from", "4"]);
    assert_eq!(code, 0);
    assert!(out.contains("R1=168 R2=84 R3=84 R4=42"), "{out}");
}

#[test]
fn verify_counts_prints_the_four_values() {
    let (code, out, _) = run(&["--n", "3", "--q", "3", "verify", "--suite", "counts"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("R2=16 R3=21 R4a=18 R4b=22"), "{out}");
    assert!(!out.contains("FAIL"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["--n", "3", "--q", "3", "recover", "--from", "5"]).0, 2);
    assert_eq!(run(&["--n", "3", "--q", "6", "enumerate"]).0, 2);
    assert_eq!(run(&["--n", "3", "--q", "3", "recover", "--from", "2", "--method", "poset"]).0, 2);
    assert_eq!(run(&["--n", "3", "--q", "3", "verify", "--suite", "hyperbolic"]).0, 2);
    assert_eq!(run(&["--q", "3", "enumerate"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn graph6_round_trips() {
    let (code, out, _) = run(&["--n", "3", "--q", "2", "export", "--graph", "1", "--format", "graph6"]);
    assert_eq!(code, 0);
    let decoded = parse_graph6(&out).unwrap();
    assert_eq!(decoded.order, 28);
    let flags = AntiFlags::enumerate(3, 2).unwrap();
    let g = RelGraph::build(RelationKind::R1, &flags).unwrap();
    let edges: HashSet<_> = g.edges().collect();
    assert_eq!(decoded.edges.len(), edges.len());
    assert!(decoded.edges.iter().all(|e| edges.contains(e)));
}

#[test]
fn dimacs_and_jsonl_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g3.dimacs");
    let p = path.to_str().unwrap();
    let (code, out, _) = run(&["--n", "3", "--q", "3", "--out", p, "export", "--graph", "3", "--format", "dimacs"]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("p edge 117 936"));
    assert_eq!(lines.count(), 936);

    let (code, out, _) = run(&["--n", "3", "--q", "2", "export", "--graph", "4", "--format", "jsonl"]);
    assert_eq!(code, 0);
    let records: Vec<serde_json::Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(records.len(), 28 + 42);
    assert_eq!(records[0]["point"], serde_json::json!([0, 0, 1]));
    assert!(records[28..].iter().all(|r| r["u"].as_u64() < r["v"].as_u64()));
}

#[test]
fn hyperbolic_commands() {
    let (code, out, _) = run(&["--n", "3", "hyperbolic", "partition"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("singular 35\nnon-singular 28\n"));
    assert_eq!(run(&["--n", "4", "hyperbolic", "check-f"]).0, 0);
    let (code, out, _) = run(&["--n", "4", "hyperbolic", "reconstruct"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("parallel classes 135"));
    assert_eq!(run(&["--n", "3", "--q", "3", "hyperbolic", "partition"]).0, 2);
}

#[test]
fn classify_labels_every_pair() {
    let (code, out, err) = run(&["--n", "3", "--q", "2", "classify"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 378);
    assert!(err.contains("R1=168 R2=84 R3=84 R4=42"), "{err}");
}
