use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn example() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../instances/ex.json")
}

fn galois(args: &[&str], env_cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_galois"));
    cmd.args(args).env_remove("GALOIS_CACHE_DIR");
    if let Some(dir) = env_cache {
        cmd.env("GALOIS_CACHE_DIR", dir);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn verify_and_example_is_equal() {
    let ex = example();
    let o = galois(
        &[
            "verify",
            "t15i",
            "--in",
            ex.to_str().unwrap(),
            "--class",
            "K2",
            "--n",
            "2",
            "--m",
            "1",
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("verdict: equal"), "{text}");
    assert!(text.contains("lhs_size: 4"), "{text}");
}

#[test]
fn descriptive_name_matches_alias() {
    let ex = example();
    let ex = ex.to_str().unwrap();
    let a = galois(
        &["verify", "t15i", "--in", ex, "--class", "K2", "--n", "2", "--m", "1"],
        None,
    );
    let b = galois(
        &[
            "verify",
            "fixed-arity-functions",
            "--in",
            ex,
            "--class",
            "K2",
            "--n",
            "2",
            "--m",
            "1",
        ],
        None,
    );
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn cm2_of_order_contains_reverse_order() {
    let ex = example();
    let o = galois(
        &["close", "cmm", "--in", ex.to_str().unwrap(), "--set", "T2", "--m", "2"],
        None,
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(
        text.contains("constraint 2 {(0,0),(1,0),(1,1)} -> {(0,0),(1,0),(1,1)}\n"),
        "{text}"
    );
    assert!(text.contains("converged: true"));
}

#[test]
fn enumerate_unary_functions() {
    let o = galois(&["enumerate", "functions", "--arity", "1"], None);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<String> = stdout(&o)
        .lines()
        .filter(|l| l.starts_with("function"))
        .map(String::from)
        .collect();
    assert_eq!(
        lines,
        [
            "function 1 [0,0]",
            "function 1 [0,1]",
            "function 1 [1,0]",
            "function 1 [1,1]"
        ]
    );
}

#[test]
fn enumerate_unary_constraints() {
    let o = galois(&["enumerate", "constraints", "--arity", "1"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("count: 16\n"));
}

#[test]
fn discrepancy_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let doc = dir.path().join("doc.json");
    std::fs::write(
        &doc,
        r#"{"relations": {"zero": [[0,0]], "one": [[1,1]]},
            "constraints": {"z": ["zero","zero"], "o": ["one","one"]},
            "sets": {"T": ["z","o"]}}"#,
    )
    .unwrap();
    let doc = doc.to_str().unwrap();
    let starved = galois(
        &[
            "verify",
            "cm-oracle",
            "--in",
            doc,
            "--set",
            "T",
            "--max-family",
            "1",
            "--max-indets",
            "0",
        ],
        None,
    );
    assert_eq!(starved.status.code(), Some(1), "{}", stderr(&starved));
    let text = stdout(&starved);
    assert!(
        text.contains("verdict: lhs_strict") && text.contains("rhs_only: constraint 2"),
        "{text}"
    );
    let full = galois(&["verify", "cm-oracle", "--in", doc, "--set", "T"], None);
    assert_eq!(full.status.code(), Some(0));
    let mismatch = galois(
        &["verify", "t15i", "--in", doc, "--set", "T", "--n", "2", "--m", "1"],
        None,
    );
    assert_eq!(mismatch.status.code(), Some(2));
}

#[test]
fn budget_refusal_exits_three() {
    let o = galois(&["enumerate", "functions", "--arity", "5"], None);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("budget exceeded"));
    assert!(o.stdout.is_empty());
}

#[test]
fn usage_and_parse_errors_exit_two() {
    assert_eq!(galois(&["frobnicate"], None).status.code(), Some(2));
    assert_eq!(galois(&["verify", "t99", "--in", "x"], None).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let doc = dir.path().join("bad.json");
    std::fs::write(&doc, "{\n  \"functions\": {\"f\": [0,1,}\n}\n").unwrap();
    let o = galois(&["close", "vsn", "--in", doc.to_str().unwrap(), "--class", "K"], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2, column"), "{}", stderr(&o));
    std::fs::write(&doc, r#"{"functions": {"f": {"arity": 2, "table": [0,1,0]}}}"#).unwrap();
    let o = galois(&["canon", "--in", doc.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("expected 4 entries"), "{}", stderr(&o));
}

#[test]
fn canon_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let ex = example();
    let once = galois(&["canon", "--in", ex.to_str().unwrap()], None);
    assert_eq!(once.status.code(), Some(0));
    let path = dir.path().join("canon.json");
    std::fs::write(&path, &once.stdout).unwrap();
    let twice = galois(&["canon", "--in", path.to_str().unwrap()], None);
    assert_eq!(once.stdout, twice.stdout);
}

#[test]
fn cache_hit_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let args = [
        "galois",
        "fsc",
        "--set",
        "T2",
        "--arity",
        "4",
        "--verbose",
        "--cache-dir",
        cache.to_str().unwrap(),
    ];
    let ex = example();
    let mut full: Vec<&str> = args.to_vec();
    full.extend(["--in", ex.to_str().unwrap()]);
    let first = galois(&full, None);
    assert_eq!(first.status.code(), Some(0));
    assert!(stderr(&first).contains("cache: stored"));
    assert!(stdout(&first).contains("count: 168\n"));
    let second = galois(&full, None);
    assert!(stderr(&second).contains("cache: hit"));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn corrupt_cache_entry_is_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let ex = example();
    let args = ["close", "vsn", "--in", ex.to_str().unwrap(), "--class", "K2"];
    let clean = galois(&args, None);
    galois(&args, Some(dir.path()));
    let entries: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    assert_eq!(entries.len(), 1);
    std::fs::write(&entries[0], "{ truncated").unwrap();
    let again = galois(&args, Some(dir.path()));
    assert_eq!(again.status.code(), Some(0));
    assert!(stderr(&again).contains("warning"), "{}", stderr(&again));
    assert_eq!(again.stdout, clean.stdout);
    let restored = galois(&args, Some(dir.path()));
    assert!(stderr(&restored).is_empty());
    assert_eq!(restored.stdout, clean.stdout);
}

#[test]
fn flag_wins_over_environment() {
    let env_dir = tempfile::tempdir().unwrap();
    let flag_dir = tempfile::tempdir().unwrap();
    let ex = example();
    let o = galois(
        &[
            "close",
            "vsn",
            "--in",
            ex.to_str().unwrap(),
            "--class",
            "K2",
            "--cache-dir",
            flag_dir.path().to_str().unwrap(),
        ],
        Some(env_dir.path()),
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_dir(flag_dir.path()).unwrap().count(), 1);
    assert_eq!(std::fs::read_dir(env_dir.path()).unwrap().count(), 0);
}

#[test]
fn laws_are_seeded() {
    let a = galois(&["laws", "--operator", "vsn", "--samples", "20", "--seed", "5"], None);
    let b = galois(&["laws", "--operator", "vsn", "--samples", "20", "--seed", "5"], None);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("holds: true"));
}
