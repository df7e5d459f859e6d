use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trinity")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn single_table_rows() {
    let o = run(&["table", "--from", "25", "--to", "25"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("+56149  prime"));
    let o = run(&["table", "27", "27"]);
    assert!(stdout(&o).contains("-16417  prime"));
}

#[test]
fn table_beyond_reference() {
    let o = run(&["--json", "table", "31", "35"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    assert!(v["rows"][0]["matches_reference"].is_null());
}

#[test]
fn construct_rejects_bad_valencies() {
    let o = run(&["construct", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("valency 3"));
    let o = run(&["construct", "15"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("plan 15"));
    let o = run(&["construct", "5", "--prime", "13"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn certificates_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    assert!(run(&["construct", "7", "--out", a.to_str().unwrap()]).status.success());
    assert!(run(&["construct", "7", "--out", b.to_str().unwrap()]).status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let o = run(&["verify", a.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("certificate verified"));
}

#[test]
fn verify_missing_file_is_invalid_input() {
    assert_eq!(run(&["verify", "/nonexistent/cert.json"]).status.code(), Some(2));
}

#[test]
fn skipped_flag_checks_still_verify() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k13.json");
    let o = run(&["construct", "13", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("skipped"));
    let o = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn plan_examples() {
    for (m, d, n) in [(15, 5, 3), (27, 9, 3), (35, 7, 5), (9, 9, 1), (11, 11, 1)] {
        let o = run(&["--json", "plan", &m.to_string()]);
        assert!(o.status.success());
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!((v["d"].as_u64(), v["n"].as_u64()), (Some(d), Some(n)), "m={m}");
    }
    assert_eq!(run(&["plan", "10"]).status.code(), Some(2));
}

#[test]
fn lift_toy_and_errors() {
    let o = run(&["lift", "--toy", "z2cubed", "--n", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("components 3 of size 216"));
    assert_eq!(run(&["lift", "--toy", "z2cubed", "--n", "4"]).status.code(), Some(2));
    assert_eq!(run(&["lift", "--toy", "tetrahedron", "--n", "3"]).status.code(), Some(3));
    assert_eq!(run(&["lift", "--toy", "cube", "--n", "3"]).status.code(), Some(2));
    assert_eq!(run(&["lift", "--n", "3"]).status.code(), Some(2));
    let o = run(&["lift", "--toy", "z2cubed", "--n", "5", "--mode", "orbit"]);
    assert!(stdout(&o).contains("ord(xyz) = 10  expected 10"));
}

#[test]
fn export_flag_graph() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("k5.json");
    let dot = dir.path().join("k5.dot");
    assert!(run(&["construct", "5", "--out", cert.to_str().unwrap()]).status.success());
    let o = run(&["export-flaggraph", cert.to_str().unwrap(), "--dot", dot.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(dot).unwrap();
    assert!(text.starts_with("graph flags {"));
    // one line per edge of each color: 3 · 660/2
    assert_eq!(text.lines().filter(|l| l.contains(" -- ")).count(), 990);
}
