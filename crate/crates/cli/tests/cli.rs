use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn qhs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qhs"))
        .args(args)
        .env_remove("QHS_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn built(dir: &Path, n: usize) -> PathBuf {
    let path = dir.join(format!("m{n}.txt"));
    let o = qhs(&["build", "--n", &n.to_string(), "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    path
}

#[test]
fn build_writes_delta_relations() {
    let dir = tempfile::tempdir().unwrap();
    let m5 = built(dir.path(), 5);
    let text = fs::read_to_string(&m5).unwrap();
    assert!(text.starts_with("generators 5\n"));
    assert_eq!(text.lines().count(), 1 + 8);
    let o = qhs(&["validate", m5.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "valid QHS: n = 5, 8 relations\n");
}

#[test]
fn extend_adds_2n_minus_3_relations() {
    let dir = tempfile::tempdir().unwrap();
    let m3 = built(dir.path(), 3);
    let o = qhs(&["extend", m3.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let out = write(dir.path(), "ext.txt", &stdout(&o));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("generators 7\n"));
    assert_eq!(text.lines().count() - 1, 4 + 2 * 7 - 3);
    assert_eq!(code(&qhs(&["validate", out.to_str().unwrap()])), 0);
}

#[test]
fn delta_table_columns() {
    let o = qhs(&["delta-table", "--max-n", "10"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "n,delta,wisliceny,(n^2+n)/4,gap");
    assert_eq!(lines.len(), 11);
    assert_eq!(lines[3], "3,4,4,3,0");
    assert_eq!(lines[5], "5,8,9,7.5,1");
    assert_eq!(lines[10], "10,28,30,27.5,2");
}

#[test]
fn hilbert_outputs_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let m2 = built(dir.path(), 2);
    let m2 = m2.to_str().unwrap();
    let o = qhs(&["hilbert", m2, "--max-degree", "10", "--csv"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "degree,dim\n0,1\n1,2\n2,2\n3,0\n");
    let o = qhs(&["hilbert", m2, "--max-degree", "10", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dims"], serde_json::json!([1, 2, 2, 0]));
    assert_eq!(code(&qhs(&["hilbert", m2, "--max-degree", "1"])), 2);

    let o = qhs(&["nilpotency", m2, "--cap", "10"]);
    assert_eq!((code(&o), stdout(&o)), (0, "nilpotency index 3\n".into()));
}

#[test]
fn class_cap_is_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    let m6 = built(dir.path(), 6);
    let o = qhs(&["--max-class-size", "5", "hilbert", m6.to_str().unwrap(), "--max-degree", "30"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn regularity_and_singular() {
    let dir = tempfile::tempdir().unwrap();
    let m5 = built(dir.path(), 5);
    let m5 = m5.to_str().unwrap();
    let o = qhs(&["regularity", m5, "--cap", "40"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("regular at degree 10;"));
    assert_eq!(code(&qhs(&["regularity", m5, "--cap", "3"])), 2);

    let m3 = built(dir.path(), 3);
    let o = qhs(&["singular", m3.to_str().unwrap(), "--degree", "2", "--json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["degree"], 2);
    assert_eq!(v["truncated"], false);
    assert!(v["singular"].as_array().unwrap().contains(&serde_json::json!([1, 1])));
}

#[test]
fn certify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let one = write(dir.path(), "one.txt", "generators 2\nx1*x1 = 0\n");
    let o = qhs(&["certify", one.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["type"], "se_pair");
    let m5 = built(dir.path(), 5);
    let o = qhs(&["certify", m5.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn input_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.txt", "generators 2\nx3*x1 = 0\n");
    let o = qhs(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    let gap = write(dir.path(), "gap.txt", "generators 2\nx1*x1 = 0\n");
    assert_eq!(code(&qhs(&["validate", gap.to_str().unwrap()])), 1);
    assert_eq!(code(&qhs(&["regularity", gap.to_str().unwrap(), "--cap", "5"])), 1);
    assert_eq!(code(&qhs(&["validate", "/nonexistent/file"])), 1);
    assert_eq!(code(&qhs(&["hilbert", "--bogus"])), 1);
    assert_eq!(code(&qhs(&["build", "--n", "0"])), 1);
}

#[test]
fn enumerate_and_census() {
    let o = qhs(&["enumerate", "--n", "3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 13);
    let o = qhs(&["enumerate", "--n", "2", "--presentations", "--d-max", "1"]);
    assert_eq!(stdout(&o).lines().count(), 10);

    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("census.csv");
    let o = qhs(&["census", "--n", "3", "--out", csv.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next(), Some("id,d,qhs,all_pure,verdict,certificate"));
    assert_eq!(text.lines().count(), 14);
}

#[test]
fn lemma_m1_command() {
    let o = qhs(&["lemma-m1", "--n", "5"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "class of x1^8 contains a word ending in x5\n");
    assert_eq!(code(&qhs(&["lemma-m1", "--n", "3"])), 1);
}

#[test]
fn cached_runs_match_fresh_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let m5 = built(dir.path(), 5);
    let m5 = m5.to_str().unwrap();
    let args = ["hilbert", m5, "--max-degree", "20", "--json"];
    let fresh = qhs(&args);
    let mut with_cache = vec!["--cache", cache.to_str().unwrap()];
    with_cache.extend(args);
    let first = qhs(&with_cache);
    let second = qhs(&with_cache);
    assert_eq!(stdout(&fresh), stdout(&first));
    assert_eq!(stdout(&first), stdout(&second));
    assert_eq!(code(&second), 0);
    let log = fs::read_to_string(cache.join("runs.jsonl")).unwrap();
    assert_eq!(log.lines().count(), 1);

    // different caps are separate entries
    with_cache[5] = "21";
    assert_eq!(code(&qhs(&with_cache)), 0);
    let log = fs::read_to_string(cache.join("runs.jsonl")).unwrap();
    assert_eq!(log.lines().count(), 2);
}
