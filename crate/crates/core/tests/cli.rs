use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn afrc(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_afrc"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, edges: impl IntoIterator<Item = (usize, usize)>) -> PathBuf {
    let text: String = edges.into_iter().map(|(a, b)| format!("{a} {b}\n")).collect();
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn clique(range: std::ops::Range<usize>) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for a in range.clone() {
        for b in a + 1..range.end {
            v.push((a, b));
        }
    }
    v
}

fn barbell() -> Vec<(usize, usize)> {
    let mut e = clique(0..10);
    e.extend(clique(10..20));
    e.push((9, 10));
    e
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn curvature_of_triangle() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "k3.edges", clique(0..3));
    let o = afrc(&["curvature", "k3.edges", "--kind", "af3"], dir.path());
    assert!(o.status.success());
    let records: Vec<String> = stdout(&o).lines().filter(|l| l.contains("\taf3\t")).map(String::from).collect();
    assert_eq!(records.len(), 3);
    assert!(records.iter().all(|r| r.ends_with("\t3")));
}

#[test]
fn tree_af4_equals_af3() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "tree.edges", [(0, 1), (0, 2), (1, 3), (1, 4), (4, 5)]);
    let a = stdout(&afrc(&["curvature", "tree.edges", "--kind", "af3"], dir.path()));
    let b = stdout(&afrc(&["curvature", "tree.edges", "--kind", "af4"], dir.path()));
    assert_eq!(a.replace("af3", "af4"), b);
}

#[test]
fn transport_guard_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let mut e: Vec<(usize, usize)> = (1..=200).map(|i| (0, i)).collect();
    e.extend((2..=201).map(|i| (1, i)));
    write(dir.path(), "big.edges", e);
    let o = afrc(&["curvature", "big.edges", "--kind", "orc-ref"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("guard"));
}

#[test]
fn malformed_input_exits_1_with_line() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.edges"), "0 1\n2\n").unwrap();
    let o = afrc(&["curvature", "bad.edges"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn histogram_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "b.edges", barbell());
    let o = afrc(&["curvature", "b.edges", "--out", "c.tsv", "--histogram"], dir.path());
    assert!(o.status.success());
    let tsv = fs::read_to_string(dir.path().join("c.tsv")).unwrap();
    assert!(tsv.starts_with("# afrc-curvature v1\n"));
    assert_eq!(tsv.lines().count(), 2 + 91);
    assert!(stdout(&o).contains("count"));
}

#[test]
fn barbell_heuristic_report() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "barbell.edges", barbell());
    let o = afrc(
        &["rewire", "barbell.edges", "--kind", "af3", "--heuristic", "--report", "r.json", "--out", "o.edges"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(report["schema"], "afrc-rewire-report/v1");
    let it = &report["iterations"][0];
    assert_eq!(it["additions_applied"].as_array().unwrap().len(), 1);
    assert_eq!(it["removals_applied"].as_array().unwrap().len(), 0);
    let lower = it["thresholds"]["delta_lower"].as_f64().unwrap();
    let upper = it["thresholds"]["delta_upper"].as_f64().unwrap();
    assert!(-16.0 < lower && lower < upper);
    assert!(upper >= 10.0);
    assert_eq!(fs::read_to_string(dir.path().join("o.edges")).unwrap().lines().count(), 92);
}

#[test]
fn identity_rewire_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p5.edges", [(0, 1), (1, 2), (2, 3), (3, 4)]);
    let o = afrc(&["rewire", "p5.edges", "--kind", "af3", "--add", "0", "--remove", "0"], dir.path());
    assert!(o.status.success());
    assert_eq!(o.stdout, fs::read(p).unwrap());
}

#[test]
fn two_iterations_two_records() {
    let dir = tempfile::tempdir().unwrap();
    let mut e = barbell();
    e.push((8, 11));
    write(dir.path(), "barbell2.edges", e);
    let o = afrc(
        &["rewire", "barbell2.edges", "--heuristic", "--iterations", "2", "--report", "r.json", "--out", "o.edges"],
        dir.path(),
    );
    assert!(o.status.success());
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(report["iterations"].as_array().unwrap().len(), 2);
}

#[test]
fn conflicting_modes_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "p.edges", [(0, 1)]);
    for args in [
        &["rewire", "p.edges", "--heuristic", "--add", "1"][..],
        &["rewire", "p.edges"][..],
        &["rewire", "p.edges", "--add", "1", "--iterations", "0"][..],
        &["curvature", "p.edges", "--kind", "af5"][..],
        &["frobnicate"][..],
    ] {
        assert_eq!(afrc(args, dir.path()).status.code(), Some(1), "{args:?}");
    }
    assert_eq!(afrc(&["--help"], dir.path()).status.code(), Some(0));
    assert_eq!(afrc(&["--version"], dir.path()).status.code(), Some(0));
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "k5.edges", clique(0..5));
    write(dir.path(), "path.edges", [(0, 1), (1, 2), (2, 3)]);
    let o = afrc(&["verify", "k5.edges", "--check", "all", "--L", "0.2", "--M", "0.2"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("prop33"));
    let o = afrc(&["verify", "path.edges", "--check", "prop33"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not regular"));
    let o = afrc(&["verify", "--generate", "1000", "--check", "thm31"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1000"));
}

#[test]
fn stats_tree_and_directory() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "tree.edges", [(0, 1), (0, 2), (1, 3), (3, 4)]);
    let o = afrc(&["stats", "tree.edges", "--kinds", "af3,af4"], dir.path());
    assert!(o.status.success());
    let out = stdout(&o);
    let rows: Vec<Vec<&str>> = out.lines().skip(1).map(|l| l.split_whitespace().collect()).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][2..], rows[1][2..]);
    assert_eq!(rows[0][7], "1.0000");

    let data = dir.path().join("dataset");
    fs::create_dir(&data).unwrap();
    write(&data, "a.edges", clique(0..4));
    write(&data, "b.edges", [(0, 1), (1, 2)]);
    let o = afrc(&["stats", "dataset", "--kinds", "af3"], dir.path());
    assert!(o.status.success());
    let out = stdout(&o);
    let k4: Vec<&str> = out.lines().find(|l| l.starts_with("a.edges")).unwrap().split_whitespace().collect();
    assert_eq!(&k4[2..7], &["6", "4", "4", "4.0000", "0.0000"]);
    assert!(out.lines().any(|l| l.starts_with("pooled")));
}

#[test]
fn bench_single_size_has_no_slope() {
    let dir = tempfile::tempdir().unwrap();
    let o = afrc(&["bench", "--generator", "barbell", "--sizes", "8", "--kind", "af3"], dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).contains("slope undefined"));
    let o = afrc(&["bench", "--sizes", "100,50"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}
