use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_subtrees"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("subtrees-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stats_of(tree: &str, extra: &[&str]) -> Value {
    let mut child =
        bin().arg("stats").arg("-").args(extra).stdin(Stdio::piped()).stdout(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(tree.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    serde_json::from_slice(&out.stdout).unwrap()
}

/// Data rows of a converge CSV, keyed by header.
fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    (header, lines.map(|l| l.split(',').map(String::from).collect()).collect())
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap()
}

#[test]
fn gen_sizes() {
    let comb = stdout(&["gen", "comb", "3"]);
    assert_eq!(comb.lines().next(), Some("6"));
    assert_eq!(comb.lines().count(), 6);
    let bethe = stdout(&["gen", "bethe", "2"]);
    assert_eq!(bethe.lines().next(), Some("10"));
}

#[test]
fn gen_random_is_deterministic() {
    let a = stdout(&["gen", "random", "12", "--seed", "7"]);
    let b = stdout(&["gen", "random", "12", "--seed", "7"]);
    let c = stdout(&["gen", "random", "12", "--seed", "8"]);
    assert_eq!(a, b);
    assert_ne!(a, c);
    let path = scratch("r12.txt");
    stdout(&["gen", "random", "12", "--seed", "7", "--out", path.to_str().unwrap()]);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), a);
}

#[test]
fn stats_small_trees() {
    let p3 = stats_of(&stdout(&["gen", "path", "3"]), &[]);
    assert_eq!(p3["totalN"], "6");
    assert_eq!(p3["totalR"], "10");
    assert_eq!(p3["density"]["num"], "5");
    assert_eq!(p3["density"]["den"], "9");
    assert_eq!(p3["mean_order"]["num"], "5");
    assert_eq!(p3["mean_order"]["den"], "3");

    let c2 = stats_of(&stdout(&["gen", "comb", "2"]), &[]);
    assert_eq!(c2["totalN"], "10");
    assert_eq!(c2["totalR"], "20");
}

#[test]
fn stats_log_on_large_comb() {
    let c500 = stats_of(&stdout(&["gen", "comb", "500"]), &["--log", "--base", "2"]);
    assert_eq!(c500["mode"], "log");
    let h = c500["entropy_2"].as_f64().unwrap();
    assert!((h - 0.5).abs() < 0.01, "{h}");
    assert_eq!(c500["entropy"], c500["entropy_2"]);
}

#[test]
fn stats_per_vertex() {
    let v = stats_of(&stdout(&["gen", "star", "4"]), &["--per-vertex"]);
    let text = v.to_string();
    // Centre of a 4-star lies in 8 subtrees.
    assert!(text.contains("\"8\""), "{text}");
}

#[test]
fn profile_csv() {
    let path = scratch("p7.txt");
    stdout(&["gen", "path", "7", "--out", path.to_str().unwrap()]);
    let csv = stdout(&["profile", path.to_str().unwrap(), "--radius", "1", "--radius", "2"]);
    let summary: Vec<&str> = csv.lines().filter(|l| l.contains("path_ball_fraction")).collect();
    assert_eq!(summary.len(), 2);
    // P_7 has 5 vertices with a centred P_3 ball and 3 with a centred P_5.
    assert!(summary[0].ends_with(",5,0.714285714286"), "{}", summary[0]);
    assert!(summary[1].ends_with(",3,0.428571428571"), "{}", summary[1]);
    let json: Value =
        serde_json::from_str(&stdout(&["profile", path.to_str().unwrap(), "--radius", "1", "--json"])).unwrap();
    assert!(json.is_array() || json.is_object());
}

#[test]
fn converge_comb_density() {
    let csv = stdout(&["converge", "comb", "5", "100", "--step", "5", "--radius", "1"]);
    let (header, rows) = csv_rows(&csv);
    let d = column(&header, "density");
    let data: Vec<&Vec<String>> = rows.iter().filter(|r| r[0].parse::<usize>().is_ok()).collect();
    assert_eq!(data.len(), 20);
    let densities: Vec<f64> = data.iter().map(|r| r[d].parse().unwrap()).collect();
    assert!(densities.windows(2).all(|w| w[1] > w[0]));
    let limit = rows.iter().find(|r| r[0] == "limit").unwrap();
    assert_eq!(limit[d], "0.75");
    let gap: f64 = rows.iter().find(|r| r[0] == "gap").unwrap()[d].parse().unwrap();
    assert!(gap < 0.02, "{gap}");
}

#[test]
fn converge_bethe_log() {
    let csv = stdout(&["converge", "bethe", "2", "14", "--log"]);
    let (header, rows) = csv_rows(&csv);
    let h = column(&header, "entropy_e");
    let gap: f64 = rows.iter().find(|r| r[0] == "gap").unwrap()[h].parse().unwrap();
    assert!(gap < 5e-4, "{gap}");
}

#[test]
fn converge_paths() {
    let csv = stdout(&["converge", "path", "10", "1000", "--step", "330"]);
    let (header, rows) = csv_rows(&csv);
    let last = rows.iter().rfind(|r| r[0].parse::<usize>().is_ok()).unwrap();
    assert_eq!(last[0], "1000");
    let d: f64 = last[column(&header, "density")].parse().unwrap();
    assert!((d - 1.0 / 3.0).abs() < 1e-3);
    let h: f64 = last[column(&header, "entropy_e")].parse().unwrap();
    assert!(h < 0.02);
}

#[test]
fn converge_is_reproducible() {
    let args = ["converge", "comb-star", "2", "12", "--x", "0.5", "--radius", "1", "--radius", "2"];
    assert_eq!(stdout(&args), stdout(&args));
    assert_eq!(
        stdout(&args),
        stdout(&["--sequential", "converge", "comb-star", "2", "12", "--x", "0.5", "--radius", "1", "--radius", "2"])
    );
}

#[test]
fn verify_passes() {
    let out = run(&["verify", "--trees", "60", "--max-n", "12", "--families-up-to", "20", "--json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v.to_string().contains("q chain rule"));
}

#[test]
fn limits_table() {
    let text = stdout(&["limits"]);
    assert!(text.contains("2.25851845059"));
    assert!(text.contains("0.628968415222"));
    let json: Value = serde_json::from_str(&stdout(&["limits", "--json"])).unwrap();
    assert!(json.to_string().contains("0.619047619"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["gen", "nonsense", "3"]).status.code(), Some(1));
    assert_eq!(run(&["gen", "broom", "3"]).status.code(), Some(1));
    assert_eq!(run(&["converge", "comb", "10", "5"]).status.code(), Some(1));
    assert_eq!(run(&["stats", "/nonexistent/tree.txt"]).status.code(), Some(3));
    let bad = scratch("bad.txt");
    std::fs::write(&bad, "3\n0 1\n0 1\n").unwrap();
    let out = run(&["stats", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}
