use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Report {
    command: Vec<String>,
    input_digest: Option<String>,
    results: Value,
    timing_ms: f64,
    verdicts: Vec<Verdict>,
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Verdict {
    check: String,
    passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_treecover"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn report(o: &Output) -> Report {
    serde_json::from_slice(&o.stdout).expect("valid run report")
}

const STAR: &str = "0 1\n0 2\n0 3\n";
const SPIDER_112: &str = "0 1\n0 2\n0 3\n3 4\n";
const TRIANGLE_WITH_LEAVES: &str = "0 1\n1 2\n2 0\n0 3\n0 4\n0 5\n1 6\n1 7\n1 8\n2 9\n2 10\n2 11\n";

#[test]
fn star_cover_has_two_paths() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "star.txt", STAR);
    let o = run(&["pcover", &f]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("P = 2\n"));

    let r = report(&run(&["--json", "pcover", &f]));
    assert_eq!(r.results["p"], 2);
    assert!(r.verdicts.iter().all(|v| v.passed));
}

#[test]
fn three_light_graph_cover() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "tri.txt", TRIANGLE_WITH_LEAVES);
    let o = run(&["pcover", &f, "--method", "theorem12"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("P = 6\n"));
    assert!(text.contains("check matches oracle: ok"));
}

#[test]
fn formula_outside_its_hypothesis_fails() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "c4.txt", "0 1\n1 2\n2 3\n3 0\n");
    let o = run(&["pcover", &f, "--method", "theorem12"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cycle"));
}

#[test]
fn clique_expansion_cover() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "p3.txt", "0 1\n1 2\n");
    let r = report(&run(&[
        "--json",
        "pcover",
        &f,
        "--method",
        "theorem13",
        "--orders",
        "3,4",
    ]));
    assert_eq!(r.results["p"], 1);
    assert_eq!(r.results["details"]["expansion_n"], 6);
}

#[test]
fn spider_has_several_island_sequences() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "spider.txt", SPIDER_112);
    let o = run(&["duis", &f]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("multiple\n"));

    let o = run(&["islands", &f]);
    let text = stdout(&o);
    assert!(text.contains("{(1,4), (2,3)}"), "{text}");
    assert!(text.contains("multiple"));
}

#[test]
fn generated_family_member_is_unique() {
    let o = run(&["gen", "--kind", "family-f", "--seed", "7"]);
    assert!(o.status.success());
    let tree = stdout(&o);
    let o = run_stdin(&["duis", "-"], &tree);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("unique\n"), "{text}");
    assert!(text.contains("construction: base"));
}

#[test]
fn verification_suite_passes() {
    let o = run(&["verify", "--suite", "duis", "--max-n", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("pass"));

    let r = report(&run(&[
        "--json",
        "verify",
        "--suite",
        "thm5",
        "--max-n",
        "7",
        "--samples",
        "10",
    ]));
    assert_eq!(r.results["counterexample"], Value::Null);
    assert_eq!(r.input_digest, None);
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let o = run(&["verify", "--suite", "nope"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn run_report_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "k23.txt", "0 2\n0 3\n0 4\n1 2\n1 3\n1 4\n");
    let o = run(&["--json", "lambda", &f]);
    assert!(o.status.success());
    let raw: Value = serde_json::from_slice(&o.stdout).unwrap();
    let r: Report = serde_json::from_value(raw.clone()).unwrap();
    assert_eq!(serde_json::to_value(&r).unwrap(), raw);
    assert_eq!(r.results["lambda"], 5);
    assert_eq!(r.results["rho"], 1);
    assert_eq!(r.input_digest.as_deref().map(str::len), Some(64));
}

#[test]
fn lambda_of_complement_of_input() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "k23.txt", "0 2\n0 3\n0 4\n1 2\n1 3\n1 4\n");
    let r = report(&run(&["--json", "lambda", &f, "--complement-of-input"]));
    assert_eq!(r.results["graph"], "complement");
    // the complement of K_{2,3} is K2 + K3
    assert_eq!(r.results["lambda"], 4);
    assert_eq!(r.results["rho"], 0);
}

#[test]
fn parse_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.txt", "0 1\nx y\n");
    let o = run(&["pcover", &f]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    let o = run(&["pcover", "/nonexistent/file"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn graph6_on_stdin() {
    let g6 = stdout(&run(&[
        "gen", "--kind", "spider", "--arms", "1,1,2", "--format", "graph6",
    ]));
    let o = run_stdin(&["duis", "-"], &g6);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("multiple\n"));
}

#[test]
fn generation_is_deterministic() {
    for kind in ["prufer", "family-f", "expansion", "spider"] {
        let a = run(&["gen", "--kind", kind, "--seed", "3", "--n", "9"]);
        let b = run(&["gen", "--kind", kind, "--seed", "3", "--n", "9"]);
        assert!(a.status.success(), "{kind}");
        assert_eq!(a.stdout, b.stdout, "{kind}");
    }
    let a = run(&["gen", "--kind", "prufer", "--seed", "3", "--n", "30"]);
    let b = run(&["gen", "--kind", "prufer", "--seed", "4", "--n", "30"]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn dot_output() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "star.txt", STAR);
    let text = stdout(&run(&["--dot", "pcover", &f]));
    assert!(text.starts_with("graph"));
    assert_eq!(text.matches("penwidth").count(), 2);

    let f = write(dir.path(), "spider.txt", SPIDER_112);
    let o = run(&["--dot", "verify", "--suite", "duis", "--max-n", "4"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["--dot", "duis", &f]);
    assert!(stdout(&o).starts_with("graph"));
}
