use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ramsey-cube"));
    c.env_remove("RAMSEY_CUBE_BUDGET");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

/// Exit code, `exit_code` field and per-check witnesses agree.
fn assert_consistent(o: &Output) -> Value {
    let v = json(o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["exit_code"].as_i64().unwrap(), code(o) as i64);
    for c in v["checks"].as_array().into_iter().flatten() {
        match c["status"].as_str().unwrap() {
            "fail" => assert!(!c["witness"].is_null(), "{c}"),
            "indefinite" => assert!(!c["budget"].is_null(), "{c}"),
            _ => {}
        }
    }
    v
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn build_then_verify_has_no_c5() {
    let dir = tempfile::tempdir().unwrap();
    let g = p(dir.path(), "g.txt");
    let o = run(&["colouring", "build", "--k", "3", "--n", "5", "--matching-class", "0", "--out", &g]);
    assert_eq!(code(&o), 0);
    let o = run(&["--json", "verify", "cycles", "--graph", &g, "--length", "5"]);
    assert_eq!(code(&o), 0);
    assert_consistent(&o);
    let o = run(&["--json", "colouring", "verify", "--graph", &g, "--n", "5"]);
    assert_eq!(code(&o), 0);
    assert_consistent(&o);
    let o = run(&["--json", "verify", "cycles", "--graph", &g, "--forbid-cycle", "4"]);
    assert_eq!(code(&o), 1);
    assert_consistent(&o);
}

#[test]
fn classify_k4_prints_eight() {
    let o = run(&["matchings", "classify", "--k", "4"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "8");
    let o = run(&["matchings", "enumerate", "--k", "4"]);
    assert_eq!(stdout(&o).trim(), "272");
}

#[test]
fn maxnorm_reaches_two() {
    let o = run(&["--json", "opt", "maxnorm", "--k", "2", "--gamma", "0"]);
    assert_eq!(code(&o), 0);
    let v = assert_consistent(&o);
    let value = v["result"]["value"].as_f64().unwrap();
    assert!((value - 2.0).abs() <= 1e-4, "{value}");
}

#[test]
fn same_seed_gives_identical_json() {
    let args = ["--json", "--seed", "7", "opt", "maxnorm", "--k", "3", "--gamma", "0", "--restarts", "16"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let mut threaded = vec!["--threads", "1"];
    threaded.extend_from_slice(&args);
    assert_eq!(run(&threaded).stdout, a.stdout);
    let dir = tempfile::tempdir().unwrap();
    let g = p(dir.path(), "g.txt");
    let build = ["colouring", "build", "--k", "3", "--n", "5", "--matching-class", "1", "--cross", "seeded", "--seed", "3", "--out"];
    run(&[&build[..], &[g.as_str()]].concat());
    let profile = ["--json", "--seed", "5", "profile", "compute", "--graph", &g, "--choice", "seeded"];
    assert_eq!(run(&profile).stdout, run(&profile).stdout);
}

#[test]
fn timings_only_on_request() {
    let o = run(&["--json", "opt", "shift", "--alpha", "2,3"]);
    assert!(json(&o).get("timings").is_none());
    let o = run(&["--json", "--timings", "opt", "shift", "--alpha", "2,3"]);
    assert!(json(&o)["timings"]["total_seconds"].is_number());
}

#[test]
fn malformed_inputs_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = p(dir.path(), "bad.txt");
    std::fs::write(&bad, "not a graph\n").unwrap();
    assert_eq!(code(&run(&["verify", "cycles", "--graph", &bad, "--length", "5"])), 2);
    assert_eq!(code(&run(&["verify", "cycles", "--graph", &p(dir.path(), "missing.txt"), "--length", "5"])), 2);
    assert_eq!(code(&run(&["opt", "shift", "--alpha", "1,2"])), 2);
    assert_eq!(code(&run(&["opt", "kkt", "--alpha", "2,1", "--ell", "1"])), 2);
    assert_eq!(code(&run(&["matchings", "classify", "--k", "5"])), 2);
    assert_eq!(code(&run(&["no-such-command"])), 2);
    let o = run(&["--json", "opt", "shift", "--alpha", "1"]);
    assert_eq!(json(&o)["exit_code"], 2);
}

#[test]
fn budget_exhaustion_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let g = p(dir.path(), "g.txt");
    run(&["colouring", "build", "--k", "3", "--n", "7", "--matching-class", "0", "--out", &g]);
    let o = bin()
        .env("RAMSEY_CUBE_BUDGET", "3")
        .args(["--json", "verify", "cycles", "--graph", &g, "--length", "7"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
    assert_consistent(&o);
}

#[test]
fn opt_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let vec = p(dir.path(), "v.txt");
    std::fs::write(&vec, "*0 1\n*1 1\n").unwrap();
    let o = run(&["--json", "opt", "f", "--vec", &vec]);
    assert_eq!(code(&o), 0);
    let v = assert_consistent(&o);
    assert_eq!(v["result"]["f"].as_f64(), Some(0.0));

    let o = run(&["--json", "opt", "nearest-o", "--vec", &vec]);
    assert_eq!(json(&o)["result"]["distance"].as_f64(), Some(0.0));

    let o = run(&["--json", "opt", "kkt", "--alpha", "2,2", "--ell", "0"]);
    assert_eq!(code(&o), 0);
    assert!((json(&o)["result"]["solution"]["bound"].as_f64().unwrap() - 4.0).abs() < 1e-12);

    let o = run(&["--json", "opt", "shift", "--alpha", "2,2"]);
    assert_eq!(json(&o)["result"]["equality"], true);

    std::fs::write(&vec, "*0 0.7\n** 0.5\n").unwrap();
    let o = run(&["--json", "opt", "compress", "--vec", &vec, "--from", "*0", "--to", "**"]);
    assert_eq!(code(&o), 0);
    let o = run(&["--json", "opt", "compress", "--vec", &vec, "--fixpoint"]);
    assert_consistent(&o);
}

#[test]
fn check_graph_on_hypercube_colouring() {
    let dir = tempfile::tempdir().unwrap();
    let g = p(dir.path(), "g.txt");
    run(&["colouring", "build", "--k", "2", "--n", "5", "--out", &g]);
    let o = run(&["--json", "opt", "check-graph", "--graph", &g, "--n", "5", "--delta", "0.2"]);
    assert_eq!(code(&o), 0);
    let v = assert_consistent(&o);
    assert_eq!(v["result"]["report"]["critical"], false);
}

#[test]
fn labelling_find_and_check() {
    let dir = tempfile::tempdir().unwrap();
    let input = p(dir.path(), "psi.txt");
    std::fs::write(&input, "3\n00* 01* 1*0 1*1\n0 1 2\n2 3 3\n0 2 1\n").unwrap();
    let out = p(dir.path(), "phi.txt");
    let o = run(&["--json", "label", "find", "--in", &input, "--out", &out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_consistent(&o);
    let o = run(&["--json", "label", "check", "--in", &input, "--labelling", &out]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["result"]["admissible"], true);

    std::fs::write(&input, "3\n00* 01* 1*0 1*1\n0 2 1\n2 3 1\n0 3 1\n").unwrap();
    let o = run(&["--json", "label", "find", "--in", &input]);
    assert_eq!(code(&o), 1);
    assert_consistent(&o);
}

#[test]
fn odd_matching_and_eg() {
    let dir = tempfile::tempdir().unwrap();
    let g = p(dir.path(), "g.txt");
    run(&["colouring", "build", "--k", "2", "--n", "5", "--out", &g]);
    let o = run(&["--json", "verify", "odd-matching", "--graph", &g]);
    assert_consistent(&o);
    let o = run(&["--json", "verify", "eg", "--graph", &g, "--m", "5"]);
    assert_consistent(&o);
}
