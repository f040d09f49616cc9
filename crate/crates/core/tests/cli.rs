use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

const BIN: &str = env!("CARGO_BIN_EXE_antifactor");

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(BIN)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_graph(name: &str, text: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

const TRIPLE: &str = "bmg 1 1\ne 1 1 3\n";
const K33: &str = "bmg 3 3\ne 1 1 1\ne 1 2 1\ne 1 3 1\ne 2 1 1\ne 2 2 1\ne 2 3 1\ne 3 1 1\ne 3 2 1\ne 3 3 1\n";
const DOUBLED_C4: &str = "bmg 2 2\ne 1 1 2\ne 1 2 1\ne 2 1 1\ne 2 2 2\n";

#[test]
fn pm_from_stdin() {
    let o = run(&["pm", "-", "--mod", "3"], Some(TRIPLE));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0\n");
    let o = run(&["pm", "-"], Some(K33));
    assert_eq!(stdout(&o), "6\n");
}

#[test]
fn k2_is_infeasible() {
    let k2 = write_graph("k2.bmg", "bmg 1 1\ne 1 1 2\n");
    let o = run(&["antifactor", k2.to_str().unwrap(), "--alpha", "const:1"], None);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "INFEASIBLE\n");
}

#[test]
fn missing_file_is_an_input_error() {
    let o = run(&["pm", "definitely-missing.bmg"], None);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
    assert!(err.contains("definitely-missing.bmg"));
}

#[test]
fn malformed_input_and_usage_errors_exit_2() {
    let o = run(&["pm", "-"], Some("bmg 1 1\ne 2 1 1\n"));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("line 2"));
    assert_eq!(run(&["pm", "-", "--bogus"], Some(TRIPLE)).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"], None).status.code(), Some(2));
    assert_eq!(run(&["antifactor", "-", "--alpha", "sometimes"], Some(TRIPLE)).status.code(), Some(2));
}

#[test]
fn info_lines() {
    let first = |g| stdout(&run(&["info", "-"], Some(g))).lines().next().unwrap().to_string();
    assert_eq!(first(K33), "3 3 q=3 connected simple");
    assert_eq!(first(TRIPLE), "1 1 q=3 connected multigraph");
    assert!(first("bmg 2 2\ne 1 1 2\ne 2 2 1\n").contains("q=irregular"));
}

#[test]
fn color_lists_every_edge_instance() {
    let o = run(&["color", "-"], Some(DOUBLED_C4));
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<Vec<u32>> = text
        .lines()
        .map(|l| l.split(' ').map(|t| t.parse().unwrap()).collect())
        .collect();
    assert_eq!(lines.len(), 6);
    for u in 1..=2 {
        let mut cs: Vec<u32> = lines.iter().filter(|l| l[0] == u).map(|l| l[3]).collect();
        cs.sort();
        assert_eq!(cs, vec![0, 1, 2]);
    }
}

#[test]
fn antifactor_and_verify_round_trip() {
    let o = run(&["antifactor", "-", "--alpha", "const:1"], Some(DOUBLED_C4));
    assert_eq!(o.status.code(), Some(0));
    let choice: Vec<String> = stdout(&o)
        .lines()
        .map(|l| l.split(" -> ").nth(1).unwrap().to_string())
        .collect();
    let o = run(
        &["verify", "-", "--alpha", "const:1", "--choice", &choice.join(",")],
        Some(DOUBLED_C4),
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "VALID\n");
    let o = run(&["verify", "-", "--alpha", "const:1", "--choice", "1,2"], Some(DOUBLED_C4));
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["antifactor", "-", "--alpha", "list:1,1", "--method", "polynomial"], Some(DOUBLED_C4));
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn coeff_matches() {
    let o = run(&["coeff", "-"], Some(DOUBLED_C4));
    assert_eq!(stdout(&o), "2 2 MATCH\n");
    let o = run(&["coeff", "-", "--alpha", "const:1"], Some(TRIPLE));
    assert_eq!(stdout(&o), "0 0 MATCH\n");
}

#[test]
fn bad_verdicts() {
    let o = run(&["bad", "-"], Some(TRIPLE));
    assert_eq!((o.status.code(), stdout(&o)), (Some(1), "BAD\n".to_string()));
    let o = run(&["bad", "-"], Some(DOUBLED_C4));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), format!("NOT-BAD\n{DOUBLED_C4}"));
}

#[test]
fn gen_requires_seed_for_random_models() {
    assert_eq!(run(&["gen", "--model", "random", "--n", "4", "--q", "3"], None).status.code(), Some(2));
    let a = run(&["gen", "--model", "random", "--n", "4", "--q", "3", "--seed", "9"], None);
    let b = run(&["gen", "--model", "random", "--n", "4", "--q", "3", "--seed", "9"], None);
    assert_eq!(a.stdout, b.stdout);
    let o = run(&["gen", "--model", "cycle", "--len", "4", "--q", "3"], None);
    assert_eq!(stdout(&o), DOUBLED_C4);
    assert_eq!(run(&["experiment", "--q", "3", "--n", "4", "--samples", "10"], None).status.code(), Some(2));
}

#[test]
fn experiment_csv_and_modulus() {
    let o = run(
        &["experiment", "--q", "1", "--n", "3", "--samples", "5", "--seed", "2", "--mod", "3"],
        None,
    );
    assert_eq!(stdout(&o), "residue,count,proportion\n0,0,0\n1,5,1\n2,0,0\n");
    let o = run(&["experiment", "--q", "3", "--n", "3", "--model", "exhaustive", "--format", "csv"], None);
    assert_eq!(stdout(&o), "residue,count,proportion\n0,1,1\n1,0,0\n2,0,0\n");
}

#[test]
fn every_subcommand_emits_one_json_document() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["info", "-"],
        vec!["pm", "-"],
        vec!["pm", "-", "--mod", "5"],
        vec!["color", "-"],
        vec!["antifactor", "-", "--alpha", "const:1"],
        vec!["antifactor", "-", "--alpha", "const:0"],
        vec!["verify", "-", "--alpha", "const:1", "--choice", "1,1"],
        vec!["coeff", "-"],
        vec!["bad", "-"],
        vec!["gen", "--model", "complete", "--n", "2"],
        vec!["experiment", "--q", "2", "--n", "3", "--samples", "20", "--seed", "1"],
    ];
    for args in cases {
        let mut full = vec!["--json"];
        full.extend(&args);
        let o = run(&full, Some(DOUBLED_C4));
        assert!(matches!(o.status.code(), Some(0 | 1)), "{args:?}");
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}"));
        assert!(v.is_object(), "{args:?}");
    }
}
