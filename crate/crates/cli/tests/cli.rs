use std::io::Write;
use std::process::{Command, Output};

use tempfile::NamedTempFile;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_max2csp"))
}

fn file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value<'a>(out: &'a str, key: &str) -> &'a str {
    out.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .unwrap_or_else(|| panic!("no {key} in {out}"))
}

const K5: &str = "p edge 5 10\ne 1 2\ne 1 3\ne 1 4\ne 1 5\ne 2 3\ne 2 4\ne 2 5\ne 3 4\ne 3 5\ne 4 5\n";

#[test]
fn solve_k5_with_every_algorithm() {
    let f = file(K5);
    let path = f.path().to_str().unwrap();
    for alg in ["a", "b", "dp", "forest", "oracle"] {
        let o = run(&["solve", path, "--format", "maxcut-dimacs", "--algorithm", alg]);
        assert!(o.status.success(), "{alg}");
        let out = stdout(&o);
        assert_eq!(value(&out, "score"), "6", "{alg}");
        assert_eq!(value(&out, "algorithm"), alg);
        assert_eq!(value(&out, "assignment").split(' ').count(), 5);
    }
    let out = stdout(&run(&["solve", path, "--format", "maxcut-dimacs", "--algorithm", "b"]));
    assert_eq!(value(&out, "iii_depth"), "2");
}

#[test]
fn stats_oracle_check_and_td() {
    let f = file(K5);
    let td = NamedTempFile::new().unwrap();
    let o = run(&[
        "solve",
        f.path().to_str().unwrap(),
        "--format",
        "maxcut-dimacs",
        "--stats",
        "--oracle-check",
        "--emit-td",
        td.path().to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(value(&out, "oracle_check"), "pass");
    assert_eq!(value(&out, "reductions_iii"), "2");
    let pace = std::fs::read_to_string(td.path()).unwrap();
    assert!(pace.starts_with("s td "));
    assert!(pace.lines().next().unwrap().ends_with(" 5 5"));
}

#[test]
fn oracle_budget_exit_code() {
    let f = file(K5);
    let o = bin()
        .args(["solve", f.path().to_str().unwrap(), "--format", "maxcut-dimacs", "--algorithm", "oracle"])
        .env("MAX2CSP_ORACLE_BUDGET", "16")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}

#[test]
fn malformed_input_exit_code() {
    let f = file("p edge 3 1\ne 1\n");
    let o = run(&["solve", f.path().to_str().unwrap(), "--format", "maxcut-dimacs"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    let o = run(&["solve", "/nonexistent/file", "--format", "csp"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["solve", f.path().to_str().unwrap(), "--format", "yaml"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn lp_verify_prints_optima() {
    let o = run(&["lp-verify"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "tableA=1/5"));
    assert!(out.lines().any(|l| l == "tableB=19/100"));
    assert_eq!(value(&out, "dualA"), "pass");
    assert!(!out.contains("fail"));
    let tsv = stdout(&run(&["lp-verify", "--tsv", "a"]));
    assert!(tsv.lines().count() > 5);
    assert_eq!(run(&["lp-verify", "--tsv", "z"]).status.code(), Some(2));
}

#[test]
fn generate_is_deterministic() {
    let a = stdout(&run(&["generate", "gnm", "--n", "10", "--m", "15", "--seed", "7"]));
    let b = stdout(&run(&["generate", "gnm", "--n", "10", "--m", "15", "--seed", "7"]));
    assert_eq!(a, b);
    assert!(a.starts_with("p edge 10 15\n"));
    let k = stdout(&run(&["generate", "union-k5", "--k", "3"]));
    assert!(k.starts_with("p edge 15 30\n"));
    assert_eq!(run(&["generate", "cubic", "--n", "7"]).status.code(), Some(2));
}

#[test]
fn native_wcnf_and_mis_inputs() {
    let csp = file("p csp 2 3\ns 1\nn 1 0 0 5\ne 1 2 0 0 0 0 0 0 0 0 -9\n");
    let out = stdout(&run(&["solve", csp.path().to_str().unwrap()]));
    assert_eq!(value(&out, "score"), "6");
    assert_eq!(value(&out, "assignment"), "1:2 2:0");

    let wcnf = file("p wcnf 2 3\n1 1 2 0\n1 -1 2 0\n2 -2 0\n");
    let out = stdout(&run(&["solve", wcnf.path().to_str().unwrap(), "--format", "wcnf", "--algorithm", "a"]));
    assert_eq!(value(&out, "score"), "3");

    let petersen = "p edge 10 15\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 5 1\ne 1 6\ne 2 7\ne 3 8\ne 4 9\ne 5 10\n\
                    e 6 8\ne 8 10\ne 10 7\ne 7 9\ne 9 6\n";
    let mis = file(petersen);
    for alg in ["mis", "b"] {
        let out = stdout(&run(&["solve", mis.path().to_str().unwrap(), "--format", "mis", "--algorithm", alg]));
        assert_eq!(value(&out, "score"), "4", "{alg}");
    }
    let o = run(&["solve", csp.path().to_str().unwrap(), "--algorithm", "mis"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn tree_tw_and_bench() {
    let f = file(K5);
    let p = f.path().to_str().unwrap();
    let out = stdout(&run(&["tree", p, "--format", "maxcut-dimacs"]));
    assert_eq!(value(&out, "iii_depth"), "2");
    assert_eq!(out.lines().filter(|l| l.starts_with("node=")).count(), 5);
    let td = NamedTempFile::new().unwrap();
    let out = stdout(&run(&["tw", p, "--format", "maxcut-dimacs", "--emit-td", td.path().to_str().unwrap()]));
    assert_eq!(value(&out, "width"), "4");
    assert_eq!(value(&out, "valid"), "true");
    assert!(std::fs::read_to_string(td.path()).unwrap().starts_with("s td"));
    let out = stdout(&run(&["bench", "cubic", "--n", "12", "--count", "3", "--seed", "5"]));
    assert_eq!(out.lines().count(), 3);
    assert!(out.lines().all(|l| l.contains("n=12 m=18")));
    let again = stdout(&run(&["bench", "cubic", "--n", "12", "--count", "3", "--seed", "5"]));
    let strip = |s: &str| s.lines().map(|l| l.split(" elapsed_ms").next().unwrap().to_owned()).collect::<Vec<_>>();
    assert_eq!(strip(&out), strip(&again));
}
