//! End-to-end runs of the command-line tool.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn sfmoea(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sfmoea")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = sfmoea(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn gen_run_eval_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&["gen", "--kind", "euclidean", "--n", "25", "--seed", "1", "--out", &p(d, "a.txt")]);
    ok(&["gen", "--kind", "cluster", "--n", "25", "--seed", "2", "--out", &p(d, "b.txt")]);
    ok(&["gen", "--kind", "profits", "--n", "25", "--seed", "3", "--out", &p(d, "w.txt")]);
    ok(&["gen", "--kind", "scp", "--rows", "20", "--cols", "80", "--density", "0.1", "--seed", "4", "--out", &p(d, "s.txt")]);
    ok(&["gen", "--kind", "scp", "--rows", "20", "--cols", "80", "--density", "0.1", "--seed", "5", "--out", &p(d, "t.txt")]);
    ok(&["gen", "--kind", "scp3", "--first", &p(d, "s.txt"), "--second", &p(d, "t.txt"), "--out", &p(d, "s3.txt")]);
    assert!(fs::read_to_string(d.join("s3.txt")).unwrap().starts_with("20 80 3"));

    let common = ["--granularity", "12", "--generations", "2"];
    let a = p(d, "a.txt");
    let b = p(d, "b.txt");
    let tsp: Vec<&str> = ["run", "--method", "mogls", "--problem", "tsp", "--instance", &a, "--instance", &b]
        .into_iter()
        .chain(common)
        .collect();
    let mut first = tsp.clone();
    let out_a = p(d, "mogls.csv");
    first.extend(["--out", &out_a]);
    let line = ok(&first);
    assert!(line.contains("MOGLS"), "{line}");

    let mut second = tsp.clone();
    second[2] = "moead";
    let out_b = p(d, "moead.csv");
    second.extend(["--out", &out_b, "--neigh", "5", "--delta", "0.8", "--nr", "1"]);
    ok(&second);

    let wp = ["run", "--method", "umogls", "--problem", "tspwp", "--instance", &a, "--instance", &p(d, "w.txt")];
    let out_wp = p(d, "wp.csv");
    ok(&[&wp[..], &common, &["--out", &out_wp]].concat());
    let s3 = p(d, "s3.txt");
    let out_s3 = p(d, "s3.csv");
    ok(&["run", "--method", "momsls", "--problem", "scp", "--instance", &s3, "--granularity", "4", "--out", &out_s3]);
    assert!(fs::read_to_string(&out_s3).unwrap().starts_with("obj1,obj2,obj3\n"));

    let eval = ok(&["eval", "--archive", &out_a, "--archive", &out_b]);
    let lines: Vec<&str> = eval.lines().collect();
    assert_eq!(lines[0], "archive,points,R,HV");
    assert_eq!(lines.len(), 3);

    let explicit = ok(&[
        "eval", "--archive", &out_a, "--ref-mode", "explicit", "--ref-r", "0,0", "--ref-hv", "1e6,1e6", "--r-weights", "11",
    ]);
    assert_eq!(explicit.lines().count(), 2);
}

#[test]
fn experiment_compare_and_table() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&["gen", "--kind", "scp", "--rows", "20", "--cols", "60", "--density", "0.1", "--seed", "8", "--out", &p(d, "s.txt")]);
    let out = p(d, "exp");
    let text = ok(&[
        "experiment", "--problem", "scp", "--instance-set", &format!("tiny={}", p(d, "s.txt")), "--methods", "mogls,moead",
        "--preset", "moscp2", "--granularity", "10", "--generations", "2", "--replications", "5", "--out", &out,
    ]);
    assert!(text.contains("Wilcoxon"), "{text}");
    for f in ["results.csv", "timings.csv", "report.txt", "report.csv", "comparisons.csv"] {
        assert!(Path::new(&out).join(f).exists(), "{f} missing");
    }
    let results = format!("{out}/results.csv");
    let csv = fs::read_to_string(&results).unwrap();
    assert_eq!(csv.lines().count(), 11);

    let compare = ok(&["compare", "--results", &results]);
    assert!(compare.contains("MOEA/D") && compare.contains("MOGLS"), "{compare}");
    let table = ok(&["table", "--results", &results, "--indicator", "hv"]);
    assert!(table.contains("tiny") && !table.contains("R (lower"), "{table}");
}

#[test]
fn errors_exit_with_code_one() {
    let out = sfmoea(&["run", "--method", "mogls", "--problem", "scp", "--instance", "/nonexistent/x.txt", "--out", "/tmp/x.csv"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "3 4 2\n1 2 x\n").unwrap();
    let out = sfmoea(&["run", "--method", "mogls", "--problem", "scp", "--instance", &bad.to_string_lossy(), "--out", "/tmp/x.csv"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.txt:2:"), "{}", String::from_utf8_lossy(&out.stderr));

    let out = sfmoea(&["run", "--method", "moead", "--problem", "tsp", "--instance", "a", "--weights", "100", "--out", "x"]);
    assert_eq!(out.status.code(), Some(1));
}
