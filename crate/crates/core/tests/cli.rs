use std::path::Path;

use cspadv::cli::{run, EXIT_ASSERTION, EXIT_OK, EXIT_PRECONDITION, EXIT_SPEC};
use cspadv::csp::parse_instance;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cli(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("cspadv").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Run { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(s: &str) -> serde_json::Value {
    serde_json::from_str(s.trim()).unwrap()
}

#[test]
fn gen_gadget_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.csp");
    let r = cli(&["gen", "--kind", "nae-ae", "--out", path(&file)]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let text = std::fs::read_to_string(&file).unwrap();
    assert!(text.starts_with("# gen kind=nae-ae"));
    let inst = parse_instance(&text).unwrap();
    assert_eq!((inst.n(), inst.m()), (6, 8));
}

#[test]
fn gen_kxor_validates() {
    let r = cli(&["gen", "--kind", "kxor", "--n", "100", "--k", "3", "--d", "6", "--seed", "1"]);
    assert_eq!(r.code, EXIT_OK);
    let inst = parse_instance(&r.stdout).unwrap();
    assert!(inst.validate().is_ok());
    assert!(inst.max_degree() <= 6);
    assert!(r.stdout.contains("seed=1"));
}

#[test]
fn gen_complete_cut() {
    let r = cli(&["gen", "--kind", "complete-cut", "--n", "10"]);
    assert_eq!(parse_instance(&r.stdout).unwrap().m(), 45);
}

#[test]
fn gen_infeasible_is_spec_error() {
    let r = cli(&["gen", "--kind", "kxor", "--n", "2", "--k", "3", "--d", "1"]);
    assert_eq!(r.code, EXIT_SPEC);
    assert!(r.stderr.contains("error"));
}

#[test]
fn solve_brute_on_gadget() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.csp");
    cli(&["gen", "--kind", "nae-ae", "--out", path(&file)]);
    let r = cli(&["solve", "--alg", "brute", path(&file)]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let report = json(&r.stdout);
    assert_eq!(report["value"], 0.5);
    assert_eq!(report["m"], 8);
}

#[test]
fn solve_trifree_names_overlapping_constraints() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("o.csp");
    std::fs::write(&file, "p csp 4 2\nx 3 0 1 2 1\nx 3 1 2 3 -1\n").unwrap();
    let r = cli(&["solve", "--alg", "trifree", path(&file)]);
    assert_eq!(r.code, EXIT_PRECONDITION);
    assert!(r.stderr.contains("constraints 0 and 1"), "{}", r.stderr);
}

#[test]
fn solve_derand_is_byte_identical_without_millis() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("k.csp");
    cli(&["gen", "--kind", "kxor", "--n", "60", "--k", "3", "--d", "5", "--seed", "3", "--out", path(&file)]);
    let strip = |s: &str| {
        let mut v = json(s);
        v.as_object_mut().unwrap().remove("millis");
        v.to_string()
    };
    let a = cli(&["solve", "--alg", "xor3", "--derand", path(&file)]);
    let b = cli(&["solve", "--alg", "xor3", "--derand", path(&file)]);
    assert_eq!(a.code, EXIT_OK);
    assert_eq!(strip(&a.stdout), strip(&b.stdout));
    let report = json(&a.stdout);
    for key in ["alg", "seed", "n", "m", "D", "mu", "value", "advantage", "trials", "millis"] {
        assert!(report.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn solve_writes_assignment() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("k.csp");
    let xfile = dir.path().join("x.json");
    cli(&["gen", "--kind", "kxor", "--n", "40", "--k", "4", "--d", "3", "--out", path(&file)]);
    let r = cli(&["solve", "--alg", "advrand", "--seed", "9", "--reps", "300", path(&file), "--assignment", path(&xfile)]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let x: Vec<i8> = serde_json::from_str(&std::fs::read_to_string(&xfile).unwrap()).unwrap();
    let inst = parse_instance(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(json(&r.stdout)["satisfied"], inst.satisfied_count(&x).unwrap());
}

#[test]
fn solve_missing_file_and_bad_syntax() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.csp");
    assert_eq!(cli(&["solve", "--alg", "xor3", path(&missing)]).code, EXIT_SPEC);
    let bad = dir.path().join("bad.csp");
    std::fs::write(&bad, "p csp 3 1\nx 3 0 1\n").unwrap();
    let r = cli(&["solve", "--alg", "xor3", path(&bad)]);
    assert_eq!(r.code, EXIT_SPEC);
    assert!(r.stderr.contains("line 2"), "{}", r.stderr);
    assert_eq!(cli(&["solve", "--alg", "simplex", path(&bad)]).code, EXIT_SPEC);
}

#[test]
fn check_reports_structure() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("g.csp");
    cli(&["gen", "--kind", "triangle-free", "--n", "50", "--k", "3", "--d", "3", "--out", path(&good)]);
    let r = cli(&["check", "--triangle-free", path(&good)]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    assert_eq!(json(&r.stdout)["triangle_free"]["status"], "ok");

    let tri = dir.path().join("t.csp");
    std::fs::write(&tri, "p csp 3 3\nx 2 0 1 1\nx 2 1 2 1\nx 2 2 0 1\n").unwrap();
    let r = cli(&["check", "--triangle-free", path(&tri)]);
    assert_eq!(r.code, EXIT_PRECONDITION);
    assert!(r.stderr.contains("hyper-triangle"));

    let rep = dir.path().join("r.csp");
    std::fs::write(&rep, "p csp 3 1\nx 3 0 0 1 1\n").unwrap();
    let r = cli(&["check", path(&rep)]);
    assert_eq!(r.code, EXIT_PRECONDITION);
    assert!(r.stdout.contains("repeated coordinate"));
}

#[test]
fn check_distribution_of_gadget() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.csp");
    cli(&["gen", "--kind", "nae-ae", "--out", path(&file)]);
    let r = cli(&["check", "--distribution", path(&file)]);
    assert_eq!(json(&r.stdout)["distribution"], serde_json::json!([0, 0, 0, 0, 64, 0, 0, 0, 0]));
}

#[test]
fn bench_small_sweep_csv() {
    let r = cli(&["--jobs", "2", "bench", "--alg", "xor3", "--n", "80", "--d", "2,4", "--seeds", "3"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let mut reader = csv::Reader::from_reader(r.stdout.as_bytes());
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.iter().filter(|r| &r[0] == "row").count(), 6);
    assert_eq!(rows.iter().filter(|r| &r[0] == "summary").count(), 2);
    assert!(r.stderr.contains("mean advantage"));
}

#[test]
fn bench_assert_prints_one_line_per_check() {
    let r = cli(&["bench", "--alg", "xor3", "--n", "30", "--d", "1,64", "--seeds", "1", "--assert"]);
    assert!(r.code == EXIT_OK || r.code == EXIT_ASSERTION, "{}", r.stderr);
    let lines: Vec<&str> = r.stderr.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(r.code == EXIT_ASSERTION, lines.iter().any(|l| l.starts_with("FAIL")));
}

#[test]
fn help_and_unknown_commands() {
    assert_eq!(cli(&["--help"]).code, EXIT_OK);
    assert_eq!(cli(&["frobnicate"]).code, EXIT_SPEC);
}
