//! End-to-end tests of the `sup` binary: output formats, determinism,
//! exit codes, and the shipped files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sup_core::print::print_prop;
use sup_core::stdlib::prelude;

fn sup() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sup"))
}

fn repo_file(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn write_fixture(name: &str, content: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("sup-cli-test-{name}"));
    std::fs::write(&path, content).expect("write fixture");
    path
}

const MEASURE_FILE: &str = "#mode scalar
def q : T (+) T = 1/sqrt(2) . * + 1/sqrt(2) . *
def measured : T \\/ T = case_sup(q, [_] inl(*, T), [_] inr(*, T))
";

#[test]
fn check_prelude_prints_every_declared_proposition() {
    let out = sup().arg("check").arg(repo_file("prelude.sup")).output().unwrap();
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let expected: String = prelude()
        .iter()
        .map(|d| format!("{} : {}\n", d.name, print_prop(&d.prop)))
        .collect();
    assert_eq!(stdout(&out), expected);
}

#[test]
fn check_accepts_the_basis_change_demo() {
    let out = sup().arg("check").arg(repo_file("demos/basis_change.sup")).output().unwrap();
    assert!(out.status.success(), "stderr: {}", stderr(&out));
}

#[test]
fn deutsch_demo_verdicts() {
    let cases = [
        ("const0", "false : 1.0  => constant\n"),
        ("const1", "false : 1.0  => constant\n"),
        ("id", "true : 1.0  => balanced\n"),
        ("not", "true : 1.0  => balanced\n"),
    ];
    for (f, expected) in cases {
        let out = sup().args(["demo", "deutsch", "--fn", f]).output().unwrap();
        assert!(out.status.success());
        assert_eq!(stdout(&out), expected, "--fn {f}");
    }
}

#[test]
fn dist_output_is_byte_identical_across_runs() {
    let file = write_fixture("measure.sup", MEASURE_FILE);
    let run = || {
        let out = sup().arg("dist").arg(&file).args(["--def", "measured"]).output().unwrap();
        assert!(out.status.success(), "stderr: {}", stderr(&out));
        stdout(&out)
    };
    let first = run();
    assert_eq!(
        first,
        "inl(*, T) 5.0000000000000000e-1\ninr(*, T) 5.0000000000000000e-1\n"
    );
    assert_eq!(first, run());
}

#[test]
fn run_policies_and_seeds_are_deterministic() {
    let file = write_fixture("policy.sup", MEASURE_FILE);
    let with = |args: &[&str]| {
        let out = sup().arg("run").arg(&file).args(["--def", "measured"]).args(args).output().unwrap();
        assert!(out.status.success(), "stderr: {}", stderr(&out));
        stdout(&out)
    };
    assert_eq!(with(&["--policy", "left"]), "inl(*, T)\n");
    assert_eq!(with(&["--policy", "right"]), "inr(*, T)\n");
    let a = with(&["--policy", "sample", "--seed", "11"]);
    let b = with(&["--policy", "sample", "--seed", "11"]);
    assert_eq!(a, b);
    assert!(a == "inl(*, T)\n" || a == "inr(*, T)\n");
}

#[test]
fn sample_reports_counts_and_chi_square() {
    let file = write_fixture("sample.sup", MEASURE_FILE);
    let out = sup()
        .arg("sample")
        .arg(&file)
        .args(["--def", "measured", "--samples", "1000", "--seed", "3"])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3, "{text}");
    let counts: u64 = lines[..2]
        .iter()
        .map(|l| l.split_whitespace().nth(2).unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(counts, 1000);
    assert!(lines[2].starts_with("chi-square "), "{text}");
}

#[test]
fn unicode_flag_changes_the_rendering() {
    let file = write_fixture("unicode.sup", MEASURE_FILE);
    let out = sup().arg("check").arg(&file).arg("--unicode").output().unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("T ⊙ T"), "{}", stdout(&out));
}

#[test]
fn parse_and_type_errors_exit_one() {
    let bad_syntax = write_fixture("bad-syntax.sup", "def q : T = case_sup(\n");
    let out = sup().arg("check").arg(&bad_syntax).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("error:"));

    let bad_type = write_fixture("bad-type.sup", "def q : F = *\n");
    let out = sup().arg("check").arg(&bad_type).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("`q`"), "{}", stderr(&out));

    let plain_weights = write_fixture(
        "plain-weights.sup",
        "#mode plain\ndef q : T (+) T = 1 . * + 0 . *\n",
    );
    let out = sup().arg("check").arg(&plain_weights).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("plain mode"), "{}", stderr(&out));

    let missing = sup().arg("check").arg("/nonexistent/x.sup").output().unwrap();
    assert_eq!(missing.status.code(), Some(1));

    let file = write_fixture("nodef.sup", MEASURE_FILE);
    let out = sup().arg("run").arg(&file).args(["--def", "ghost"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn step_limit_exits_two() {
    let file = write_fixture("steps.sup", MEASURE_FILE);
    let out = sup()
        .arg("run")
        .arg(&file)
        .args(["--def", "measured", "--max-steps", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("step limit"), "{}", stderr(&out));
}

#[test]
fn usage_errors_exit_three() {
    let out = sup().arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = sup().args(["demo", "deutsch", "--fn", "xyzzy"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = sup().arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn sup_color_controls_diagnostic_styling() {
    let o = sup().arg("check").arg("/nonexistent/x.sup").env("SUP_COLOR", "1").output().unwrap();
    assert!(stderr(&o).contains("\x1b[31m"), "{}", stderr(&o));
    let o = sup().arg("check").arg("/nonexistent/x.sup").env("SUP_COLOR", "0").output().unwrap();
    assert!(!stderr(&o).contains("\x1b["), "{}", stderr(&o));
}

#[test]
fn basis_change_demo_distributions() {
    let path = repo_file("demos/basis_change.sup");
    let out = sup().arg("dist").arg(&path).args(["--def", "stay_plus"]).output().unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1, "{text}");
    assert!(text.contains("1.0000000000000000e0"));
    let out = sup().arg("dist").arg(&path).args(["--def", "collapse_zero"]).output().unwrap();
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 2, "{text}");
    assert_eq!(text.matches("5.0000000000000000e-1").count(), 2);
}
