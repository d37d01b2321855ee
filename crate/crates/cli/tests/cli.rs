use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_cohenexp"));
    c.env_remove("COHENEXP_TABLE");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn fixture(name: &str, text: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-fixtures");
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn even_model() -> PathBuf {
    fixture(
        "even.model",
        "# S^4-like, r = 1\nmodel r=1 trunc=6 profile u2=0 u3=3\ngen 1 order=inf\ngen 2 order=9\ngen 3 order=inf\n",
    )
}

fn odd_model() -> PathBuf {
    fixture(
        "odd.model",
        "model r=2 trunc=6 profile u2=2 u3=1\ngen 1 order=25\ngen 2 order=25\ngen 3 order=5\n",
    )
}

#[test]
fn exp_complex_projective() {
    let o = run(&["exp", "--space", "CP:2", "--r", "3", "--p", "3"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("exact 3^2"));
    let rest: Vec<&str> = lines.collect();
    assert!(rest.iter().any(|l| l.trim_start().starts_with("complex-projective:")));
    assert!(rest.iter().any(|l| l.trim_start().starts_with("cohen-sphere:")));
}

#[test]
fn exp_regressions() {
    for (space, p, want) in [("RP:7", "7", "exact 7^3"), ("HP:inf", "5", "exact 5^3"), ("S:4", "3", "exact 3^3")] {
        let o = run(&["exp", "--space", space, "--r", "2", "--p", p]);
        assert!(o.status.success(), "{space}");
        assert_eq!(stdout(&o).lines().next(), Some(want), "{space}");
    }
    let o = run(&["exp", "--space", "S:4", "--r", "1", "--p", "2"]);
    assert!(stdout(&o).starts_with("interval [2^"));
}

#[test]
fn exp_tsv() {
    let o = run(&["--tsv", "exp", "--space", "HP:inf", "--r", "1", "--p", "7"]);
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("HP:inf\t7\texact 7^3\t3\t3"));
    assert!(out.lines().skip(1).all(|l| l.starts_with("rule\t")));
}

#[test]
fn pow_zero_is_identity() {
    let m = odd_model();
    let e = fixture("single.elem", "slot 1 : g1\n");
    let o = run(&["pow", m.to_str().unwrap(), e.to_str().unwrap(), "0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "identity\n");
}

#[test]
fn pow_closed_form_cross_checks() {
    let m = even_model();
    let o = run(&["pow", m.to_str().unwrap(), "slot 1 : g1; slot 2 : 2*g2", "5", "--closed-form"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.starts_with("slot 1 : 5*g1\n"));
    assert!(out.ends_with("# agrees with iteration\n"));
    let o = run(&["pow", m.to_str().unwrap(), "slot 1 : g1", "5", "--closed-form"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn mul_prints_bracket_correction() {
    let m = even_model();
    let o = run(&["mul", m.to_str().unwrap(), "slot 1 : g1", "slot 1 : g1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "slot 1 : 2*g1\nslot 2 : 1*[g1,g1]\n");
    let o = run(&["--tsv", "mul", m.to_str().unwrap(), "slot 1 : g1", "slot 1 : -g1"]);
    assert_eq!(stdout(&o), "2\t-1*[g1,g1]\n");
}

#[test]
fn order_finite_and_infinite() {
    let m = odd_model();
    let o = run(&["order", m.to_str().unwrap(), "slot 1 : g1; slot 2 : g2"]);
    assert_eq!(stdout(&o), "25\n");
    let m = even_model();
    let o = run(&["order", m.to_str().unwrap(), "slot 2 : g2"]);
    assert_eq!(stdout(&o), "9\n");
    let o = run(&["order", m.to_str().unwrap(), "slot 3 : g3"]);
    assert_eq!(stdout(&o), "infinite (witness slot 3)\n");
}

#[test]
fn coefficient_spot_checks() {
    assert_eq!(stdout(&run(&["phi", "4", "6"])), "-3\n");
    assert_eq!(stdout(&run(&["phi", "3", "6"])), "0\n");
    assert_eq!(stdout(&run(&["binom", "10", "4", "--mod", "3"])), "0\n");
    assert_eq!(stdout(&run(&["binom", "7", "3", "--mod", "5"])), "0\n");
    assert_eq!(stdout(&run(&["binom", "7", "2", "--mod", "5"])), "1\n");
}

#[test]
fn verify_suites() {
    let o = run(&["verify", "--suite", "hp-infty"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().all(|l| l.starts_with("pass")));
    let o = run(&["--tsv", "verify", "--suite", "remark", "--cases", "100", "--seed", "4"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().all(|l| l.split('\t').count() == 3));
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "--suite", "tor", "--cases", "50", "--seed", "9"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn bracket_order_experiment() {
    let m = even_model();
    let o = run(&["experiment", "bracket-order", "--model", m.to_str().unwrap()]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("# orders in the formal model"));
    assert!(out.contains("[g1,g1]"));
    assert!(out.contains("[[g1,g1],g1]"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["phi", "x", "2"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["exp", "--space", "T:3", "--r", "1", "--p", "3"]).status.code(), Some(2));
    assert_eq!(run(&["phi", "3", "2"]).status.code(), Some(1));
    assert_eq!(run(&["binom", "3", "2", "--mod", "4"]).status.code(), Some(1));
    assert_eq!(run(&["exp", "--space", "S:4", "--r", "1", "--p", "6"]).status.code(), Some(1));
    let m = even_model();
    let o = run(&["mul", m.to_str().unwrap(), "slot 9 : g1", "slot 1 : g1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
    assert_eq!(run(&["order", "/nonexistent.model", "identity"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn table_override() {
    let o = bin()
        .env("COHENEXP_TABLE", "/nonexistent/table.txt")
        .args(["exp", "--space", "S:3", "--r", "1", "--p", "2"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));

    let bundled = include_str!("../../core/data/homotopy_groups.txt");
    // keep only π_3, π_4, π_5 of S^3, so no element of order 4 is left
    let keep = |l: &str| !l.starts_with("pi 3 ") || ["pi 3 0 ", "pi 3 1 ", "pi 3 2 "].iter().any(|k| l.starts_with(k));
    let trimmed: String = bundled.lines().filter(|l| keep(l)).map(|l| format!("{l}\n")).collect();
    let path = fixture("trimmed.txt", &trimmed);
    let with = |env: Option<&PathBuf>| {
        let mut c = bin();
        if let Some(p) = env {
            c.env("COHENEXP_TABLE", p);
        }
        stdout(&c.args(["exp", "--space", "S:3", "--r", "1", "--p", "2"]).output().unwrap())
    };
    assert_ne!(with(None), with(Some(&path)));
}
