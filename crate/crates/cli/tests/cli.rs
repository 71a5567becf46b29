use std::path::Path;
use std::process::{Command, Output};

use ftfilter::circuit::{emit_preparation, verification_network, Circuit};
use ftfilter::codes::builtin;
use ftfilter::report::Report;

const CHAIN5: &str = "name chain5\nt 2\nG:\n11111\nH:\n11000\n01100\n00110\n00011\n";

fn ftfilter(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ftfilter"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn records(args: &[&str]) -> (i32, Report) {
    let mut all = args.to_vec();
    all.extend(["--format", "records"]);
    let out = ftfilter(&all);
    let text = String::from_utf8(out.stdout).unwrap();
    let report = Report::parse(&text).unwrap_or_else(|| panic!("unparsable report:\n{text}"));
    (out.status.code().unwrap(), report)
}

fn field<'a>(rep: &'a Report, kind: &'a str, key: &str) -> &'a str {
    rep.find(kind)
        .next()
        .and_then(|r| r.get(key))
        .unwrap_or_else(|| panic!("no {kind}.{key}"))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn analyze_standard_form_passes() {
    let (code, rep) = records(&["analyze", "--code", "rep5", "--t", "2"]);
    assert_eq!(code, 0);
    assert_eq!(field(&rep, "ft_condition", "pass"), "true");
    assert_eq!(rep.find("a_row").count(), 4);
}

#[test]
fn analyze_chain_as_given_fails() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "chain5.txt", CHAIN5);
    let (code, rep) = records(&["analyze", "--code-file", &path, "--naive", "--t", "2"]);
    assert_eq!(code, 2);
    assert_eq!(field(&rep, "ft_condition", "pass"), "false");
    let syndromes: Vec<&str> = rep
        .find("ft_violation")
        .filter_map(|r| r.get("syndrome"))
        .collect();
    assert!(syndromes.contains(&"0100"));
    // the same file in standard form is fine
    let (code, _) = records(&["analyze", "--code-file", &path, "--t", "2"]);
    assert_eq!(code, 0);
}

#[test]
fn input_errors_exit_one() {
    let out = ftfilter(&["analyze", "--code-file", "/nonexistent/chain.txt"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/chain.txt"));
    assert_eq!(
        ftfilter(&["analyze", "--code", "nope"]).status.code(),
        Some(1)
    );
    assert_eq!(ftfilter(&["analyze"]).status.code(), Some(1));
    assert_eq!(
        ftfilter(&["analyze", "--code", "rep5", "--bogus"])
            .status
            .code(),
        Some(1)
    );
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.txt", "name x\nt 1\nG:\n110\nH:\n100\n");
    assert_eq!(
        ftfilter(&["analyze", "--code-file", &bad]).status.code(),
        Some(1)
    );
    assert_eq!(ftfilter(&["--help"]).status.code(), Some(0));
}

#[test]
fn emit_reports_depths() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let (code, rep) = records(&["emit", "--code", "rep5", "--tm", "1", "--dir", d]);
    assert_eq!(code, 0);
    assert_eq!(field(&rep, "depth", "n_symbols"), "4");
    assert_eq!(field(&rep, "depth", "verification"), "6");
    assert_eq!(field(&rep, "depth", "preparation"), "4");
    let (_, rep) = records(&["emit", "--code", "rep5", "--tm", "3", "--dir", d]);
    assert_eq!(field(&rep, "depth", "verification"), "8");
    let rendering = std::fs::read_to_string(dir.path().join("rep5.schedule.txt")).unwrap();
    assert_eq!(rendering, "1\n2\n3\n4\n");
}

#[test]
fn emitted_circuits_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let (code, _) = records(&["emit", "--code", "steane7", "--dir", d, "--naive"]);
    assert_eq!(code, 0);
    let spec = builtin("steane7").unwrap();
    for (file, expected) in [
        (
            "steane7.verify.circuit",
            verification_network(&spec, 1).unwrap(),
        ),
        ("steane7.prep.circuit", emit_preparation(&spec).unwrap()),
    ] {
        let text = std::fs::read_to_string(dir.path().join(file)).unwrap();
        let c = Circuit::parse(&text).unwrap();
        assert_eq!(c, expected);
        assert_eq!(c.to_text(), text);
    }
    assert!(dir.path().join("steane7.naive.circuit").exists());
}

#[test]
fn emit_without_checks_warns() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "free.txt",
        "name free3\nt 0\nG:\n100\n010\n001\nH:\n",
    );
    let d = dir.path().to_str().unwrap();
    let out = ftfilter(&["emit", "--code-file", &path, "--dir", d]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    let text = std::fs::read_to_string(dir.path().join("free3.verify.circuit")).unwrap();
    let c = Circuit::parse(&text).unwrap();
    assert!(c.gates().is_empty());
    assert_eq!(c.n_verifier, 0);
}

#[test]
fn scan_exit_codes() {
    let (code, rep) = records(&["scan", "--code", "rep5", "--kmax", "1", "--inject"]);
    assert_eq!(code, 0);
    assert_eq!(field(&rep, "verdict", "violations"), "0");

    let (code, rep) = records(&[
        "scan", "--code", "rep5", "--kmax", "1", "--inject", "--naive",
    ]);
    assert_eq!(code, 2);
    assert!(rep
        .find("strict_violation")
        .any(|r| r.get("effective_weight") == Some("2")));

    // Under the total-fault rule the same naive events are within budget.
    let (code, _) = records(&[
        "scan", "--code", "rep5", "--kmax", "1", "--inject", "--naive", "--rule", "total",
    ]);
    assert_eq!(code, 0);

    let out = ftfilter(&["scan", "--code", "steane7", "--kmax", "9"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("enumeration steps"));
}

#[test]
fn scan_modes_agree() {
    let args = [
        "scan", "--code", "steane7", "--kmax", "1", "--faults", "all",
    ];
    let (_, a) = records(&args);
    let mut seq = args.to_vec();
    seq.push("--sequential");
    let (_, b) = records(&seq);
    assert_eq!(a, b);
}

#[test]
fn monte_carlo_is_deterministic() {
    let args = [
        "mc", "--code", "rep5", "--trials", "20000", "--seed", "7", "--format", "records",
    ];
    let a = ftfilter(&args);
    let b = ftfilter(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let mut seq = args.to_vec();
    seq.push("--sequential");
    assert_eq!(ftfilter(&seq).stdout, a.stdout);
    let one_thread = Command::new(env!("CARGO_BIN_EXE_ftfilter"))
        .args(args)
        .env("FTFILTER_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(one_thread.stdout, a.stdout);

    let rep = Report::parse(&String::from_utf8(a.stdout).unwrap()).unwrap();
    assert_eq!(rep.find("mc").count(), 3);
    assert!(rep.find("fit").any(|r| r.get("weight") == Some("2")));
}

#[test]
fn monte_carlo_single_trial() {
    let out = ftfilter(&[
        "mc", "--code", "rep5", "--trials", "1", "--eps", "0.01", "--format", "records",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("fit skipped"));
    let rep = Report::parse(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!(rep.find("fit_skipped").next().is_some());
    let high: f64 = field(&rep, "point", "ci_high").parse().unwrap();
    assert!(high > 0.5);
}

#[test]
fn monte_carlo_rejects_bad_settings() {
    for args in [
        &["mc", "--code", "rep5", "--eps", "0"][..],
        &["mc", "--code", "rep5", "--eps", "1.5"],
        &["mc", "--code", "rep5", "--trials", "0"],
        &["mc", "--code", "rep5", "--input", "fixed:2"],
        &["mc", "--code", "rep5", "--tm", "0"],
    ] {
        assert_eq!(ftfilter(args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn report_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    let out = ftfilter(&[
        "analyze",
        "--code",
        "steane7",
        "--format",
        "records",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let rep = Report::parse(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(rep.command, "analyze");
}
