//! End-to-end tests of the `sublevel` binary: exit codes, report shape and
//! file outputs.

use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sublevel"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("exited normally")
}

fn report(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).expect("stdout is a JSON report")
}

fn rational(v: &Value) -> (i64, i64) {
    (v[0].as_i64().unwrap(), v[1].as_i64().unwrap())
}

#[test]
fn analyze_reports_exact_exponents() {
    let out = run(&["analyze", "-n", "2", "-f", "x1^6 + x2^4"]);
    assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["command"], "analyze");
    assert!(r["generated_at"].is_string());
    assert_eq!(rational(&r["profile"]["theta"]), (5, 12));
    assert_eq!(r["profile"]["log_exp_volume"], 0);
    assert_eq!(r["mg"]["status"], "PASSED");
}

#[test]
fn analyze_marks_infinite_volume() {
    let r = report(&run(&["analyze", "-n", "2", "-f", "x1*x2"]));
    assert_eq!(r["profile"]["volume_finite"], false);
    assert_eq!(r["profile"]["lattice_finite"], true);
    assert_eq!(rational(&r["profile"]["theta_prime"]), (1, 1));
    assert_eq!(r["profile"]["log_exp_lattice"], 1);
}

#[test]
fn preset_covers_the_example_corpus() {
    let out = run(&["analyze", "--preset", "paper-examples"]);
    assert_eq!(exit_code(&out), 0);
    let r = report(&out);
    assert_eq!(r["preset"], "paper-examples");
    let maps: Vec<&str> = r["reports"]
        .as_array()
        .unwrap()
        .iter()
        .map(|rep| rep["input"]["map"].as_str().unwrap())
        .collect();
    assert_eq!(
        maps,
        ["x1^2 + x2^2", "x1^6 + x2^4", "x1*x2", "x1^2 - x2^2", "x1^2*x2; x1*x2^2"]
    );
}

#[test]
fn parse_errors_exit_with_code_2() {
    let out = run(&["analyze", "-n", "2", "-f", "x1^2 +* x2"]);
    assert_eq!(exit_code(&out), 2);
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
    // variable index beyond n
    assert_eq!(exit_code(&run(&["analyze", "-n", "2", "-f", "x3"])), 2);
}

#[test]
fn usage_errors_exit_with_code_1() {
    assert_eq!(exit_code(&run(&["analyze", "-f", "x1"])), 1);
    assert_eq!(exit_code(&run(&["analyze", "-n", "1"])), 1);
    assert_eq!(
        exit_code(&run(&[
            "check-mg",
            "-n",
            "1",
            "-f",
            "x1",
            "--perturb",
            "3",
            "--epsilon=-1"
        ])),
        1
    );
    // argument errors from the parser are usage errors too, not parse errors
    assert_eq!(exit_code(&run(&["analyze", "--no-such-flag"])), 1);
    assert_eq!(exit_code(&run(&["--help"])), 0);
}

#[test]
fn certified_mg_violation_exits_with_code_4() {
    let out = run(&["check-mg", "-n", "2", "-f", "x1^2 - x2^2"]);
    assert_eq!(exit_code(&out), 4);
    let r = report(&out);
    let verdicts = r["mg"]["verdicts"].as_array().unwrap();
    assert!(verdicts.iter().any(|v| v["status"] == "VIOLATION_CERTIFIED"));
}

#[test]
fn mg_maps_pass_with_perturbations() {
    let out = run(&["check-mg", "-n", "2", "-f", "x1^2 + x2^2", "--perturb", "5"]);
    assert_eq!(exit_code(&out), 0);
    let probe = &report(&out)["perturbation"];
    assert_eq!(probe["trials"], 5);
    assert_eq!(probe["fraction_unfalsified"], 1.0);
}

#[test]
fn unsupported_empirics_exit_with_code_5() {
    let out = run(&["verify", "--kind", "volume", "-n", "2", "-f", "x1^2"]);
    assert_eq!(exit_code(&out), 5);
    let out = run(&["verify", "--kind", "lattice", "-n", "2", "-f", "x1^2"]);
    assert_eq!(exit_code(&out), 5);
}

#[test]
fn verify_writes_csv_and_fit() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let json = dir.path().join("report.json");
    let out = run(&[
        "verify",
        "--kind",
        "lattice",
        "-n",
        "2",
        "-f",
        "x1*x2",
        "--r-max",
        "10000",
        "--csv",
        csv.to_str().unwrap(),
        "--out",
        json.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let table = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines[0], "r,measurement,stderr");
    assert_eq!(lines.len(), 6);
    // 4 * sum_{a <= 100} floor(100 / a)
    assert_eq!(lines[1], "100,1928,0");
    let r: Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    let theta_hat = r["fit_fixed_kappa"]["theta_hat"].as_f64().unwrap();
    assert!((theta_hat - 1.0).abs() < 0.05, "theta_hat {theta_hat}");
}

#[test]
fn map_file_input_matches_inline_text() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("map.txt");
    fs::write(&path, "# monomial pair\nx1^2*x2\n\nx1*x2^2\n").unwrap();
    let from_file = report(&run(&["analyze", "-n", "2", "--file", path.to_str().unwrap()]));
    let inline = report(&run(&["analyze", "-n", "2", "-f", "x1^2*x2; x1*x2^2"]));
    assert_eq!(from_file["input"]["canonical"], inline["input"]["canonical"]);
    assert_eq!(from_file["profile"], inline["profile"]);
    assert_eq!(rational(&from_file["profile"]["theta"]), (2, 3));
}
