use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use unramified_core::experiments::{read_csv, read_jsonl, ExperimentReport};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unramified"))
        .args(args)
        .env_remove("UNRAMIFIED_OUT_DIR")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn dfunc_small_cases() {
    let o = run(&["dfunc", "--n", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "D_2 = (u - 1)/(u - v)\nD*_2 = t/(2*t + 2)\n");
    let o = run(&["dfunc", "--n", "1"]);
    assert!(stdout(&o).starts_with("D_1 = 1\n"));
    let v: Value = serde_json::from_str(&stdout(&run(&["dfunc", "--n", "2", "--format", "json"]))).unwrap();
    assert_eq!(v["d_star"], "t/(2*t + 2)");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["dfunc", "--n", "0"]).status.code(), Some(1));
    assert_eq!(run(&["dfunc", "--n", "61"]).status.code(), Some(1));
    assert_eq!(run(&["simulate", "--n", "2"]).status.code(), Some(1));
    assert_eq!(run(&["bogus"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn probs_exact_and_decimal() {
    let o = run(&["probs", "--n", "2", "--p", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("rho   = 7/26  ~ 0.269230769231"), "{text}");
    assert!(text.contains("alpha = 3/8"));
    assert!(text.contains("beta  = 1/8"));

    let v: Value = serde_json::from_str(&stdout(&run(&["probs", "--n", "2", "--p", "3", "--format", "json"]))).unwrap();
    assert_eq!(
        (v["rho"]["num"].as_str(), v["rho"]["den"].as_str()),
        (Some("7"), Some("26"))
    );
    assert_eq!(v["beta"]["decimal"], "0.125000000000");

    let csv = stdout(&run(&["probs", "--n", "2", "--p", "3", "--format", "csv"]));
    assert!(csv.lines().any(|l| l == "2,3,alpha,3,8,0.375000000000"));
}

#[test]
fn probs_rejects_bad_primes() {
    let o = run(&["probs", "--n", "2", "--p", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("p must be prime"));
    assert_eq!(run(&["probs", "--n", "2", "--p", "1000003"]).status.code(), Some(1));
}

#[test]
fn verify_ranges() {
    let o = run(&["verify", "--from", "1", "--to", "8"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).trim_end().ends_with(", 0 failed"));
    assert_eq!(run(&["verify", "--from", "5", "--to", "3"]).status.code(), Some(1));
    assert_eq!(
        run(&["verify", "--scope", "dseries", "--from", "1", "--to", "61"])
            .status
            .code(),
        Some(1)
    );

    let json = stdout(&run(&[
        "verify",
        "--scope",
        "incidence",
        "--from",
        "12",
        "--to",
        "12",
        "--format",
        "json",
    ]));
    for line in json.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["passed"], true, "{line}");
    }
}

fn reports_from_stdout(o: &Output) -> Vec<ExperimentReport> {
    stdout(o)
        .lines()
        .map(|l| ExperimentReport::from_json_line(l).unwrap())
        .collect()
}

#[test]
fn simulate_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("haar.jsonl");
    let args = [
        "simulate",
        "--n",
        "2",
        "--p",
        "3",
        "--samples",
        "20000",
        "--seed",
        "5",
        "--format",
        "json",
    ];
    let o = run(&[&args[..], &["--out", out.to_str().unwrap()]].concat());
    assert!(o.status.success(), "{}", stderr(&o));
    let printed = reports_from_stdout(&o);
    assert_eq!(printed.len(), 3);
    assert_eq!(read_jsonl(&out).unwrap(), printed);
    let regions: Vec<&str> = printed.iter().map(|r| r.region.as_str()).collect();
    assert_eq!(regions, ["OK", "MK", "ALL"]);
    assert_eq!(
        (printed[2].target_num.as_str(), printed[2].target_den.as_str()),
        ("7", "26")
    );

    let again = reports_from_stdout(&run(&args));
    let blank = |r: &[ExperimentReport]| r.iter().map(|x| x.without_timestamp()).collect::<Vec<_>>();
    assert_eq!(blank(&again), blank(&printed));
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_unramified"))
        .args([
            "simulate",
            "--n",
            "2",
            "--p",
            "2",
            "--samples",
            "5000",
            "--seed",
            "3",
            "--model",
            "monic",
            "--format",
            "csv",
        ])
        .env("UNRAMIFIED_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let file = dir.path().join("simulate-monic-n2-p2-seed3.csv");
    let from_file = read_csv(std::fs::File::open(&file).unwrap()).unwrap();
    let from_stdout = read_csv(o.stdout.as_slice()).unwrap();
    assert_eq!(from_file, from_stdout);
    assert_eq!(from_file.len(), 2);
}

#[test]
fn integrate_phi_over_integers() {
    let o = run(&[
        "integrate",
        "--n",
        "2",
        "--p",
        "3",
        "--region",
        "OK",
        "--samples",
        "50000",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    let r = reports_from_stdout(&o);
    assert_eq!(r.len(), 1);
    assert!((r[0].mean - 0.75).abs() < 0.01, "{}", r[0].mean);
    assert_eq!(r[0].target_f64(), 0.75);
    assert_eq!(
        reports_from_stdout(&run(&[
            "integrate",
            "--n",
            "2",
            "--p",
            "3",
            "--samples",
            "1000",
            "--format",
            "json"
        ]))
        .len(),
        2
    );
}

#[test]
fn statistical_gate_exits_three() {
    // With p this large, ten degree-one samples all have their root in
    // O_K and none in the maximal ideal; zero variance with the mean off the
    // exact target leaves z undefined, which fails the gate.
    let o = run(&["simulate", "--n", "1", "--p", "999983", "--samples", "10", "--seed", "7", "--precision", "6"]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
}

#[test]
fn parameter_limits() {
    for args in [
        ["simulate", "--n", "21", "--p", "2"],
        ["simulate", "--n", "2", "--p", "9"],
        ["integrate", "--n", "2", "--p", "0"],
    ] {
        assert_eq!(run(&args).status.code(), Some(1), "{args:?}");
    }
    let o = run(&[
        "simulate",
        "--n",
        "1",
        "--p",
        "3",
        "--precision",
        "90",
        "--samples",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("2^127"));
    assert!(!Path::new("simulate-haar-n1-p3-seed0.jsonl").exists());
}
