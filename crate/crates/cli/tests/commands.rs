//! End-to-end runs of the `bratteli` binary: outputs and the exit-code contract.

use std::process::{Command, Output};

use serde_json::Value;

fn bratteli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bratteli")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = bratteli(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn code(args: &[&str]) -> i32 {
    bratteli(args).status.code().expect("exit code")
}

#[test]
fn enumerate_level_zero() {
    assert_eq!(json(&["enumerate", "--n", "0"]), serde_json::json!([[]]));
    assert_eq!(json(&["enumerate", "--n", "4"]).as_array().unwrap().len(), 5);
}

#[test]
fn hall_littlewood_measure_level_two() {
    let v = json(&["measure", "--n", "2", "--hl-p", "2"]);
    let entries: Vec<(String, String)> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["partition"].to_string(), e["prob"].as_str().unwrap().to_string()))
        .collect();
    assert_eq!(entries, vec![("[2]".into(), "1/2".into()), ("[1,1]".into(), "1/2".into())]);
}

#[test]
fn coherence_check_passes() {
    let v = json(&["verify", "coherence", "--n", "5", "--q", "0", "--t", "1/2", "--alphabet", "geometric:2"]);
    assert_eq!(v["status"], "ok");
}

#[test]
fn verifiers_report_ok() {
    for args in [
        vec!["verify", "exchangeability", "--n", "5"],
        vec!["verify", "pieri", "--n", "4", "--q", "1/3", "--t", "1/2", "--alphabet", "1/2,1/2"],
        vec!["verify", "kappa-forms", "--n", "5"],
        vec!["verify", "green-charge", "--n", "4"],
        vec!["verify", "hook-dim", "--n", "5"],
        vec!["verify", "relative-dim", "--n", "5"],
        vec!["verify", "jack-limit", "--n", "4", "--jack-theta", "2"],
        vec!["verify", "suite", "--n", "3"],
    ] {
        assert_eq!(json(&args)["status"], "ok", "{args:?}");
    }
}

#[test]
fn multiplicity_families() {
    let k = |extra: &[&str]| {
        let mut args = vec!["kappa", "--parent", "[1]", "--col", "2"];
        args.extend_from_slice(extra);
        json(&args)["kappa"].as_str().unwrap().to_string()
    };
    // growing the first row has multiplicity 1 whenever q = 0
    assert_eq!(k(&["--hl-p", "2"]), "1/1");
    assert_eq!(k(&["--q", "0", "--t", "1/2"]), "1/1");
    assert_eq!(k(&["--schur-q", "1/2"]), k(&["--q", "1/2", "--t", "1/2"]));
    let dim = json(&["dim", "--partition", "[2,1]", "--hl-p", "2"]);
    assert_eq!(dim["dim"], "5/1");
    assert_eq!(dim["polynomial"], "2*p + 1");
}

#[test]
fn comparisons() {
    let v = json(&["compare", "matrix-exhaustive", "--n", "3", "--p", "2"]);
    assert_eq!(v["status"], "ok");
    assert_eq!(v["tv"], "0/1");
    let v = json(&["compare", "rsk", "--n", "3", "--alphabet", "1/2,1/2", "--exhaustive"]);
    assert_eq!(v["status"], "ok");
    let v = json(&["compare", "matrix-mc", "--n", "4", "--p", "2", "--trials", "20000", "--seed", "5", "--tol", "1/20"]);
    assert_eq!(v["status"], "ok");
}

#[test]
fn failed_comparison_exits_one() {
    // 10 trials cannot come within 1/1000 of the exact law
    assert_eq!(code(&["compare", "matrix-mc", "--n", "4", "--p", "2", "--trials", "10", "--seed", "1", "--tol", "1/1000"]), 1);
    assert_eq!(code(&["compare", "asymptotic", "--n", "100", "--p", "2", "--trials", "2", "--seed", "1", "--tol", "1/100000"]), 1);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["frobnicate"],
        vec!["enumerate"],
        vec!["enumerate", "--n", "3", "--bogus"],
        vec!["measure", "--n", "2", "--q", "1/2"],
        vec!["measure", "--n", "2", "--q", "1/2", "--t", "1/2", "--alphabet", "1/2,1/3"],
        vec!["kappa", "--parent", "[1,2]", "--col", "1"],
        vec!["kappa", "--parent", "[1]", "--col", "3"],
        vec!["kappa", "--parent", "[1]", "--col", "1", "--hl-p", "2", "--schur-q", "1/2"],
        vec!["measure", "--n", "2", "--hl-p", "1"],
        vec!["compare", "matrix-exhaustive", "--n", "2", "--p", "4"],
        vec!["verify", "suite", "--n", "9"],
        vec!["sample", "--n", "3", "--trials", "0", "--seed", "1", "--bk-p", "2"],
    ] {
        assert_eq!(code(&args), 2, "{args:?}");
    }
}

#[test]
fn csv_and_file_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.csv");
    let out = bratteli(&["measure", "--n", "2", "--hl-p", "2", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("partition,prob,prob_approx"));
    assert_eq!(lines.next(), Some("[2],1/2,0.500000"));
    assert_eq!(lines.next(), Some("\"[1,1]\",1/2,0.500000"));
}

#[test]
fn sampling_is_deterministic() {
    let args = ["sample", "--n", "6", "--trials", "300", "--seed", "42", "--q", "1/3", "--t", "1/2", "--alphabet", "1/2,1/2"];
    let a = bratteli(&args);
    let b = bratteli(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let paths = json(&["sample", "--n", "5", "--trials", "3", "--seed", "1", "--bk-p", "3", "--paths"]);
    assert_eq!(paths["paths"].as_array().unwrap().len(), 3);
    assert_eq!(paths["config"]["sampler"], "bk");
}
