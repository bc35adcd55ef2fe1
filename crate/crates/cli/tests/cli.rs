use std::path::Path;

use assert_cmd::Command;
use pnlab_core::zeta::ZeroTable;
use pnlab_core::FiniteDirichletSeries;
use serde_json::Value;

fn pnlab() -> Command {
    Command::cargo_bin("pnlab").unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn json(out: &[u8]) -> Value {
    serde_json::from_slice(out).unwrap()
}

#[test]
fn classical_poisson_passes_with_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("out.json");
    pnlab().args(["verify", "classical-poisson", "--report"]).arg(&report).assert().code(0);
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!(r["residual"].as_f64().unwrap() <= 1e-8);
    assert_eq!(r["pass"], Value::Bool(true));
}

#[test]
fn missing_input_is_a_usage_error() {
    pnlab().args(["zeros", "--series", "missing.json"]).assert().code(2);
    pnlab().args(["verify", "pn", "--bogus"]).assert().code(2);
    pnlab().args(["em", "--phi", "nonsense"]).assert().code(2);
}

#[test]
fn numerical_failure_exits_one() {
    pnlab().args(["rc", "--phi", "exp:rate=-1"]).assert().code(1);
}

#[test]
fn c0_from_zero_file() {
    let dir = tempfile::tempdir().unwrap();
    let table = ZeroTable::builtin();
    let text: String = std::iter::once("# ordinates\n".to_string()).chain(table.ordinates.iter().map(|g| format!("{g}\n"))).collect();
    let z = write(dir.path(), "z.txt", &text);
    let out = pnlab().args(["c0", "--beta", "0", "--zeros"]).arg(&z).output().unwrap();
    assert!(out.status.success());
    let v = json(&out.stdout)["value"].as_f64().unwrap();
    assert!((v + (2.0 * std::f64::consts::PI).ln()).abs() < 1e-3, "{v}");
}

#[test]
fn series_in_reports_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{"lambdas": [1.0, 1.4142135623730951], "coeffs": [0.4, [0.3, 0.0]]}"#;
    let f = write(dir.path(), "f.json", text);
    let out = pnlab().args(["verify", "pn", "--phi", "bump:a=0.5,b=4", "--series"]).arg(&f).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out.stdout);
    let back = FiniteDirichletSeries::from_json(&r["inputs"]["series"].to_string()).unwrap();
    assert_eq!(back, FiniteDirichletSeries::from_json(text).unwrap());
}

#[test]
fn seed_fixes_random_inputs() {
    let run = |seed: &str| pnlab().args(["verify", "newton", "--random", "5", "--m", "12", "--seed", seed]).output().unwrap();
    let (a, b, c) = (run("3"), run("3"), run("4"));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn zeros_feed_pairing() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.json", r#"{"lambdas": [1, 2], "coeffs": [-1.5, 0.5]}"#);
    let z = dir.path().join("z.json");
    pnlab().args(["zeros", "--ymax", "80", "--series"]).arg(&f).arg("--out").arg(&z).assert().code(0);
    let zeros: Value = serde_json::from_str(&std::fs::read_to_string(&z).unwrap()).unwrap();
    assert!(zeros["sigma1"].is_number() && zeros["entries"][0]["n"].is_number());
    let out = pnlab().args(["pair", "--phi", "bump:a=0.5,b=4", "--series"]).arg(&f).arg("--zeros").arg(&z).output().unwrap();
    let r = json(&out.stdout);
    let diff = r["zero_side"]["value"][0].as_f64().unwrap() - r["atomic_side"]["value"][0].as_f64().unwrap();
    assert!(diff.abs() < 1e-8, "{r}");
}

#[test]
fn expand_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.json", r#"{"lambdas": [1, 2], "coeffs": [-1.5, 0.5]}"#);
    let out = pnlab().args(["expand", "--tmax", "2", "--series"]).arg(&f).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "value,k,b_re,b_im");
    assert_eq!(lines[1], "1,1:1,1.5,-0");
    assert_eq!(lines.len(), 4);
}

#[test]
fn plot_data() {
    let out = pnlab().args(["plot", "theta", "--from", "0.1", "--to", "5"]).output().unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 101);
    let out = pnlab().args(["plot", "primes", "--tmax", "3"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let first: Vec<f64> = text.lines().nth(1).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(first, vec![2f64.ln(), 2f64.ln()]);
    let out = pnlab().args(["plot", "psi", "--from", "-50", "--to", "50", "--n", "11"]).output().unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 12);
}

#[test]
fn configuration_is_printable_and_overridable() {
    let out = pnlab().arg("--show-config").output().unwrap();
    let cfg = json(&out.stdout);
    assert_eq!(cfg["numerics"]["verify_tol"].as_f64(), Some(1e-8));
    let dir = tempfile::tempdir().unwrap();
    let c = write(dir.path(), "c.json", r#"{"verify_tol": 1e-6}"#);
    let out = pnlab().arg("--show-config").arg("--config").arg(&c).output().unwrap();
    assert_eq!(json(&out.stdout)["numerics"]["verify_tol"].as_f64(), Some(1e-6));
}
