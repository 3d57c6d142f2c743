use std::path::Path;
use std::process::{Command, Output};

fn jtheta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jtheta")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut rows = csv::Reader::from_reader(csv.as_bytes());
    let idx = rows.headers().unwrap().iter().position(|h| h == name).unwrap();
    rows.records().map(|r| r.unwrap()[idx].parse().unwrap()).collect()
}

#[test]
fn eval_values() {
    let sn = jtheta(&["eval", "sn", "--lambda", "0", "--k", "0.5"]);
    assert_eq!(stdout(&sn).trim(), "0");
    let ratio = jtheta(&["eval", "theta-ratio", "--lambda", "0.3", "--mu", "0.3", "--k", "0.5"]);
    assert_eq!(stdout(&ratio).trim(), "1");
    let k = jtheta(&["eval", "K", "--k", "0.5"]);
    assert!(k.status.success());
    let value: f64 = stdout(&k).trim().parse().unwrap();
    assert!((value - 1.685_750_354_812_596).abs() < 1e-13);
}

#[test]
fn exit_codes() {
    assert_eq!(jtheta(&["eval", "K", "--k", "1.5"]).status.code(), Some(1));
    assert_eq!(jtheta(&["eval", "sn", "--k", "0.5"]).status.code(), Some(2));
    assert_eq!(jtheta(&["eval", "nonsense", "--k", "0.5"]).status.code(), Some(2));
    assert_eq!(jtheta(&["verify", "--suite", "bogus-name"]).status.code(), Some(2));
    assert_eq!(jtheta(&["verify", "--suite", "heat", "--tol", "heat/residual"]).status.code(), Some(2));
    assert_eq!(jtheta(&["verify", "--suite", "heat", "--tol", "nope=1"]).status.code(), Some(2));
    // a zero tolerance on a residual check must fail the run
    assert_eq!(jtheta(&["verify", "--suite", "heat", "--tol", "heat/residual=0"]).status.code(), Some(1));
}

#[test]
fn sweep_ratio_decreasing() {
    let out = jtheta(&["sweep", "--lambda", "0.3", "--mu", "0.7", "--points", "99"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("k,k_prime,ratio,ratio_dk,theta_lambda,theta_mu\n"));
    assert!(!text.contains('\r'));
    let ratio = column(&text, "ratio");
    assert_eq!(ratio.len(), 99);
    assert!(ratio.windows(2).all(|w| w[1] < w[0]));
    let k = column(&text, "k");
    assert!(k.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn sweep_equal_arguments_is_flat() {
    let out = jtheta(&["sweep", "--lambda", "0.4", "--mu", "0.4", "--points", "20"]);
    assert!(column(&stdout(&out), "ratio").iter().all(|&r| r == 1.0));
}

#[test]
fn sweep_log_complementary_slope() {
    let out = jtheta(&[
        "sweep", "--lambda", "0.3", "--mu", "0.7", "--k-min", "0.5", "--k-max", "0.99999999995",
        "--points", "30", "--spacing", "logc",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let kp = *column(&text, "k_prime").last().unwrap();
    let ratio = *column(&text, "ratio").last().unwrap();
    assert!((kp - 1e-5).abs() < 1e-7);
    let slope = ratio.ln() / (kp / 4.0).ln();
    assert!((slope / 0.2 - 1.0).abs() < 0.01, "slope {slope}");
}

#[test]
fn sweep_is_deterministic() {
    let args = ["sweep", "--lambda", "0.25", "--mu", "0.9", "--points", "200", "--spacing", "logc"];
    assert_eq!(jtheta(&args).stdout, jtheta(&args).stdout);
}

#[test]
fn sweep_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = jtheta(&["sweep", "--lambda", "0.3", "--mu", "0.7", "--points", "5", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 6);

    let missing = dir.path().join("no/such/dir/sweep.csv");
    let out = jtheta(&["sweep", "--lambda", "0.3", "--mu", "0.7", "--out", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_all_passes() {
    let out = jtheta(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn verify_convexity_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = jtheta(&["verify", "--suite", "thm1-convex", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(Path::new(&path)).unwrap()).unwrap();
    let endpoints = report
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["suite"] == "thm1-convex/endpoints")
        .unwrap();
    assert_eq!(endpoints["passed"], true);
    assert!(endpoints["worst_residual"].as_f64().unwrap() < 1e-12);
}

#[test]
fn nonmono_scan_rows() {
    let out = jtheta(&["nonmono-scan"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rows.headers().unwrap().iter().collect::<Vec<_>>(), ["lambda", "sign_changes", "first_sign", "last_sign"]);
    let rows: Vec<Vec<String>> =
        rows.records().map(|r| r.unwrap().iter().map(str::to_owned).collect()).collect();
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[0], ["0.5", "0", "-", "-"]);
    assert_eq!(rows[10], ["0.6", "0", "+", "+"]);
    assert!(rows[1..10].iter().any(|r| r[1].parse::<usize>().unwrap() >= 1));
}
