use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use cmv_core::ensembles::{sample_batch, EnsembleSpec};
use cmv_core::Execution;
use serde_json::Value;
use tempfile::TempDir;

fn cmv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cmv")).args(args).output().expect("binary runs")
}

fn cmv_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cmv"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

fn read_csv(p: &str) -> Vec<Vec<f64>> {
    fs::read_to_string(p)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

fn read_json(p: impl AsRef<Path>) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn sample_shape_and_determinism() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (path(&dir, "a.csv"), path(&dir, "b.csv"));
    let args = ["sample", "--family", "circular", "--n", "2", "--beta", "2", "--count", "1000", "--seed", "1"];
    let out = cmv(&[&args[..], &["--out", &a]].concat());
    assert!(out.status.success());
    let out = cmv_env(&[&args[..], &["--out", &b, "--quiet"]].concat(), "CMV_THREADS", "1");
    assert!(out.status.success());
    assert!(out.stderr.is_empty());
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let rows = read_csv(&a);
    assert_eq!(rows.len(), 1000);
    for r in &rows {
        assert_eq!(r.len(), 2);
        assert!(r[0] <= r[1]);
        assert!(r.iter().all(|&x| x > -std::f64::consts::PI && x <= std::f64::consts::PI));
    }
    // the CSV carries the library's values bit for bit
    let lib = sample_batch(&EnsembleSpec::circular(2, 2.0), 1, 1000, Execution::Sequential).unwrap();
    assert_eq!(rows, lib);
}

#[test]
fn sample_parameters() {
    let dir = TempDir::new().unwrap();
    let coeffs = path(&dir, "c.json");
    let out = cmv(&[
        "sample", "--family", "jacobi", "--n", "3", "--beta", "1", "--a", "-0.5", "--b", "3", "--count", "10",
        "--seed", "4", "--out", &path(&dir, "j.csv"), "--coeffs-out", &coeffs,
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let list = read_json(&coeffs);
    assert_eq!(list.as_array().unwrap().len(), 10);
    assert_eq!(list[0]["alpha"].as_array().unwrap().len(), 5);
    for bad in [["--beta", "0", "--a", "0"], ["--beta", "1", "--a", "-1"]] {
        let base = ["sample", "--family", "jacobi", "--n", "2", "--count", "1", "--seed", "1"];
        let out = cmv(&[&base[..], &bad[..]].concat());
        assert_eq!(out.status.code(), Some(2), "{bad:?}");
    }
    assert_eq!(cmv(&["sample", "--family", "laguerre", "--n", "2"]).status.code(), Some(2));
}

#[test]
fn flow_methods_agree() {
    let dir = TempDir::new().unwrap();
    let (rk, sp) = (path(&dir, "rk.json"), path(&dir, "sp.json"));
    let common = ["flow", "--random", "--n", "6", "--seed", "3", "--m", "1", "--part", "re", "--t", "5"];
    for (method, out) in [("rk4", &rk), ("spectral", &sp)] {
        let o = cmv(&[&common[..], &["--dt", "1e-3", "--record-every", "1000", "--method", method, "--out", out]].concat());
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let (a, b) = (read_json(&rk), read_json(&sp));
    assert_eq!(a["times"], b["times"]);
    assert_eq!(a["times"].as_array().unwrap().len(), 6);
    let last = |v: &Value| v["states"].as_array().unwrap().last().unwrap()["alpha"].clone();
    for (x, y) in last(&a).as_array().unwrap().iter().zip(last(&b).as_array().unwrap()) {
        let dx = x[0].as_f64().unwrap() - y[0].as_f64().unwrap();
        let dy = x[1].as_f64().unwrap() - y[1].as_f64().unwrap();
        assert!(dx.hypot(dy) < 1e-6);
    }
    for d in a["diagnostics"].as_array().unwrap() {
        assert!(d["eigenvalue_drift"].as_f64().unwrap() < 1e-10);
    }
}

#[test]
fn flow_edge_cases() {
    let dir = TempDir::new().unwrap();
    let init = path(&dir, "init.json");
    fs::write(&init, r#"{"n": 3, "alpha": [[0.2, 0.1], [-0.3, 0.0], [0.0, 1.0]]}"#).unwrap();
    let out_path = path(&dir, "t.json");
    let o = cmv(&["flow", "--init", &init, "--t", "0", "--out", &out_path]);
    assert!(o.status.success());
    let traj = read_json(&out_path);
    assert_eq!(traj["times"].as_array().unwrap().len(), 1);
    assert_eq!(traj["states"][0]["alpha"][0][0].as_f64(), Some(0.2));

    fs::write(&init, r#"{"n": 2, "alpha": [[0.9999999999, 0.0], [1.0, 0.0]]}"#).unwrap();
    let o = cmv(&["flow", "--init", &init, "--t", "1"]);
    assert_eq!(o.status.code(), Some(3));
    fs::write(&init, r#"{"n": 2, "alpha": [[1.5, 0.0], [1.0, 0.0]]}"#).unwrap();
    assert_eq!(cmv(&["flow", "--init", &init, "--t", "1"]).status.code(), Some(2));
    assert_eq!(cmv(&["flow", "--t", "1"]).status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let report = path(&dir, "report.json");
    let o = cmv(&["verify", "--suite", "canonical", "--n", "3", "--trials", "50", "--seed", "9", "--report", &report]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = read_json(&report);
    assert_eq!(r["passed"], Value::Bool(true));
    assert_eq!(r["suite"], "canonical");
    assert!(r["identities"][0]["max_residual"].as_f64().unwrap() <= r["identities"][0]["tolerance"].as_f64().unwrap());
    let o = cmv(&["verify", "--suite", "jacobian", "--n", "2", "--report", &report]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(cmv(&["verify", "--suite", "nonsense", "--n", "2"]).status.code(), Some(2));
    assert_eq!(cmv(&["verify", "--suite", "cotangent", "--n", "2"]).status.code(), Some(2));
}

#[test]
fn histogram_counts() {
    let dir = TempDir::new().unwrap();
    let input = path(&dir, "s.csv");
    let out = path(&dir, "h.csv");
    fs::write(&input, "0.5\n").unwrap();
    assert!(cmv(&["histogram", "--input", &input, "--bins", "1", "--min", "0", "--max", "1", "--out", &out]).status.success());
    assert_eq!(fs::read_to_string(&out).unwrap().lines().nth(1).unwrap().split(',').last(), Some("1"));

    fs::write(&input, "").unwrap();
    assert_eq!(cmv(&["histogram", "--input", &input, "--bins", "3", "--min", "0", "--max", "1"]).status.code(), Some(2));
    assert_eq!(cmv(&["histogram", "--input", &input, "--bins", "0", "--min", "0", "--max", "1"]).status.code(), Some(2));

    let samples = path(&dir, "u.csv");
    let o = cmv(&[
        "sample", "--family", "circular", "--n", "1", "--beta", "2", "--count", "100000", "--seed", "5", "--out", &samples,
    ]);
    assert!(o.status.success());
    let pi = std::f64::consts::PI.to_string();
    let neg_pi = (-std::f64::consts::PI).to_string();
    let o = cmv(&["histogram", "--input", &samples, "--bins", "4", "--min", &neg_pi, "--max", &pi, "--out", &out]);
    assert!(o.status.success());
    let counts: Vec<f64> = fs::read_to_string(&out)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').last().unwrap().parse().unwrap())
        .collect();
    assert_eq!(counts.iter().sum::<f64>(), 1e5);
    let sigma = (1e5f64 * 0.25 * 0.75).sqrt();
    assert!(counts.iter().all(|c| (c - 25_000.0).abs() < 5.0 * sigma), "{counts:?}");
}

#[test]
fn spectral_round_trip() {
    let dir = TempDir::new().unwrap();
    let (coeffs, measure, back, matrix) =
        (path(&dir, "c.json"), path(&dir, "m.json"), path(&dir, "b.json"), path(&dir, "x.json"));
    fs::write(&coeffs, r#"{"n": 2, "alpha": [[0.0, 0.0], [1.0, 0.0]]}"#).unwrap();
    assert!(cmv(&["spectral", "--coeffs", &coeffs, "--out", &measure, "--matrix-out", &matrix]).status.success());
    let m = read_json(&measure);
    assert_eq!(m["points"][0]["theta"].as_f64().unwrap().abs() < 1e-14, true);
    assert!((m["points"][1]["weight"].as_f64().unwrap() - 0.5).abs() < 1e-14);
    assert_eq!(read_json(&matrix)[0][1], serde_json::json!([1.0, 0.0]));
    assert!(cmv(&["spectral", "--measure", &measure, "--out", &back]).status.success());
    let b = read_json(&back);
    assert_eq!(b["n"], 2);
    assert!(b["alpha"][0][0].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn thread_cap_is_validated() {
    let o = cmv_env(&["verify", "--suite", "jacobian", "--n", "1", "--trials", "2"], "CMV_THREADS", "zero");
    assert_eq!(o.status.code(), Some(2));
}
