use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn hardy(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hardy"))
        .args(args)
        .current_dir(dir)
        .env_remove("HARDY_NSAMPLES")
        .output()
        .expect("run hardy")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn classic_factor_of_z_times_two_plus_z() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "f.json", r#"{"n_samples": 1024, "coeffs": [[1, 2, 0], [2, 1, 0]]}"#);
    let out = hardy(dir.path(), &["factor", "classic", "--fn", "f.json", "--emit-plot-data", "plot.csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    let inner = v["inner"]["coeffs"].as_array().unwrap();
    assert_eq!(inner.len(), 1);
    assert_eq!(inner[0][0].as_i64(), Some(1));
    assert!((num(&inner[0][1]) - 1.0).abs() < 1e-12);
    assert!(num(&v["residual"]) < 1e-12);

    let csv = std::fs::read_to_string(dir.path().join("plot.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("theta,abs_inner,log_abs_outer"));
    assert_eq!(lines.count(), 1024);
}

#[test]
fn exit_codes_for_missing_malformed_and_singular_inputs() {
    let dir = TempDir::new().unwrap();
    let out = hardy(dir.path(), &["factor", "classic", "--fn", "missing.json"]);
    assert_eq!(out.status.code(), Some(1));

    write(dir.path(), "bad.json", "{\"n_samples\": 1024,\n \"coeffs\": [[0, 1, ]]}");
    let out = hardy(dir.path(), &["factor", "classic", "--fn", "bad.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));

    // 1 + z vanishes at the grid point z = −1.
    write(dir.path(), "g.json", r#"{"n_samples": 1024, "coeffs": [[0, 1, 0], [1, 1, 0]]}"#);
    let out = hardy(dir.path(), &["factor", "classic", "--fn", "g.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("singularity"), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
}

#[test]
fn ninner_factor_of_one_plus_z() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "g.json", r#"{"n_samples": 1024, "coeffs": [[0, 1, 0], [1, 1, 0]]}"#);
    let out = hardy(dir.path(), &["factor", "ninner", "--fn", "g.json", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    // 1 + z = J·√2 with J = (1 + z)/√2 jointly z²-inner.
    assert_eq!(v["r"].as_u64(), Some(1));
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let coeffs = v["inners"][0]["coeffs"].as_array().unwrap();
    let big: Vec<&Value> = coeffs.iter().filter(|c| num(&c[1]).hypot(num(&c[2])) > 1e-9).collect();
    assert_eq!(big.len(), 2);
    for c in big {
        assert!((num(&c[1]).abs() - s).abs() < 1e-9);
    }
}

#[test]
fn verify_suites_and_registry() {
    let dir = TempDir::new().unwrap();
    let out = hardy(dir.path(), &["verify", "zn-decomposition", "--n", "3", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(json(&out)["pass"], Value::Bool(true));

    let out = hardy(dir.path(), &["verify", "n-inner-outer", "--seed", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert!(v["checks"].as_array().unwrap().iter().any(|c| c["name"] == "residual"));

    let out = hardy(dir.path(), &["verify", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("blaschke-basis"));
}

#[test]
fn verify_reports_are_byte_identical_and_written_atomically() {
    let dir = TempDir::new().unwrap();
    for name in ["a.json", "b.json"] {
        let out = hardy(dir.path(), &["verify", "holder", "--seed", "5", "--out", name]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    let a = std::fs::read(dir.path().join("a.json")).unwrap();
    let b = std::fs::read(dir.path().join("b.json")).unwrap();
    assert_eq!(a, b);
    let names: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names.len(), 2, "{names:?}");
}

#[test]
fn grid_size_from_env_config_and_flag() {
    let dir = TempDir::new().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_hardy"))
        .args(["verify", "blaschke-basis"])
        .current_dir(dir.path())
        .env("HARDY_NSAMPLES", "512")
        .output()
        .unwrap();
    assert_eq!(json(&out)["n_samples"].as_u64(), Some(512));

    write(dir.path(), "run.json", r#"{"n_samples": 256, "seed": 9}"#);
    let out = hardy(dir.path(), &["--config", "run.json", "verify", "blaschke-basis"]);
    let v = json(&out);
    assert_eq!(v["n_samples"].as_u64(), Some(256));
    assert_eq!(v["seed"].as_u64(), Some(9));

    let out = hardy(dir.path(), &["--config", "run.json", "verify", "blaschke-basis", "--seed", "4"]);
    assert_eq!(json(&out)["seed"].as_u64(), Some(4));

    let out = hardy(dir.path(), &["verify", "blaschke-basis", "--nsamples", "1000"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn tolerance_overrides_reach_the_report() {
    let dir = TempDir::new().unwrap();
    let out = hardy(dir.path(), &["verify", "blaschke-basis", "--tol", "gram deviation=1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["pass"], Value::Bool(false));
    assert_eq!(num(&v["checks"][0]["threshold"]), 1e-30);
}

#[test]
fn experiments_report_without_failing() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "p2.json", r#"{"kind": "p_norm", "p": 2}"#);
    write(
        dir.path(),
        "arc.json",
        r#"{"kind": "arc_weighted", "arc": [0, 3.141592653589793], "inside": {"kind": "p_norm", "p": 2}, "outside": {"kind": "p_norm", "p": 2}}"#,
    );
    let out = hardy(dir.path(), &["experiment", "component-norms", "--spec", "p2.json", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(num(&v["max_excess"]) < 1e-12);
    assert!(num(&v["rotation_spread"]) < 1e-12);

    let out = hardy(dir.path(), &["experiment", "component-norms", "--spec", "arc.json", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["rows"].as_array().unwrap().len(), 40);
    assert!(num(&v["rotation_spread"]) > 1e-3);

    let out = hardy(dir.path(), &["experiment", "maximal-k", "--r", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json(&out)["rows"].as_array().unwrap().clone();
    assert_eq!(rows.len(), 4);
    assert!(rows[..3].iter().all(|r| r["accepted"] == Value::Bool(true)));
    assert_eq!(rows[3]["accepted"], Value::Bool(false));

    let out = hardy(dir.path(), &["experiment", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn decompose_blaschke_basis_and_norm_audit() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "f.json", r#"{"n_samples": 1024, "coeffs": [[0, 1, 0], [1, 0.5, 0], [4, 0, 2]]}"#);
    write(dir.path(), "z.json", r#"{"zeros": [[0, 0], [0.3, -0.2]]}"#);
    let out = hardy(dir.path(), &["decompose", "--fn", "f.json", "--mode", "zn", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["components"].as_array().unwrap().len(), 3);
    assert!(num(&v["residual"]) < 1e-12);

    let out = hardy(dir.path(), &["decompose", "--fn", "f.json", "--mode", "blaschke", "--zeros", "z.json", "--mmax", "8"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(num(&json(&out)["residual"]) < 1e-8);

    let out = hardy(dir.path(), &["blaschke", "basis", "--zeros", "z.json", "--mmax", "6", "--check"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["basis"].as_array().unwrap().len(), 14);
    assert!(num(&v["gram_deviation"]) < 1e-8);

    write(dir.path(), "p3.json", r#"{"kind": "p_norm", "p": 3}"#);
    let out = hardy(dir.path(), &["norm", "audit", "--spec", "p3.json", "--trials", "100", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["pass"], Value::Bool(true));
}

#[test]
fn invariance_span_defect_and_wandering() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "z2.json", r#"{"n_samples": 1024, "coeffs": [[2, 1, 0]]}"#);
    write(dir.path(), "gens.json", r#"[{"n_samples": 1024, "coeffs": [[0, 0.6, 0], [1, 0.8, 0]]}]"#);
    let out = hardy(dir.path(), &["invariance", "span", "--gens", "gens.json", "--multiplier", "z2.json", "--kmax", "10", "--bandwidth", "40", "--out", "s.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    let out = hardy(dir.path(), &["invariance", "defect", "--space", "s.json", "--multiplier", "z2.json"]);
    let v = json(&out);
    assert_eq!(v["dim"].as_u64(), Some(11));
    assert!(num(&v["defect"]) < 1e-10);

    let out = hardy(dir.path(), &["invariance", "wandering", "--space", "s.json", "--multiplier", "z2.json"]);
    let v = json(&out);
    assert_eq!(v["dim"].as_u64(), Some(1));
    let c = &v["vectors"][0]["coeffs"];
    let lead = num(&c[0][1]).hypot(num(&c[0][2]));
    assert!((lead - 0.6).abs() < 1e-10);
}
