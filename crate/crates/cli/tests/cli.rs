use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn kf(args: &[&str]) -> Output {
    kf_env(args, &[])
}

fn kf_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_kf"));
    cmd.args(args).env_remove("KF_WORKERS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("spawn kf")
}

fn summary(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn fig2_cyclic_reaches_direct_solution() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run");
    let o = kf(&["solve", "--system", "fig2", "--out", path(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let s = summary(&out);
    assert!(s["final_error"].as_f64().unwrap() < 1e-8);
    assert!(s["max_pythagoras_defect"].as_f64().unwrap() <= 1e-10);
    let trace = fs::read_to_string(out.join("trace.csv")).unwrap();
    assert!(trace.starts_with("step,error,"));
    assert_eq!(trace.lines().count(), 1 + 1 + 1000);
    assert!(out.join("config.json").exists());
}

#[test]
fn random_mode_needs_a_seed_and_stays_in_envelope() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("r");
    let o = kf(&["solve", "--system", "fig2", "--mode", "random", "--steps", "60", "--trials", "40", "--out", path(&out)]);
    assert_eq!(code(&o), 2);
    assert!(!out.exists());
    let o = kf(&["solve", "--system", "fig2", "--mode", "random", "--steps", "60", "--trials", "40", "--seed", "7", "--out", path(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let s = summary(&out);
    assert!(s["within_envelope"].as_bool().unwrap());
    assert!((s["c_certified"].as_f64().unwrap() - 0.20802).abs() < 1e-5);
}

#[test]
fn solve_from_csv_files() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("a.csv"), "2,0\n0,4\n").unwrap();
    fs::write(tmp.path().join("b.csv"), "2\n8\n").unwrap();
    let out = tmp.path().join("o");
    let o = kf(&[
        "solve",
        "--matrix",
        path(&tmp.path().join("a.csv")),
        "--rhs",
        path(&tmp.path().join("b.csv")),
        "--steps",
        "3",
        "--out",
        path(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let x = &summary(&out)["direct_solution"];
    assert!((x[0][0].as_f64().unwrap() - 1.0).abs() < 1e-14 && (x[1][0].as_f64().unwrap() - 2.0).abs() < 1e-14);
}

#[test]
fn missing_input_exits_3_without_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("o");
    let o = kf(&["solve", "--matrix", "/no/such/a.csv", "--rhs", "/no/such/b.csv", "--out", path(&out)]);
    assert_eq!(code(&o), 3);
    let o = kf(&["diagnose", "--system", "/no/such/system.json", "--out", path(&out)]);
    assert_eq!(code(&o), 3);
    assert_eq!(fs::read_dir(tmp.path()).unwrap().count(), 0);
}

#[test]
fn invalid_ifs_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let desc = tmp.path().join("bad.json");
    fs::write(&desc, r#"{"dim": 1, "M": [0.5], "digits": [[0], [1]], "weights": [0.5, 0.5]}"#).unwrap();
    let out = tmp.path().join("o");
    let o = kf(&["ifs", "fourier", "--system", path(&desc), "--out", path(&out)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("not expansive"));
    assert!(!out.exists());
    let o = kf(&["ifs", "sample", "--system", "no-such-builtin", "--seed", "1", "--out", path(&out)]);
    assert_eq!(code(&o), 2);
}

#[test]
fn diagnose_orthonormal_basis_and_two_vector() {
    let tmp = tempfile::tempdir().unwrap();
    let onb = tmp.path().join("onb.json");
    fs::write(&onb, r#"{"kind": "standard-basis", "dim": 5}"#).unwrap();
    let out = tmp.path().join("onb");
    assert_eq!(code(&kf(&["diagnose", "--system", path(&onb), "--out", path(&out)])), 0);
    let s = summary(&out);
    assert_eq!(s["n_max"], 4);
    assert_eq!(s["residual"].as_f64().unwrap(), 0.0);
    assert!(s["effective"].as_bool().unwrap());

    let tv = tmp.path().join("tv.json");
    fs::write(&tv, r#"{"kind": "two-vector", "theta": 0.3}"#).unwrap();
    let out = tmp.path().join("tv");
    assert_eq!(code(&kf(&["diagnose", "--system", path(&tv), "--steps", "200", "--out", path(&out)])), 0);
    let s = summary(&out);
    // |T_200| = cos(0.3)^200 on the probe e_0.
    assert!((s["residual"].as_f64().unwrap() - 0.3f64.cos().powi(200)).abs() < 1e-12);
    assert!(!s["effective"].as_bool().unwrap());
    assert!(s["max_delta1"].as_f64().unwrap() <= 1e-11 && s["max_delta2"].as_f64().unwrap() <= 1e-11);
    let csv = fs::read_to_string(out.join("diagnostics.csv")).unwrap();
    assert_eq!(csv.lines().count(), 202);
}

#[test]
fn ifs_sample_digits_geometry() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("s");
    let o = kf(&["ifs", "sample", "--system", "sierpinski-gasket", "--n", "30000", "--seed", "5", "--out", path(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let s = summary(&out);
    assert_eq!(s["membership_multiple"], 0);
    assert_eq!(fs::read_to_string(out.join("points.csv")).unwrap().lines().count(), 30001);

    let out = tmp.path().join("d");
    assert_eq!(code(&kf(&["ifs", "digits", "--n", "200000", "--depth", "6", "--seed", "2", "--out", path(&out)])), 0);
    let s = summary(&out);
    assert_eq!(s["violations"], 0);
    assert!((s["levels"][0]["pr_eps0"].as_f64().unwrap() - 2.0 / 3.0).abs() < 0.01);

    let out = tmp.path().join("g");
    assert_eq!(code(&kf(&["ifs", "geometry", "--depth", "10", "--out", path(&out)])), 0);
    let s = summary(&out);
    assert!((s["box_dim"].as_f64().unwrap() - 3f64.ln() / 2f64.ln()).abs() < 0.05);
    assert!((s["removed_area_gap"].as_f64().unwrap() - 0.5 * 0.75f64.powi(10)).abs() < 1e-14);
}

#[test]
fn ifs_fourier_table_and_kakutani() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("f");
    assert_eq!(code(&kf(&["ifs", "fourier", "--system", "lebesgue-interval", "--window", "3", "--out", path(&out)])), 0);
    let csv = fs::read_to_string(out.join("fourier.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n1,re,im,tail_bound"));
    for line in lines {
        let f: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        let expected = if f[0] == 0.0 { 1.0 } else { 0.0 };
        assert!((f[1] - expected).abs() < 1e-12 && f[2].abs() < 1e-12, "{line}");
    }
    let out = tmp.path().join("k");
    assert_eq!(code(&kf(&["ifs", "kakutani", "--p", "0.5,0.5", "--q", "0.5,0.5", "--out", path(&out)])), 0);
    assert_eq!(summary(&out)["verdict"], "equivalent");
}

#[test]
fn frames_lebesgue_bernoulli_and_product() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("leb");
    assert_eq!(code(&kf(&["frames", "--system", "lebesgue-interval", "--sizes", "8,16", "--out", path(&out)])), 0);
    assert!(summary(&out)["floor"].as_f64().unwrap() < 1e-14);

    let out = tmp.path().join("xi");
    let o = kf(&["frames", "--system", "bernoulli-2-3", "--sizes", "16,32,64", "--out", path(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let s = summary(&out);
    let curve: Vec<f64> = s["defect_curve"].as_array().unwrap().iter().map(|p| p[1].as_f64().unwrap()).collect();
    assert!(curve.windows(2).all(|w| w[1] < w[0]));
    assert!((curve[0] - 0.042484).abs() < 1e-5);
    for f in ["gram.csv", "gram.json", "duals.csv", "defect_curve.csv", "cauchy.csv"] {
        assert!(out.join(f).exists(), "{f}");
    }
    assert_eq!(fs::read_to_string(out.join("gram.csv")).unwrap().lines().count(), 1 + 64 * 64);

    let out = tmp.path().join("prod");
    let o = kf(&["frames", "--system", "product-lebesgue-times-cantor", "--sizes", "10,20", "--out", path(&out)]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    let s = summary(&out);
    assert!((s["floor"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!(!out.join("cauchy.csv").exists());
}

#[test]
fn reruns_are_bit_identical_across_worker_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 3] = [
        &["solve", "--system", "fig2", "--mode", "random", "--steps", "40", "--trials", "64", "--seed", "11"],
        &["ifs", "sample", "--system", "sierpinski-carpet", "--n", "5000", "--seed", "3", "--mode", "chain"],
        &["frames", "--system", "sierpinski-gasket", "--sizes", "10,21"],
    ];
    for (k, args) in runs.iter().enumerate() {
        let mut outputs = Vec::new();
        for workers in ["1", "3", "1"] {
            let out = tmp.path().join(format!("{k}-{workers}-{}", outputs.len()));
            let mut full = args.to_vec();
            full.extend(["--out", path(&out)]);
            let o = kf_env(&full, &[("KF_WORKERS", workers)]);
            assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
            let mut files: Vec<_> = fs::read_dir(&out).unwrap().map(|e| e.unwrap().path()).collect();
            files.sort();
            // config.json records --out, which differs between runs.
            files.retain(|f| f.file_name().unwrap() != "config.json");
            outputs.push(files.iter().map(|f| fs::read(f).unwrap()).collect::<Vec<_>>());
        }
        assert!(outputs.windows(2).all(|w| w[0] == w[1]), "run {k}");
    }
}

#[test]
fn existing_output_directory_is_replaced() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("o");
    assert_eq!(code(&kf(&["ifs", "geometry", "--depth", "6", "--out", path(&out)])), 0);
    assert_eq!(code(&kf(&["ifs", "geometry", "--depth", "7", "--out", path(&out)])), 0);
    assert_eq!(summary(&out)["depth"], 7);
    assert!(!tmp.path().join("o.partial").exists());
}
