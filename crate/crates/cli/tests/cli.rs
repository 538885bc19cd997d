use std::process::{Command, Output};

use serde_json::Value;

fn invosc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_invosc")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn pcf_examples() {
    let o = invosc(&["pcf", "--nu", "0", "--z", "2"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert!((v["value"]["re"].as_f64().unwrap() - 0.3678794412).abs() < 1e-10);
    assert!(v["est_error"].as_f64().unwrap() >= 0.0);

    let o = invosc(&["pcf", "--nu", "1", "--z", "2"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert!((v["value"]["re"].as_f64().unwrap() - 0.7357588823).abs() < 1e-10);
    assert!(v["value"]["im"].as_f64().unwrap().abs() < 1e-14);
}

#[test]
fn pcf_complex_literal_and_forced_method() {
    let a = json(&invosc(&["pcf", "--nu", "-0.5", "--z", "1 + 1i"]));
    let b = json(&invosc(&["pcf", "--nu", "-0.5", "--z", "1+1i", "--method", "integral_plus"]));
    assert_eq!(b["method"], "integral_plus");
    for part in ["re", "im"] {
        let d = a["value"][part].as_f64().unwrap() - b["value"][part].as_f64().unwrap();
        assert!(d.abs() < 1e-9, "{part}: {d}");
    }
}

#[test]
fn parse_and_usage_errors_exit_2() {
    assert_eq!(code(&invosc(&["pcf", "--nu", "0.5", "--z", "bad"])), 2);
    assert_eq!(code(&invosc(&["pcf", "--nu", "0.5"])), 2);
    assert_eq!(code(&invosc(&["pcf", "--nu", "0", "--z", "1", "--method", "magic"])), 2);
    assert_eq!(code(&invosc(&["verify", "unknown"])), 2);
    assert_eq!(code(&invosc(&["frobnicate"])), 2);
    assert_eq!(code(&invosc(&["states", "--family", "chi"])), 2);
    assert_eq!(code(&invosc(&["scatter", "--gamma", "-1", "--emin", "0", "--emax", "1", "--n", "3"])), 2);
    // A forced method outside its region is a usage error.
    assert_eq!(code(&invosc(&["pcf", "--nu", "0.5", "--z", "1", "--method", "hermite_reduction"])), 2);
}

#[test]
fn help_exits_0() {
    assert_eq!(code(&invosc(&["--help"])), 0);
}

#[test]
fn verify_prop1_passes() {
    let o = invosc(&["verify", "prop1"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["pass"], true);
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 3);
    for c in checks {
        for key in ["check_id", "paper_ref", "measured", "tolerance", "pass"] {
            assert!(c.get(key).is_some(), "missing {key}");
        }
    }
}

#[test]
fn verify_appendix_passes() {
    let o = invosc(&["verify", "appendix"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    assert!(json(&o)["checks"].as_array().unwrap().iter().any(|c| c["check_id"].as_str().unwrap().contains("entire")));
}

#[test]
fn scatter_grid_and_half_reflection() {
    let o = invosc(&["scatter", "--gamma", "1", "--emin", "-5", "--emax", "5", "--n", "101"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("E,re_R,im_R,re_T,im_T,abs2_R,abs2_T"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|t| t.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 101);
    let mid = &rows[50];
    assert_eq!(mid[0], 0.0);
    assert!((mid[5] - 0.5).abs() < 1e-12);
    for r in &rows {
        assert!((r[5] + r[6] - 1.0).abs() < 1e-12);
    }
}

#[test]
fn scatter_is_deterministic_and_written_atomically() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("s.csv");
    let ps = p.to_str().unwrap();
    let args = ["scatter", "--emin", "-2", "--emax", "2", "--n", "17", "--out", ps];
    assert_eq!(code(&invosc(&args)), 0);
    let first = std::fs::read(&p).unwrap();
    let env_out = Command::new(env!("CARGO_BIN_EXE_invosc")).args(args).env("INVOSC_THREADS", "1").output().unwrap();
    assert_eq!(code(&env_out), 0);
    assert_eq!(first, std::fs::read(&p).unwrap());
    let leftovers: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(leftovers.len(), 1);
}

#[test]
fn bad_thread_count_is_usage_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_invosc")).args(["pcf", "--nu", "0", "--z", "1"]).env("INVOSC_THREADS", "0").output().unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn poles_eta_ladder() {
    let o = invosc(&["poles", "--gamma", "1", "--nmax", "3", "--family", "eta"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let list = v.as_array().unwrap();
    assert_eq!(list.len(), 3);
    for (n, p) in list.iter().enumerate() {
        assert_eq!(p["n"], n);
        assert!(p["location_re"].as_f64().unwrap().abs() < 1e-6);
        assert!((p["location_im"].as_f64().unwrap() - (n as f64 + 0.5)).abs() < 1e-6);
        assert!(p.get("est_error").is_some() && p.get("method").is_some());
    }
    let chi = json(&invosc(&["poles", "--gamma", "2", "--nmax", "2", "--family", "chi"]));
    assert!((chi[1]["location_im"].as_f64().unwrap() + 3.0).abs() < 1e-6);
}

#[test]
fn states_resonant_modulus_at_origin() {
    let o = invosc(&["states", "--family", "resonant", "--n", "0", "--sign", "plus", "--grid", "-8:8:1025"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let row: Vec<f64> = text.lines().nth(513).unwrap().split(',').map(|t| t.parse().unwrap()).collect();
    assert_eq!(row[0], 0.0);
    assert!((row[1].hypot(row[2]) - 0.7511).abs() < 1e-4);
}

#[test]
fn states_to_file_with_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("chi.csv");
    let o = invosc(&["states", "--family", "chi", "--sign", "minus", "--energy", "0.5", "--grid", "-4:4:64", "--out", p.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&p).unwrap();
    assert_eq!(csv.lines().count(), 65);
    let meta: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("chi.csv.json")).unwrap()).unwrap();
    assert_eq!(meta["grid"]["n_points"], 64);
    assert_eq!(meta["family"], "chi");
}

#[test]
fn evolve_writes_report_and_samples() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = invosc(&["evolve", "--gamma", "1", "--t0", "0", "--t1", "2", "--steps", "4", "--phi", "gaussian:1", "--N", "40", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["times"].as_array().unwrap().len(), 5);
    assert_eq!(report["branch"], "minus");
    let norms: Vec<f64> = report["norms"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert!(norms.windows(2).all(|w| w[1] < w[0]));
    for k in 0..5 {
        let csv = std::fs::read_to_string(out.join(format!("t_{k:04}.csv"))).unwrap();
        assert!(csv.starts_with("x,re,im\n"));
    }
}

#[test]
fn evolve_rejects_the_wrong_time_direction() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = invosc(&["evolve", "--t0", "0", "--t1", "-1", "--steps", "2", "--family", "minus", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let o = invosc(&["evolve", "--t0", "0", "--t1", "-1", "--steps", "2", "--family", "plus", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
}

#[test]
fn overflow_is_a_numerical_failure() {
    let o = invosc(&["pcf", "--nu", "30+30i", "--z", "1e300"]);
    assert_eq!(code(&o), 3);
    assert!(!o.stderr.is_empty());
}
