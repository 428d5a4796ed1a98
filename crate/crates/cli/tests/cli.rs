use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn fnls(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fnls")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn constants_laplacian_line() {
    let o = fnls(&["constants", "--n", "1", "--s", "1", "--omega", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["m1"].as_f64().unwrap() - 0.5).abs() < 1e-14);
    assert!((v["c2"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert!((v["printed_factor"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert!(v["max_rel_diff"].as_f64().unwrap() < 1e-10);
}

#[test]
fn constants_csv_carries_the_same_numbers() {
    let json: Value = serde_json::from_str(&stdout(&fnls(&["constants", "--s", "0.9", "--omega", "2"]))).unwrap();
    let csv = stdout(&fnls(&["--format", "csv", "constants", "--s", "0.9", "--omega", "2"]));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("key,value"));
    for line in lines {
        let (k, v) = line.split_once(',').unwrap();
        // the JSON side goes through serde_json's fast float parser, which may be off by an ulp
        let (a, b) = (v.parse::<f64>().unwrap(), json[k].as_f64().unwrap());
        assert!((a - b).abs() <= 4.0 * f64::EPSILON * b.abs(), "{k}: {a} vs {b}");
    }
}

#[test]
fn inadmissible_order_is_a_usage_error() {
    let o = fnls(&["constants", "--n", "1", "--s", "0.4"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("requires s > n/2"), "{err}");
    assert_eq!(err.trim().lines().count(), 1);
}

#[test]
fn bad_flags_exit_two() {
    for args in [
        vec!["stability-map", "--s-range", "1:0:3", "--sigma-range", "0.1:4:5"],
        vec!["profile", "--r-range", "0:1"],
        vec!["constants", "--bogus"],
        vec!["--jobs", "0", "spectrum"],
        vec!["--tol", "-1", "constants"],
        vec!["simulate", "--config", "/nonexistent/config.txt"],
        vec!["variational", "--scales", "8,4"],
        vec!["variational", "--n", "2", "--s", "1.5"],
    ] {
        let o = fnls(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn stability_map_boundary_on_the_line() {
    let o = fnls(&["stability-map", "--n", "1", "--s-range", "0.6:3:25", "--sigma-range", "0.1:4:40"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("s,sigma,Q,classification,k_r,unstable_lambda"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 1000);
    for r in &rows {
        let s: f64 = r[0].parse().unwrap();
        let sigma: f64 = r[1].parse().unwrap();
        let crit = 2.0 * s - 1.0;
        if (sigma - crit).abs() < 1e-9 {
            continue;
        }
        let want = if sigma < crit { "stable" } else { "unstable" };
        assert_eq!(r[3], want, "s={s} sigma={sigma}");
        assert_eq!(r[5].is_empty(), want == "stable");
    }
}

#[test]
fn outputs_are_reproducible_with_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for d in [&a, &b] {
        let o = fnls(&["--out", d.to_str().unwrap(), "profile", "--sigma", "1.5", "--r-range", "0:5:51"]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let body = fs::read(a.join("profile.csv")).unwrap();
    assert_eq!(body, fs::read(b.join("profile.csv")).unwrap());
    let text = String::from_utf8(body).unwrap();
    assert!(text.starts_with("r,phi\n"));
    assert_eq!(text.lines().count(), 52);
    let m = manifest(&a);
    assert_eq!(m["command"], "profile");
    assert_eq!(m["outputs"], serde_json::json!(["profile.csv"]));
    assert_eq!(m["parameters"]["sigma"], 1.5);
    assert!(m["timestamp"].as_str().is_some_and(|t| !t.is_empty()));
    assert!(m["code_version"].as_str().unwrap().starts_with("fnls "));
    assert_eq!(fs::read_dir(&a).unwrap().count(), 2);
}

#[test]
fn spectrum_report_fields() {
    let o = fnls(&["spectrum", "--sigma", "2"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["classification"], "unstable");
    assert_eq!(v["n_L"], 1);
    assert_eq!(v["n_D"], 0);
    assert_eq!(v["k_r"], 1);
    let lam = v["unstable_lambda"].as_f64().unwrap();
    assert!((lam - 4.0 * 3f64.sqrt()).abs() < 1e-8);
    assert!((v["lplus_negative_eig"].as_f64().unwrap() + 24.0).abs() < 1e-9);
}

#[test]
fn pohozaev_exact_case() {
    let dir = tempfile::tempdir().unwrap();
    let o = fnls(&["--out", dir.path().to_str().unwrap(), "pohozaev"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("pohozaev.json")).unwrap()).unwrap();
    assert!((v["l2_mass"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert!(manifest(dir.path())["summary"]["max_residual"].as_f64().unwrap() < 1e-12);
}

#[test]
fn variational_table() {
    let o = fnls(&["--jobs", "1", "variational", "--scales", "4,8,16"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("N,m_N,gap,iterations,residual"));
    let gaps: Vec<f64> = lines.map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert_eq!(gaps.len(), 3);
    assert!(gaps.windows(2).all(|w| w[1] < w[0] && w[1] > 0.0));
}

#[test]
fn simulate_unstable_fixture_reports_growth() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("unstable.cfg");
    fs::write(
        &cfg,
        "# sigma = 2 on a short, well-resolved grid\nn = 1\ns = 1\nomega = 1\nsigma = 2\nhalf_length = 10\nmodes = 1024\n\
         dt = 2e-6\nt_final = 1.8\neps = 1e-4\nshape = greens-bump\nseed = 0\nsample_every = 0.01\n",
    )
    .unwrap();
    let out = dir.path().join("run");
    let o = fnls(&["simulate", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let series = fs::read_to_string(out.join("series.csv")).unwrap();
    assert!(series.starts_with("t,mass_drift,energy_drift,center_modulus,mod_distance\n"));
    assert_eq!(series.lines().count(), 182);
    let m = manifest(&out);
    let rate = m["summary"]["growth_rate"].as_f64().expect("growth_rate present");
    let lam = 4.0 * 3f64.sqrt();
    assert!((rate - lam).abs() < 0.15 * lam, "{rate}");
    assert_eq!(m["parameters"]["sigma"], 2.0);
    assert_eq!(m["parameters"]["shape"], "greens-bump");
    assert!(m["summary"].get("blow_up_time").is_none());
}

#[test]
fn simulate_stable_fixture_has_no_growth_rate() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("stable.cfg");
    fs::write(&cfg, "sigma = 0.5\nt_final = 1\neps = 1e-3\nshape = noise\nseed = 5\n").unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = fnls(&["simulate", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", stderr(&o));
        (fs::read(out.join("series.csv")).unwrap(), manifest(&out))
    };
    let (a, m) = run("a");
    let (b, _) = run("b");
    assert_eq!(a, b);
    assert!(m["summary"].get("growth_rate").is_none());
    assert!(m["summary"]["max_mass_drift"].as_f64().unwrap() < 1e-10);
}
