use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn pnsolve(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pnsolve"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr_json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stderr).expect("structured error on stderr")
}

#[test]
fn validate_defaults_passes_every_criterion() {
    let t = tempfile::tempdir().unwrap();
    let o = pnsolve(t.path(), &["validate", "--output", "v"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let r: serde_json::Value = serde_json::from_str(&fs::read_to_string(t.path().join("v/report.json")).unwrap()).unwrap();
    assert_eq!(r["pass"], true);
    let checks = r["checks"].as_array().unwrap();
    for k in 1..=12 {
        assert!(checks.iter().any(|c| c["criterion"] == k), "criterion {k} missing");
    }
    for c in checks {
        for key in ["name", "expected", "actual", "tolerance", "pass"] {
            assert!(c.get(key).is_some());
        }
    }
}

#[test]
fn profile_csv_layout_and_determinism() {
    let t = tempfile::tempdir().unwrap();
    assert!(pnsolve(t.path(), &["solve-static", "--output", "a"]).status.success());
    assert!(pnsolve(t.path(), &["solve-static", "--output", "b"]).status.success());
    let a = fs::read(t.path().join("a/profile.csv")).unwrap();
    let b = fs::read(t.path().join("b/profile.csv")).unwrap();
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "x,u1,v,rho,residual");
    assert_eq!(text.lines().count(), 2 + 4096);
}

#[test]
fn rerun_needs_overwrite_and_keeps_hash() {
    let t = tempfile::tempdir().unwrap();
    let hash = |t: &Path| {
        let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(t.join("r/manifest.json")).unwrap()).unwrap();
        m["config_sha256"].as_str().unwrap().to_string()
    };
    assert!(pnsolve(t.path(), &["solve-static", "--output", "r"]).status.success());
    let h1 = hash(t.path());
    let o = pnsolve(t.path(), &["solve-static", "--output", "r"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"], "output_exists");
    assert!(pnsolve(t.path(), &["solve-static", "--output", "r", "--overwrite"]).status.success());
    assert_eq!(h1, hash(t.path()));
    assert_eq!(h1.len(), 64);
}

#[test]
fn energy_from_emitted_profile_is_reproducible() {
    let t = tempfile::tempdir().unwrap();
    assert!(pnsolve(t.path(), &["solve-static", "--output", "s"]).status.success());
    for out in ["e1", "e2"] {
        let o = pnsolve(t.path(), &["energy", "--output", out, "--profile=s/profile.csv", "--pert_count=2"]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let a = fs::read(t.path().join("e1/energy.json")).unwrap();
    let b = fs::read(t.path().join("e2/energy.json")).unwrap();
    assert_eq!(a, b);
    let e: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(e["perturbations"].as_array().unwrap().len(), 2);
}

#[test]
fn bad_nu_is_named() {
    let t = tempfile::tempdir().unwrap();
    let o = pnsolve(t.path(), &["solve-static", "--output", "x", "--nu=0.6"]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr_json(&o);
    assert_eq!(e["error"], "config");
    assert_eq!(e["key"], "nu");
}

#[test]
fn flag_overrides_file_and_echo_round_trips() {
    let t = tempfile::tempdir().unwrap();
    fs::write(t.path().join("c.toml"), "N = 4096\nL_over_zeta = 50.0\n").unwrap();
    let o = pnsolve(t.path(), &["solve-static", "--config", "c.toml", "--output", "o", "--N=8192"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let echo = fs::read_to_string(t.path().join("o/config.toml")).unwrap();
    assert!(echo.lines().any(|l| l == "N = 8192"));
    assert!(echo.lines().any(|l| l == "zeta = 0.6666666666666666"));
    // the echoed file is itself a valid config producing the same echo
    fs::write(t.path().join("o2.toml"), &echo).unwrap();
    let o = pnsolve(t.path(), &["solve-static", "--config", "o2.toml", "--output", "o", "--overwrite"]);
    assert!(o.status.success());
    assert_eq!(echo, fs::read_to_string(t.path().join("o/config.toml")).unwrap());
}

#[test]
fn unknown_config_key_rejected() {
    let t = tempfile::tempdir().unwrap();
    fs::write(t.path().join("c.toml"), "N = 1024\ncolour = 3\n").unwrap();
    let o = pnsolve(t.path(), &["solve-static", "--config", "c.toml", "--output", "o"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"], "config");
}

#[test]
fn dynamics_underflow_keeps_trace() {
    let t = tempfile::tempdir().unwrap();
    let o = pnsolve(
        t.path(),
        &["dynamics", "--output", "d", "--dt=1000", "--max_halvings=0", "--bump_amplitude=0.4", "--t_end=5000"],
    );
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"], "solver");
    let trace = fs::read_to_string(t.path().join("d/trace.csv")).unwrap();
    assert!(trace.lines().any(|l| l == "t,F,Q,residual,dt"));
    let m = fs::read_to_string(t.path().join("d/manifest.json")).unwrap();
    assert!(m.contains("\"status\": \"error\""));
}

#[test]
fn dynamics_snapshots_and_trace() {
    let t = tempfile::tempdir().unwrap();
    let o = pnsolve(t.path(), &["dynamics", "--output", "d", "--t_end=2", "--snapshot_times=[1.0]", "--N=1024", "--L_over_zeta=50"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(t.path().join("d/snapshot_t1.000000.csv").exists());
    let trace = fs::read_to_string(t.path().join("d/trace.csv")).unwrap();
    let f: Vec<f64> = trace
        .lines()
        .skip(2)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(f.len(), 21);
    assert!(f.windows(2).all(|w| w[1] <= w[0] + 1e-10));
}

#[test]
fn extend_writes_both_half_planes() {
    let t = tempfile::tempdir().unwrap();
    let o = pnsolve(t.path(), &["extend", "--output", "x", "--y_count=3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let f = fs::read_to_string(t.path().join("x/fields.csv")).unwrap();
    let ys: Vec<f64> = f
        .lines()
        .skip(2)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(ys.iter().any(|y| *y > 0.0) && ys.iter().any(|y| *y < 0.0));
}
