use std::path::{Path, PathBuf};
use std::process::Command;

use tempfile::TempDir;
use wslice_core::geometry::{domain_from_json, domain_to_json};

fn wslice(out: &Path, args: &[&str]) -> (i32, String, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_wslice")).args(args).arg("--out").arg(out).env_remove("WSLICE_OUT").output().unwrap();
    (o.status.code().unwrap(), String::from_utf8_lossy(&o.stdout).into(), String::from_utf8_lossy(&o.stderr).into())
}

fn written(stdout: &str, suffix: &str) -> PathBuf {
    let line = stdout.lines().find(|l| l.starts_with("wrote ") && l.ends_with(suffix)).unwrap_or_else(|| panic!("no {suffix} in {stdout}"));
    PathBuf::from(&line[6..])
}

/// Rectangle domain plus a dataset whose slice spans the middle of it.
fn fixture(dir: &TempDir, d_s: f64, c: f64) -> (PathBuf, PathBuf, PathBuf) {
    let (code, out, _) = wslice(dir.path(), &["gen-domain", "--rect", "0,0,10,4"]);
    assert_eq!(code, 0);
    let domain = written(&out, ".domain.json");
    let ds = dir.path().join(format!("ds_{d_s}_{c}.json"));
    std::fs::write(
        &ds,
        format!(r#"{{"x":[1,2],"y":[9,2],"C":{c},"alpha":0,"slices":[{{"polygon":[[4,-1],[6,-1],[6,5],[4,5]],"d_S":{d_s},"label":"mid"}}]}}"#),
    )
    .unwrap();
    let path = dir.path().join("path.json");
    std::fs::write(&path, "[[1,2],[9,2]]").unwrap();
    (domain, ds, path)
}

#[test]
fn exit_status_matrix() {
    let dir = TempDir::new().unwrap();
    let (domain, good, path) = fixture(&dir, 4.5, 10.0);
    let (_, bad, _) = fixture(&dir, 100.0, 10.0);
    let (d, g, b, p) = (domain.to_str().unwrap(), good.to_str().unwrap(), bad.to_str().unwrap(), path.to_str().unwrap());
    let cases: Vec<(Vec<&str>, i32)> = vec![
        (vec!["gen-domain", "--family", "ex32", "--jmax", "3"], 0),
        (vec!["gen-domain", "--family", "thm43", "--js", "2,3"], 0),
        (vec!["gen-domain"], 2),
        (vec!["gen-domain", "--family", "ex99"], 2),
        (vec!["gen-domain", "--family", "thm43", "--alpha0", "1.5"], 2),
        (vec!["gen-domain", "--family", "ex32", "--bogus"], 2),
        (vec!["experiment", "scaling", "--js", "2..4"], 0),
        (vec!["experiment", "scaling", "--js", "4..2"], 2),
        (vec!["experiment", "ex45", "--threads", "0"], 2),
        (vec!["experiment", "ex46", "--alpha0", "0.3", "--alpha1", "0.7"], 0),
        (vec!["experiment", "combine", "--mode", "union", "--donor", "thm43:0.3", "--donor", "ex44:0.7"], 0),
        (vec!["experiment", "combine", "--mode", "union", "--donor", "thm43:0.3", "--donor", "thm43:0.7"], 2),
        (vec!["dist", "--domain", "/nonexistent.json", "--x", "1,1", "--y", "2,2"], 2),
        (vec!["dist", "--domain", d, "--x", "1,1", "--y", "20,2"], 2),
        (vec!["dist", "--domain", d, "--x", "1,1", "--y", "oops"], 2),
        (vec!["check-wslice", "--domain", d, "--dataset", g], 0),
        (vec!["check-wslice", "--domain", d, "--dataset", b], 1),
        (vec!["check-slice", "--domain", d, "--dataset", g, "--path", p], 0),
        (vec!["check-slice", "--domain", d, "--dataset", b, "--path", p], 1),
    ];
    for (args, want) in cases {
        let (code, out, err) = wslice(dir.path(), &args);
        assert_eq!(code, want, "{args:?}\nstdout: {out}\nstderr: {err}");
        if want == 2 {
            assert_eq!(err.trim().lines().count(), 1, "{args:?}: {err}");
        }
    }
}

#[test]
fn usage_errors_name_the_flag() {
    let dir = TempDir::new().unwrap();
    let (_, _, err) = wslice(dir.path(), &["experiment", "thm43", "--alpah", "0.3"]);
    assert!(err.contains("--alpah"), "{err}");
    let (_, _, err) = wslice(dir.path(), &["experiment", "thm43", "--js", "x"]);
    assert!(err.contains("--js"), "{err}");
}

#[test]
fn domain_file_round_trip() {
    let dir = TempDir::new().unwrap();
    let (code, out, _) = wslice(dir.path(), &["gen-domain", "--family", "ex46", "--js", "2,3", "--alpha0", "0.3", "--alpha1", "0.7"]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(written(&out, ".domain.json")).unwrap();
    let domain = domain_from_json(&text).unwrap();
    assert_eq!(domain_to_json(&domain), text);
    assert_eq!(domain_from_json(&domain_to_json(&domain)).unwrap(), domain);
    let svg = std::fs::read_to_string(written(&out, ".svg")).unwrap();
    assert!(svg.starts_with("<svg"));
}

#[test]
fn scaling_table_column_is_alpha_minus_alpha0() {
    let dir = TempDir::new().unwrap();
    let (code, out, _) = wslice(dir.path(), &["experiment", "scaling", "--alpha0", "0.5", "--p", "3", "--q", "6", "--alphas", "0.25,0.5,0.75", "--js", "2..12"]);
    assert_eq!(code, 0);
    let csv = std::fs::read_to_string(written(&out, ".csv")).unwrap();
    let mut lines = csv.lines();
    let head: Vec<&str> = lines.next().unwrap().split(',').collect();
    let (ia, ir) = (head.iter().position(|&c| c == "alpha").unwrap(), head.iter().position(|&c| c == "log2_ratio_over_j").unwrap());
    let mut n = 0;
    for l in lines {
        let v: Vec<f64> = l.split(',').map(|s| s.parse().unwrap()).collect();
        assert!((v[ir] - (v[ia] - 0.5)).abs() <= 1e-12, "{l}");
        n += 1;
    }
    assert_eq!(n, 33);
}

#[test]
fn tall_rectangle_distance() {
    let dir = TempDir::new().unwrap();
    let (code, out, _) = wslice(dir.path(), &["gen-domain", "--rect", "0,0,10,20"]);
    assert_eq!(code, 0);
    let domain = written(&out, ".domain.json");
    let (code, out, _) =
        wslice(dir.path(), &["dist", "--domain", domain.to_str().unwrap(), "--alpha", "0", "--x", "5,0.1", "--y", "5,0.5", "--h", "0.01", "--window", "3,0,7,2"]);
    assert_eq!(code, 0);
    let v: f64 = out.lines().find_map(|l| l.strip_prefix("d_alpha = ")).unwrap().parse().unwrap();
    assert!((v / 5f64.ln() - 1.0).abs() < 0.05, "{v}");
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "alpha0 = 0.25\nalphas = [0.1, 0.9]\njs = \"2..4\"\n").unwrap();
    let (code, out, _) = wslice(dir.path(), &["--config", cfg.to_str().unwrap(), "experiment", "scaling", "--alpha0", "0.75"]);
    assert_eq!(code, 0);
    let rep: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(written(&out, ".json")).unwrap()).unwrap();
    assert_eq!(rep["parameters"]["alpha0"], 0.75);
    assert_eq!(rep["parameters"]["js"], serde_json::json!([2, 3, 4]));
    assert_eq!(rep["provenance"]["version"], env!("CARGO_PKG_VERSION"));

    std::fs::write(&cfg, "alpha_zero = 0.25\n").unwrap();
    let (code, _, err) = wslice(dir.path(), &["--config", cfg.to_str().unwrap(), "experiment", "scaling"]);
    assert_eq!(code, 2);
    assert!(err.contains("--alpha-zero"), "{err}");
}

#[test]
fn output_directory_from_environment() {
    let dir = TempDir::new().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_wslice"))
        .args(["experiment", "ex45", "--js", "2..4"])
        .env("WSLICE_OUT", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    let names: Vec<String> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    assert!(names.iter().any(|n| n.starts_with("ex45_") && n.ends_with(".json")), "{names:?}");
    assert!(names.iter().all(|n| !n.starts_with(".tmp")), "{names:?}");
}
