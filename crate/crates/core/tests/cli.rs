mod common;

use std::fs;
use std::path::{Path, PathBuf};

use memwave::cli::{run, CliError};
use memwave::gap_analysis::GapError;
use serde_json::Value;

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("memwave").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write_grid(path: &Path, m: usize, f: impl Fn(f64, f64) -> f64) {
    let h = std::f64::consts::PI / (m + 1) as f64;
    let mut text = String::new();
    for i in 1..=m {
        let row: Vec<String> = (1..=m).map(|j| format!("{}", f(h * i as f64, h * j as f64))).collect();
        text.push_str(&row.join(","));
        text.push('\n');
    }
    fs::write(path, text).unwrap();
}

fn grids(dir: &Path) -> (PathBuf, PathBuf) {
    let u0 = dir.join("u0.csv");
    let u1 = dir.join("u1.csv");
    write_grid(&u0, 33, |x, y| {
        x.sin() * y.sin() + 0.3 * (2.0 * x).sin() * (3.0 * y).sin()
    });
    write_grid(&u1, 33, |x, y| 0.5 * (3.0 * x).sin() * y.sin());
    (u0, u1)
}

#[test]
fn spectrum_memoryless_csv() {
    let (code, out, _) = cli(&[
        "spectrum", "--beta", "0", "--eta", "0", "--kmax", "2", "--format", "csv",
    ]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("k1,k2,lambda,re_omega,im_omega,r,residual"));
    let re: Vec<f64> = lines.map(|l| l.split(',').nth(3).unwrap().parse().unwrap()).collect();
    let want = [2f64.sqrt(), 5f64.sqrt(), 5f64.sqrt(), 8f64.sqrt()];
    assert_eq!(re.len(), 4);
    for (a, b) in re.iter().zip(want) {
        assert!((a - b).abs() < 1e-15);
    }
}

#[test]
fn spectrum_json() {
    let (code, out, _) = cli(&["spectrum", "--beta", "0.5", "--kmax", "3", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 9);
    assert!(v[0]["residual"].as_f64().unwrap() < 1e-12);
}

#[test]
fn gaps_audit_json() {
    let (code, out, _) = cli(&["gaps", "--beta", "0.3", "--kmax", "16"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let gamma = v["gamma"].as_f64().unwrap();
    assert!((gamma - 0.407_164_678_804_202_512_566).abs() < 1e-14);
    assert!(v["min_ratio_k2"].as_f64().unwrap() >= gamma);
}

#[test]
fn gamma_table_csv() {
    let (code, out, _) = cli(&["gaps", "--gamma-table", "--steps", "10"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "beta,gamma");
    assert_eq!(lines.len(), 12);
}

#[test]
fn missing_flag_exits_two() {
    let (code, out, err) = cli(&["spectrum", "--beta", "0.1"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert_eq!(err.lines().count(), 1, "{err}");
    let (code, _, err) = cli(&["observe", "--beta"]);
    assert_eq!(code, 2);
    assert_eq!(err.lines().count(), 1, "{err}");
}

#[test]
fn range_validation() {
    for args in [
        &["spectrum", "--beta", "5", "--kmax", "2"][..],
        &["spectrum", "--beta", "0.1", "--kmax", "0"],
        &["spectrum", "--beta", "0.1", "--kmax", "600"],
        &["spectrum", "--beta", "0.4", "--eta", "0.1", "--kmax", "2"],
        &["ingham-check", "--family", "x.json", "--T", "-1"],
    ] {
        let (code, _, err) = cli(args);
        assert_eq!(code, 2, "{args:?}: {err}");
    }
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.toml");
    fs::write(&empty, "").unwrap();
    let (code, out, _) = cli(&[
        "--config",
        empty.to_str().unwrap(),
        "gaps",
        "--beta",
        "0.3",
        "--kmax",
        "4",
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["beta"], 0.3);

    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "beta = 0.2\nkmax = 4\n").unwrap();
    let c = cfg.to_str().unwrap();
    let (_, out, _) = cli(&["--config", c, "gaps"]);
    assert_eq!(serde_json::from_str::<Value>(&out).unwrap()["beta"], 0.2);
    let (_, out, _) = cli(&["--config", c, "gaps", "--beta", "0.3"]);
    assert_eq!(serde_json::from_str::<Value>(&out).unwrap()["beta"], 0.3);

    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "kmax = 4\nbeta = 5\n").unwrap();
    let (code, _, err) = cli(&["--config", bad.to_str().unwrap(), "gaps"]);
    assert_eq!(code, 2);
    assert!(err.contains("beta"), "{err}");

    let broken = dir.path().join("broken.toml");
    fs::write(&broken, "kmax = 4\n\nbeta = = 1\n").unwrap();
    let (code, _, err) = cli(&["--config", broken.to_str().unwrap(), "gaps"]);
    assert_eq!(code, 2);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn config_sections() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "beta = 0.2\n[gaps]\nbeta = 0.6\nkmax = 3\n").unwrap();
    let (code, out, _) = cli(&["--config", cfg.to_str().unwrap(), "gaps"]);
    assert_eq!(code, 0);
    assert_eq!(serde_json::from_str::<Value>(&out).unwrap()["beta"], 0.6);
}

#[test]
fn modes_emits_records() {
    let dir = tempfile::tempdir().unwrap();
    let (u0, u1) = grids(dir.path());
    let emit = dir.path().join("coeffs.json");
    let (code, _, err) = cli(&[
        "modes",
        "--beta",
        "0.2",
        "--kmax",
        "4",
        "--u0",
        u0.to_str().unwrap(),
        "--u1",
        u1.to_str().unwrap(),
        "--emit",
        emit.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&fs::read_to_string(&emit).unwrap()).unwrap();
    let modes = v["modes"].as_array().unwrap();
    assert_eq!(modes.len(), 16);
    for key in ["k1", "k2", "C_re", "C_im", "R", "re_omega", "im_omega", "r"] {
        assert!(modes[0].get(key).is_some(), "missing {key}");
    }
    assert_eq!(modes[0]["k1"], 1);
    assert!(v["mu_hat"].as_f64().unwrap() >= 0.0);
}

#[test]
fn grid_too_coarse_is_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let (u0, u1) = grids(dir.path());
    let (code, _, _) = cli(&[
        "modes",
        "--beta",
        "0.2",
        "--kmax",
        "20",
        "--u0",
        u0.to_str().unwrap(),
        "--u1",
        u1.to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
}

fn observe(dir: &Path, report: &Path, extra: &[&str]) -> (i32, String, String) {
    let (u0, u1) = grids(dir);
    let mut args = vec![
        "observe",
        "--beta",
        "0",
        "--T",
        "50",
        "--kmax",
        "8",
        "--mu",
        "1",
        "--u0",
        u0.to_str().unwrap(),
        "--u1",
        u1.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    let owned: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    let refs: Vec<&str> = owned.iter().map(String::as_str).collect();
    cli(&refs)
}

#[test]
fn observe_report_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let r1 = dir.path().join("r1.json");
    let r2 = dir.path().join("r2.json");
    let r3 = dir.path().join("r3.json");
    let (code, out, err) = observe(dir.path(), &r1, &[]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("verdict=true"));
    observe(dir.path(), &r2, &[]);
    observe(dir.path(), &r3, &["--threads", "3"]);
    let a = fs::read(&r1).unwrap();
    assert_eq!(a, fs::read(&r2).unwrap());
    assert_eq!(a, fs::read(&r3).unwrap());
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["verdict"], true);
    assert_eq!(v["kmax"], 8);
    assert_eq!(v["mu_source"], "user");
    assert!(v["gamma"].as_f64().is_some());
}

#[test]
fn observe_infeasible_still_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let (u0, u1) = grids(dir.path());
    let report = dir.path().join("r.json");
    let (code, _, err) = cli(&[
        "observe",
        "--beta",
        "0.5",
        "--T",
        "50",
        "--kmax",
        "4",
        "--mu",
        "1",
        "--u0",
        u0.to_str().unwrap(),
        "--u1",
        u1.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code, 2, "{err}");
    let v: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["verdict"], false);
    assert_eq!(v["T0"], "inf");
}

#[test]
fn thresholds_csv() {
    let (code, out, _) = cli(&["thresholds", "--mu", "1", "--theta", "1", "--beta-steps", "4"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "beta,gamma,S,T0,beta0_global");
    assert_eq!(lines.len(), 6);
    let first: Vec<f64> = lines[1].split(',').map(|x| x.parse().unwrap()).collect();
    assert!((first[3] - 45.341_723_575_401_045).abs() < 1e-10);
    assert!((first[4] - 0.069_224_731_207_111_06).abs() < 1e-12);
    assert!(lines[5].split(',').nth(3) == Some("inf"));
}

#[test]
fn ingham_check_family_file() {
    let dir = tempfile::tempdir().unwrap();
    let fam = dir.path().join("family.json");
    let body = serde_json::json!({
        "omega_re": [1.0, 2.1, 3.3], "omega_im": [0.0, 0.0, 0.0], "r": [-1.0, -1.0, -2.0],
        "C_re": [1.0, 0.5, 0.2], "C_im": [0.0, 0.1, 0.0], "R": [0.1, 0.0, 0.01],
        "gamma": 1.0, "tau": 1, "theta": 1.0, "mu": 1.0,
    });
    fs::write(&fam, body.to_string()).unwrap();
    let (code, out, err) = cli(&["ingham-check", "--family", fam.to_str().unwrap(), "--T", "40"]);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    for key in ["lhs", "rhs", "S", "margin", "violations"] {
        assert!(v.get(key).is_some());
    }
    assert!(v["margin"].as_f64().unwrap() >= 0.0);

    // T too short for this gap: reported, exit 2.
    let (code, out, _) = cli(&["ingham-check", "--family", fam.to_str().unwrap(), "--T", "3"]);
    assert_eq!(code, 2);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["violations"][0]["hypothesis"], "horizon");
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let (code, out, _) = cli(&[
        "--output",
        path.to_str().unwrap(),
        "spectrum",
        "--beta",
        "0.1",
        "--kmax",
        "2",
    ]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    assert!(fs::read_to_string(&path).unwrap().starts_with("k1,k2,"));
}

#[test]
fn assertion_errors_exit_one() {
    let e: CliError = GapError::AuditFailure {
        inequality: "k2 gap",
        first: (1, 1),
        second: (1, 2),
        value: 0.1,
        bound: 0.2,
    }
    .into();
    assert_eq!(e.exit_code(), 1);
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = cli(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("observe"));
}
