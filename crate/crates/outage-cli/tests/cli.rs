//! End-to-end tests of the mimo-outage binary: flags, config files, CSV and
//! SVG contracts, exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mimo-outage"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn mimo-outage")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let path = dir.join("run.cfg");
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn exact_only_single_point() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "t = 2.7, 0.2, 0.1\nr = 1.9, 0.1\nrate = 2\nsnr_db = 10\nengines = exact\n",
    );
    let out = run(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "snr_db,exact,asymptotic,mc_p,mc_ci_low,mc_ci_high");
    let row = lines.next().unwrap();
    assert!(lines.next().is_none(), "expected exactly one data row");
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields.len(), 6);
    assert!(!fields[1].is_empty());
    assert!(fields[2].is_empty() && fields[3].is_empty());
    assert!(fields[4].is_empty() && fields[5].is_empty());
}

#[test]
fn csv_round_trips_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "t = 1.9, 0.1\nr = 1.9, 0.1\nrate = 1\nsnr_db = 0, 10\nengines = exact,asymptotic\n",
    );
    let out = run(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    for row in stdout(&out).lines().skip(1) {
        for field in row.split(',').filter(|f| !f.is_empty()) {
            let v: f64 = field.parse().unwrap();
            // 17 significant digits round-trip f64 exactly
            assert_eq!(format!("{v:.16e}"), field);
        }
    }
}

#[test]
fn empty_grid_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "t = 1.9, 0.1\nr = 1.9, 0.1\nsnr_db =\n");
    let out = run(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_config_key_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "t = 1.9, 0.1\nr = 1.9, 0.1\nbogus = 1\n");
    let out = run(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn matrix_file_config_accepted() {
    let dir = tempfile::tempdir().unwrap();
    // exponential-profile-like Hermitian transmit correlation
    std::fs::write(
        dir.path().join("rt.txt"),
        "1.0       0.5+0.2i\n0.5-0.2i  1.0\n",
    )
    .unwrap();
    let cfg = write_config(
        dir.path(),
        "t_matrix = rt.txt\nr = 1.9, 0.1\nrate = 2\nsnr_db = 10\nengines = exact\n",
    );
    let out = run(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let p: f64 = text.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!(p > 0.0 && p < 1.0);
}

#[test]
fn majorize_reports() {
    let out = run(&["majorize", "1,1,1", "2.7,0.2,0.1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("a \u{2aaf} b"), "{text}");
    assert!(text.contains("det(a)=1"), "{text}");

    let out = run(&["majorize", "2,1", "2,1"]);
    assert!(stdout(&out).contains("a \u{2aaf} b and b \u{2aaf} a"));

    // prefix sums cross: 2.5 > 2.4 but 2.8 < 2.95
    let out = run(&["majorize", "2.5,0.3,0.2", "2.4,0.55,0.05"]);
    assert!(stdout(&out).contains("incomparable"));

    let out = run(&["majorize", "1,1", "1,1,1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gain_siso_and_trends() {
    let out = run(&["gain", "--nt", "1", "--nr", "1", "--rates", "1,2,3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().next().unwrap(), "rate,coding_gain_db");
    let gains: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    // C(2) = 1/3 -> -4.77 dB
    assert!((gains[1] - 10.0 * (1.0f64 / 3.0).log10()).abs() < 1e-9);
    assert!(gains[0] > gains[1] && gains[1] > gains[2], "gain must decay in rate");

    let out22 = run(&["gain", "--nt", "2", "--nr", "2", "--rates", "1,2,3"]);
    let gains22: Vec<f64> = stdout(&out22)
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    for (a, b) in gains22.iter().zip(&gains) {
        assert!(a > b, "(2,2) gain must sit above (1,1)");
    }
}

#[test]
fn plot_renders_sweep_and_gain() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    std::fs::write(
        &csv,
        "snr_db,exact,asymptotic,mc_p,mc_ci_low,mc_ci_high\n\
         0.0e0,3.0e-1,2.0e0,3.1e-1,2.9e-1,3.3e-1\n\
         1.0e1,2.8e-2,1.1e-1,2.9e-2,2.6e-2,3.2e-2\n",
    )
    .unwrap();
    let svg = dir.path().join("sweep.svg");
    let out = run(&["plot", csv.to_str().unwrap(), "--out", svg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let body = std::fs::read_to_string(&svg).unwrap();
    assert!(body.starts_with("<svg"));
    for name in ["exact", "asymptotic", "montecarlo"] {
        assert!(body.contains(name), "missing series {name}");
    }

    // single-row CSV still renders (markers only)
    let one = dir.path().join("one.csv");
    std::fs::write(
        &one,
        "snr_db,exact,asymptotic,mc_p,mc_ci_low,mc_ci_high\n0.0e0,3.0e-1,,,,\n",
    )
    .unwrap();
    let out = run(&["plot", one.to_str().unwrap(), "--out", svg.to_str().unwrap()]);
    assert!(out.status.success());

    let gain_csv = dir.path().join("gain.csv");
    std::fs::write(&gain_csv, "rate,coding_gain_db\n1.0e0,0.0e0\n2.0e0,-4.7e0\n").unwrap();
    let out = run(&["plot", gain_csv.to_str().unwrap(), "--out", svg.to_str().unwrap()]);
    assert!(out.status.success());
}

#[test]
fn plot_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("x.svg");
    let out = run(&["plot", "/nonexistent.csv", "--out", svg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "not,a,known,header\n1,2,3,4\n").unwrap();
    let out = run(&["plot", bad.to_str().unwrap(), "--out", svg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fig3_preset_emits_three_ordered_curves() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("fig3.csv");
    let out = bin()
        .args(["sweep", "--figure", "fig3", "--trials", "1000", "--seed", "3"])
        .arg("--out")
        .arg(&base)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    // i.i.d. t1 spectrum must be flagged as perturbed
    assert!(String::from_utf8_lossy(&out.stderr).contains("near-degenerate transmit spectrum"));
    let mut exact_at_10db = Vec::new();
    for k in 1..=3 {
        let path = dir.path().join(format!("fig3_t{k}.csv"));
        let text = std::fs::read_to_string(&path).unwrap();
        let row = text.lines().nth(3).unwrap(); // 15 dB row of the 0..40 grid
        exact_at_10db.push(row.split(',').nth(1).unwrap().parse::<f64>().unwrap());
    }
    assert!(exact_at_10db[2] > exact_at_10db[1] && exact_at_10db[1] > exact_at_10db[0]);
}

#[test]
fn rate_opt_reports_target() {
    let out = run(&["rate-opt", "--figure", "fig1", "--snr-db", "30", "--target-outage", "1e-3"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("R* = "));
    let out = run(&["rate-opt", "--figure", "fig1", "--snr-db", "30"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_worker_env_is_usage_error() {
    let out = bin()
        .args(["majorize", "1,1", "1,1"])
        .env("MIMO_OUTAGE_WORKERS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
