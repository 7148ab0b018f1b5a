use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

const BUDGET: Duration = Duration::from_secs(5);

fn iqr(out: &Path, args: &[&str]) -> Output {
    let start = Instant::now();
    let o = Command::new(env!("CARGO_BIN_EXE_iqr"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("IQR_OUT")
        .output()
        .expect("binary runs");
    assert!(start.elapsed() < BUDGET, "{args:?} took {:?}", start.elapsed());
    o
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn iqr_writes_points_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = iqr(dir.path(), &["iqr", "--op", "schrodinger_t1", "--m", "50", "--n", "100"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(dir.path().join("iqr_50_100.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("re,im"));
    assert_eq!(lines.count(), 50);
}

#[test]
fn pseudospec_below_floor_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = iqr(dir.path(), &["pseudospec", "--op", "bidiagonal_a", "--eps", "1e-9"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("floor"), "{}", stderr(&o));
}

#[test]
fn pseudospec_small_grid() {
    let dir = tempfile::tempdir().unwrap();
    let o = iqr(
        dir.path(),
        &["pseudospec", "--op", "shift", "--eps", "0.25", "--m", "40", "--region", "-2,2,-2,2", "--resolution", "9,9"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(dir.path().join("pseudospec_40.csv")).unwrap();
    assert!(text.starts_with("re,im,sigma_min\n"));
    assert_eq!(text.lines().count(), 82);
}

#[test]
fn sigma1_tower_reports_radii() {
    let dir = tempfile::tempdir().unwrap();
    let o = iqr(dir.path(), &["tower", "sigma1", "--op", "diag_harmonic", "--g", "identity", "--n", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let radii = v["radii"].as_array().unwrap();
    assert_eq!(radii.len(), 5);
    assert!(radii.iter().all(|r| r.as_f64() == Some(2f64.powi(-5))));
    assert!(dir.path().join("tower_sigma1.json").is_file());
}

#[test]
fn delta1_and_subspace_towers() {
    let dir = tempfile::tempdir().unwrap();
    let o = iqr(
        dir.path(),
        &["tower", "delta1", "--op", "diag:3,2,1", "--k", "2", "--rate", "0.7", "--l", "3", "--n", "6"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["points"][0][0].as_f64(), Some(3.0));
    let o = iqr(
        dir.path(),
        &["tower", "subspace", "--op", "diag:3,3,1", "--dim", "2", "--rate", "0.4", "--l", "1", "--n", "6"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["inputs"]["frame"].as_array().unwrap().len(), 2);
    // rate outside (0, 1) is a validation error
    let o = iqr(
        dir.path(),
        &["tower", "delta1", "--op", "diag:3,2,1", "--k", "1", "--rate", "1.5", "--l", "3", "--n", "6"],
    );
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn finite_section_writes_points() {
    let dir = tempfile::tempdir().unwrap();
    let o = iqr(dir.path(), &["finite-section", "--op", "jacobi_t3", "--m", "21"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(dir.path().join("finite_section_21.csv")).unwrap();
    assert_eq!(text.lines().count(), 22);
}

#[test]
fn experiment_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"operator_id": "diag:3,2,1", "m_values": [4], "n_values": [0]}"#).unwrap();
    let out = dir.path().join("run");
    let o = iqr(&out, &["experiment", "--config", cfg.to_str().unwrap(), "n_values=[0,2]", "samples=2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(out.join("sample_1/points_4_2_1.csv").is_file());
    assert!(out.join("report.json").is_file());

    std::fs::write(&cfg, r#"{"operator_id": "diag:1", "m_values": [4], "n_values": [0], "shiftt": [0, 0]}"#).unwrap();
    let o = iqr(&out, &["experiment", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("shiftt"));
}

#[test]
fn env_out_dir_takes_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let env_dir = dir.path().join("from_env");
    let o = Command::new(env!("CARGO_BIN_EXE_iqr"))
        .args(["finite-section", "--op", "shift", "--m", "5", "--out"])
        .arg(dir.path().join("from_flag"))
        .env("IQR_OUT", &env_dir)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(env_dir.join("finite_section_5.csv").is_file());
    assert!(!dir.path().join("from_flag").exists());
}

#[test]
fn gallery_list_and_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let o = iqr(dir.path(), &["gallery-list", "--threads", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("schrodinger_t1"));
    assert_eq!(iqr(dir.path(), &["iqr", "--op", "shift"]).status.code(), Some(1));
    assert_eq!(iqr(dir.path(), &["frobnicate"]).status.code(), Some(1));
    assert_eq!(iqr(dir.path(), &["iqr", "--op", "nope", "--m", "2", "--n", "1"]).status.code(), Some(1));
}

#[test]
fn computation_failures_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    // identity g never certifies the shift's off-diagonal mass within the guard
    let o = iqr(dir.path(), &["tower", "sigma1", "--op", "shift", "--n", "3", "--guard", "5"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}
