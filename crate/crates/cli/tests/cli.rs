use std::path::Path;
use std::process::{Command, Output};

use esd_core::io::{read_sweep_csv, read_table_csv, read_trajectory_csv, read_window_csv};

fn esdsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_esdsim")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn phi_plus_trajectory_dies_near_published_time() {
    let o = esdsim(&["evolve", "--state", "bell:phi+", "--horizon", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let file = read_trajectory_csv(&stdout(&o)).unwrap();
    let first_zero = file.rows.iter().find(|r| r.c == 0.0).unwrap().tau;
    assert!((first_zero - 3.39).abs() < 0.01, "{first_zero}");
}

#[test]
fn zero_horizon_gives_one_row() {
    let o = esdsim(&["evolve", "--state", "x2:x=1.6", "--horizon", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(read_trajectory_csv(&stdout(&o)).unwrap().rows.len(), 1);
}

#[test]
fn switched_werner_stays_entangled() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.csv");
    let o = esdsim(&[
        "evolve", "--state", "werner:psi+:sl=0.7", "--gate", "Z-I", "--switch-at", "0.2", "--horizon", "15",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = read(&out);
    assert!(text.contains("# switch tau=0.2 gate=Z-I"));
    let file = read_trajectory_csv(&text).unwrap();
    assert!(file.rows.iter().all(|r| r.c > 0.0));
}

#[test]
fn scan_reports_avoid_window() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    let o = esdsim(&["scan", "--state", "x2:x=1.6", "--gate", "X-Z", "--grid-step", "0.02", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let summary = stdout(&o);
    assert!(summary.contains("Avoids: (0, 0.3"), "{summary}");
    let grid = read_window_csv(&read(&out)).unwrap();
    assert!(!grid.is_empty());
}

#[test]
fn identity_scan_is_unchanged_everywhere() {
    let o = esdsim(&["scan", "--state", "x2:x=1.6", "--gate", "I-I", "--grid-step", "0.02"]);
    assert_eq!(o.status.code(), Some(0));
    let grid = read_window_csv(&stdout(&o)).unwrap();
    assert!(grid.iter().all(|g| g.class.label() == "Unchanged"));
}

#[test]
fn table_one_matches_and_exports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t1.csv");
    let o = esdsim(&["table", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let rows = read_table_csv(&read(&out)).unwrap();
    assert!(rows.iter().all(|r| r.pass && r.deviation.unwrap_or(0.0) <= 0.01));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(esdsim(&["table", "9"]).status.code(), Some(2));
    assert_eq!(esdsim(&["evolve", "--state", "bell:nope"]).status.code(), Some(2));
    assert_eq!(esdsim(&["evolve"]).status.code(), Some(2));
    assert_eq!(esdsim(&["evolve", "--state", "bell:phi+", "--gate", "X-I"]).status.code(), Some(2));
    assert_eq!(esdsim(&["evolve", "--state", "bell:phi+", "--dt", "-1"]).status.code(), Some(2));
    assert_eq!(esdsim(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(esdsim(&["evolve", "--coupling", "geometry", "--r12", "0.1", "--state", "bell:phi+"]).status.code(), Some(2));
}

#[test]
fn non_physical_matrix_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rho.txt");
    std::fs::write(&path, "1,0 0,0 0,0 0,0\n0,0 1,0 0,0 0,0\n0,0 0,0 0,0 0,0\n0,0 0,0 0,0 0,0\n").unwrap();
    let spec = format!("file:{}", path.display());
    assert_eq!(esdsim(&["evolve", "--state", &spec, "--horizon", "0.1"]).status.code(), Some(2));
}

#[test]
fn empty_sweep_has_only_header() {
    let o = esdsim(&["sweep", "--state", "werner:psi+:sl=0.5", "--param", "sl", "--values", ""]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "sl,tau_d,tau_r\n");
}

#[test]
fn linear_entropy_sweep_is_decreasing() {
    let o = esdsim(&["sweep", "--state", "werner:psi+:sl=0.5", "--param", "sl", "--values", "0.5,0.6,0.7", "--horizon", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let (_, rows) = read_sweep_csv(&stdout(&o)).unwrap();
    let d: Vec<f64> = rows.iter().map(|r| r.tau_d.unwrap()).collect();
    assert!(d[0] > d[1] && d[1] > d[2], "{d:?}");
}

#[test]
fn config_file_is_used_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "state = bell:phi+\nhorizon = 0.5\nrecord_every = 100\n").unwrap();
    let c = cfg.to_str().unwrap();
    let o = esdsim(&["evolve", "--config", c]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(read_trajectory_csv(&stdout(&o)).unwrap().rows.len(), 51);
    let o = esdsim(&["evolve", "--config", c, "--horizon", "0.2"]);
    assert_eq!(read_trajectory_csv(&stdout(&o)).unwrap().rows.len(), 21);

    std::fs::write(&cfg, "state = bell:phi+\nspeed = 3\n").unwrap();
    assert_eq!(esdsim(&["evolve", "--config", c]).status.code(), Some(2));
}

#[test]
fn geometry_coupling_is_announced() {
    let o = esdsim(&["evolve", "--state", "bell:phi+", "--horizon", "0", "--coupling", "geometry", "--r12", "0.1", "--mu-dot-r", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let err = String::from_utf8(o.stderr.clone()).unwrap();
    assert!(err.contains("Gamma12 = ") && err.contains("Omega12 = "));
    assert!(stdout(&o).contains("coupling=geometry"));
}

#[test]
fn json_output_parses() {
    let o = esdsim(&["evolve", "--state", "bell:phi+", "--horizon", "0.01", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 11);
}

#[test]
fn validate_passes_on_short_runs() {
    let o = esdsim(&["validate", "--horizon", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn output_is_deterministic() {
    let run = || stdout(&esdsim(&["scan", "--state", "werner:phi+:p=0.5477", "--gate", "X-Z", "--grid-step", "0.02"]));
    assert_eq!(run(), run());
    let seq = stdout(&esdsim(&[
        "scan", "--state", "werner:phi+:p=0.5477", "--gate", "X-Z", "--grid-step", "0.02", "--execution", "sequential",
    ]));
    assert_eq!(run(), seq);
}
