//! End-to-end runs of the command-line binary.

use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_bulk-optomech");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn value(csv: &str, key: &str) -> f64 {
    csv.lines()
        .find_map(|l| l.strip_prefix(&format!("{key},")))
        .unwrap_or_else(|| panic!("no row {key}"))
        .parse()
        .unwrap()
}

#[test]
fn steady_succeeds_and_matches_closed_form() {
    let out = run(&["steady"]);
    assert_eq!(code(&out), 0);
    let csv = stdout(&out);
    assert!(csv.starts_with("quantity,value\n"));
    assert!(value(&csv, "i1_rel_dev") < 1e-8);
    assert!(value(&csv, "i2_rel_dev") < 1e-8);
    assert!(value(&csv, "margin") < 0.0);
    assert_eq!(stdout(&run(&["steady", "--verbosity", "quiet"])), csv);
}

#[test]
fn config_file_and_overrides_apply() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "[system]\ng2 = 0.5\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let from_file = stdout(&run(&["steady", "--config", cfg]));
    let overridden = stdout(&run(&["steady", "--config", cfg, "--set", "g2=0.7"]));
    let direct = stdout(&run(&["steady", "--set", "g2=0.7"]));
    assert_ne!(from_file, overridden);
    assert_eq!(overridden, direct);
}

#[test]
fn unknown_key_is_a_config_error_naming_the_key() {
    let out = run(&["steady", "--set", "g3=1"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("system.g3"));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[physical]\nmass = 1\n").unwrap();
    let out = run(&["steady", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("physical.mass"));
}

#[test]
fn invalid_inputs_exit_with_config_status() {
    assert_eq!(code(&run(&["figure", "fig9"])), 2);
    assert_eq!(code(&run(&["steady", "--set", "kappa2=-1"])), 2);
    assert_eq!(code(&run(&["sweep", "--param", "c2", "--start", "2", "--stop", "1"])), 2);
    assert_eq!(code(&run(&["nosuchcommand"])), 2);
    assert_eq!(code(&run(&["steady", "--config", "/nonexistent/run.toml"])), 2);
}

#[test]
fn numerical_preconditions_exit_with_status_three() {
    // Dark/bright constraints violated.
    assert_eq!(code(&run(&["darkbright", "--set", "kappa2=2"])), 3);
    // Unstable point without an explicit horizon.
    let unstable = run(&["dynamics", "--set", "g1=0.6", "--set", "g2=0.6", "--set", "delta1=-1.242", "--set", "delta2=0"]);
    assert_eq!(code(&unstable), 3);
}

#[test]
fn zero_horizon_gives_single_row() {
    let out = run(&["dynamics", "--t-max", "0", "--verbosity", "quiet"]);
    assert_eq!(code(&out), 0);
    let csv = stdout(&out);
    assert_eq!(csv.lines().count(), 2, "{csv}");
}

fn figure_files(dir: &Path, fig: &str) -> Vec<(String, Vec<u8>)> {
    let out = run(&["figure", fig, "--out", dir.to_str().unwrap(), "--verbosity", "quiet"]);
    assert_eq!(code(&out), 0);
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().into_string().unwrap(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn figure_output_is_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = figure_files(a.path(), "fig4a");
    assert_eq!(first, figure_files(b.path(), "fig4a"));
    let names: Vec<&str> = first.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, ["fig4a_gamma_m_0.3.csv", "fig4a_gamma_m_0.45.csv", "fig4a_manifest.json"]);
}

#[test]
fn figure_points_flag_sets_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["figure", "fig5", "--points", "10", "--out", dir.path().to_str().unwrap(), "--verbosity", "quiet"]);
    assert_eq!(code(&out), 0);
    let csv = std::fs::read_to_string(dir.path().join("fig5_bright.csv")).unwrap();
    assert_eq!(csv.lines().count(), 11);
}

#[test]
fn ledger_lists_corrections() {
    let out = run(&["ledger"]);
    assert_eq!(code(&out), 0);
    let md = stdout(&out);
    assert!(md.starts_with("# TYPO_LEDGER"));
    for id in ["mode1-l2", "darkbright-ja1-duplicate", "claim-fig5-bright"] {
        assert!(md.contains(&format!("## {id}")), "missing {id}");
    }
}

#[test]
fn json_format_is_valid_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["sweep", "--param", "c2", "--start", "1", "--stop", "5", "--points", "5", "--format", "json", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(dir.path().join("sweep_c2.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(v.is_object());
}
