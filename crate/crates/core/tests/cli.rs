use std::path::Path;
use std::process::{Command, Output};

use colorcode::experiments::{read_aggregates, read_manifest, read_records};

fn colorcode(args: &[&str], env_root: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_colorcode"));
    cmd.args(args).env_remove("COLORCODE_OUT_ROOT");
    if let Some(root) = env_root {
        cmd.env("COLORCODE_OUT_ROOT", root);
    }
    cmd.output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn negativity_of_fig2_region() {
    let v = json(&colorcode(
        &["negativity", "--L", "12", "--preset", "fig2-parallelogram"],
        None,
    ));
    assert_eq!(v["value"], 8.0);
    let v = json(&colorcode(
        &[
            "negativity",
            "--L",
            "12",
            "--preset",
            "fig2-parallelogram",
            "--p",
            "1",
        ],
        None,
    ));
    assert_eq!(v["value"], 7.0);
}

#[test]
fn ten_of_complex_reports_parts() {
    let v = json(&colorcode(
        &[
            "negativity",
            "--L",
            "24",
            "--complex",
            "ten-7-green",
            "--p",
            "1",
        ],
        None,
    ));
    assert_eq!(v["value"], 1.0);
    assert_eq!(v["parts"].as_object().unwrap().len(), 7);
}

#[test]
fn oracle_check_summary() {
    let out = colorcode(&["oracle-check", "--trials", "30", "--seed", "5"], None);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("30/30 exact"));
}

#[test]
fn build_lattice_json() {
    let v = json(&colorcode(&["build-lattice", "--L", "6"], None));
    assert_eq!(v["n_vertices"], 72);
}

#[test]
fn center_prints_tableau() {
    let out = colorcode(&["center", "--L", "6"], None);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let rows = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .count();
    assert_eq!(rows, 59);
}

#[test]
fn sweep_writes_results_under_env_root() {
    let root = tempfile::tempdir().unwrap();
    let out = colorcode(
        &[
            "sweep",
            "--L",
            "12",
            "--p",
            "0,1",
            "--samples",
            "2",
            "--complex",
            "ten-7",
            "--seed",
            "4",
        ],
        Some(root.path()),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let dir = root.path().join("sweep-L12x12-seed4");
    let aggs = read_aggregates(&dir).unwrap();
    let ten: Vec<f64> = aggs
        .iter()
        .filter(|a| a.observable == "ten")
        .map(|a| a.mean)
        .collect();
    assert_eq!(ten, vec![2.0, 1.0]);
    assert_eq!(read_records(&dir).unwrap().len(), 2 * 2 * 2);
    assert_eq!(read_manifest(&dir).unwrap().seed, 4);
}

#[test]
fn exit_codes() {
    assert_eq!(
        colorcode(&["sweep", "--samples", "x"], None).status.code(),
        Some(2)
    );
    assert_eq!(
        colorcode(&["build-lattice", "--L", "7"], None)
            .status
            .code(),
        Some(1)
    );
    let out = colorcode(&["negativity", "--L", "12", "--complex", "ten-37"], None);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}
