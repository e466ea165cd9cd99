//! End-to-end checks of the binary: flag validation, CSV schema and
//! byte-level reproducibility, atomic output, truncation reporting, and the
//! oracle subcommand.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fqa() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fqa"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("fqa_cli_tests").join(name);
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_triangle(dir: &Path) -> PathBuf {
    let path = dir.join("k3.edges");
    fs::write(&path, "3\n0 1 1.0\n1 2 1.0\n0 2 1.0\n").unwrap();
    path
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

#[test]
fn run_writes_csv_and_summary() {
    let dir = scratch("run_basic");
    let graph = write_triangle(&dir);
    let out = dir.join("t.csv");
    let status = fqa()
        .args([
            "run",
            "--problem",
            "maxcut",
            "--dt",
            "0.01",
            "--layers",
            "40",
        ])
        .arg("--graph")
        .arg(&graph)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());

    let csv = fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "layer,beta,A,J,fdot,success_prob");
    assert_eq!(lines.count(), 40);

    let summary = fs::read_to_string(dir.join("t.csv.summary")).unwrap();
    assert!(summary.contains("status=ok"));
    assert!(summary.contains("layers_recorded=40"));
    assert!(summary.contains("max_cut=2"));
    assert!(summary.contains("ground_energy=-2"));
    // no leftover temp files
    assert!(!dir.join("t.csv.tmp").exists());
}

#[test]
fn reruns_reproduce_csv_byte_for_byte() {
    let dir = scratch("rerun");
    let args = [
        "run",
        "--problem",
        "maxcut",
        "--generate-regular",
        "8",
        "--seed",
        "3",
        "--dt",
        "0.02",
        "--layers",
        "60",
        "--rescale",
        "sine",
        "--a",
        "2",
        "--tf",
        "4",
    ];
    let first = dir.join("a.csv");
    let second = dir.join("b.csv");
    for out in [&first, &second] {
        let status = fqa().args(args).arg("--out").arg(out).status().unwrap();
        assert!(status.success());
    }
    assert_eq!(fs::read(&first).unwrap(), fs::read(&second).unwrap());
}

#[test]
fn rejects_non_positive_contraction() {
    let dir = scratch("bad_a");
    let graph = write_triangle(&dir);
    let output = fqa()
        .args([
            "run",
            "--problem",
            "maxcut",
            "--dt",
            "0.04",
            "--layers",
            "10",
        ])
        .arg("--graph")
        .arg(&graph)
        .args(["--rescale", "sine", "--a", "0", "--tf", "16", "--out"])
        .arg(dir.join("x.csv"))
        .output()
        .unwrap();
    assert!(!output.status.success());
    assert!(stderr_of(&output).contains("--a must be positive"));
}

#[test]
fn rescale_flags_are_mutually_required() {
    let dir = scratch("missing_tf");
    let graph = write_triangle(&dir);
    let output = fqa()
        .args([
            "run",
            "--problem",
            "maxcut",
            "--dt",
            "0.04",
            "--layers",
            "10",
        ])
        .arg("--graph")
        .arg(&graph)
        .args(["--rescale", "sine", "--a", "2", "--out"])
        .arg(dir.join("x.csv"))
        .output()
        .unwrap();
    assert!(!output.status.success());
    assert!(stderr_of(&output).contains("--tf"));
}

#[test]
fn problem_flags_are_cross_checked() {
    let dir = scratch("cross_flags");
    let graph = write_triangle(&dir);
    let output = fqa()
        .args([
            "run",
            "--problem",
            "annni",
            "--dt",
            "0.01",
            "--layers",
            "10",
        ])
        .arg("--graph")
        .arg(&graph)
        .arg("--out")
        .arg(dir.join("x.csv"))
        .output()
        .unwrap();
    assert!(!output.status.success());
    assert!(stderr_of(&output).contains("--problem maxcut"));

    let output = fqa()
        .args([
            "run",
            "--problem",
            "annni",
            "--L",
            "8",
            "--kappa",
            "0.5",
            "--dt",
            "0.01",
            "--layers",
            "10",
        ])
        .arg("--out")
        .arg(dir.join("x.csv"))
        .output()
        .unwrap();
    assert!(!output.status.success());
    assert!(stderr_of(&output).contains("--g"));
}

#[test]
fn unwritable_output_leaves_nothing_behind() {
    let dir = scratch("unwritable");
    let graph = write_triangle(&dir);
    let missing = dir.join("no_such_dir").join("x.csv");
    let output = fqa()
        .args([
            "run",
            "--problem",
            "maxcut",
            "--dt",
            "0.04",
            "--layers",
            "5",
        ])
        .arg("--graph")
        .arg(&graph)
        .arg("--out")
        .arg(&missing)
        .output()
        .unwrap();
    assert!(!output.status.success());
    assert!(!missing.exists());
}

#[test]
fn malformed_graph_reports_line_number() {
    let dir = scratch("bad_graph");
    let path = dir.join("bad.edges");
    fs::write(&path, "2\n0 2 1.0\n").unwrap();
    let output = fqa()
        .args([
            "run",
            "--problem",
            "maxcut",
            "--dt",
            "0.04",
            "--layers",
            "5",
        ])
        .arg("--graph")
        .arg(&path)
        .arg("--out")
        .arg(dir.join("x.csv"))
        .output()
        .unwrap();
    assert!(!output.status.success());
    let stderr = stderr_of(&output);
    assert!(stderr.contains("line 2"), "stderr was: {stderr}");
}

#[test]
fn truncated_run_keeps_partial_rows_and_flags_summary() {
    // polynomial rescaling past its horizon drives fdot to the guard
    let dir = scratch("truncated");
    let graph = write_triangle(&dir);
    let out = dir.join("t.csv");
    let status = fqa()
        .args([
            "run",
            "--problem",
            "maxcut",
            "--dt",
            "0.04",
            "--layers",
            "400",
        ])
        .arg("--graph")
        .arg(&graph)
        .args(["--rescale", "poly", "--a", "2", "--tf", "8", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let rows = fs::read_to_string(&out).unwrap().lines().count() - 1;
    assert!(rows < 400, "expected truncation, got {rows} rows");
    let summary = fs::read_to_string(dir.join("t.csv.summary")).unwrap();
    assert!(summary.contains("status=truncated"));
    assert!(summary.contains("vanishing_derivative"));
    assert!(summary.contains(&format!("layers_recorded={rows}")));
}

#[test]
fn sweep_writes_one_csv_per_entry() {
    let dir = scratch("sweep");
    let graph = write_triangle(&dir);
    let stem = dir.join("s");
    let status = fqa()
        .args([
            "sweep",
            "--problem",
            "maxcut",
            "--dt",
            "0.04",
            "--layers",
            "30",
        ])
        .arg("--graph")
        .arg(&graph)
        .args([
            "--rescale",
            "identity,sine",
            "--a",
            "1.5,2",
            "--tf",
            "8",
            "--jobs",
            "2",
            "--out",
        ])
        .arg(&stem)
        .status()
        .unwrap();
    assert!(status.success());
    for label in ["identity", "sine_a1.5", "sine_a2"] {
        let csv = dir.join(format!("s_{label}.csv"));
        assert!(csv.exists(), "missing {}", csv.display());
        assert!(dir.join(format!("s_{label}.csv.summary")).exists());
        let rows = fs::read_to_string(&csv).unwrap().lines().count() - 1;
        assert_eq!(rows, 30);
    }
}

#[test]
fn oracle_reports_triangle_cuts() {
    let dir = scratch("oracle");
    let graph = write_triangle(&dir);
    let output = fqa()
        .args(["oracle", "--problem", "maxcut"])
        .arg("--graph")
        .arg(&graph)
        .output()
        .unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("max_cut=2"));
    assert!(stdout.contains("solutions=6"));

    let output = fqa()
        .args([
            "oracle",
            "--problem",
            "annni",
            "--L",
            "4",
            "--kappa",
            "0",
            "--g",
            "0",
        ])
        .output()
        .unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("ground_energy=-4"), "stdout: {stdout}");
}
