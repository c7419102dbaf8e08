//! End-to-end tests of the binary: exit codes, CSV artifacts, determinism.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_groverlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).expect("output file exists")
}

#[test]
fn verify_passes_for_small_n() {
    for n in ["16", "3"] {
        let out = run(&["verify", "--n", n]);
        assert!(out.status.success(), "verify --n {n} failed");
        let text = stdout(&out);
        assert!(text.contains("max eigenvalue deviation"));
        assert!(text.contains("PASS"));
    }
}

#[test]
fn verify_rejects_oversize_dense() {
    let out = run(&["verify", "--n", "4096"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("analytic"));
}

#[test]
fn rejects_undersize_dimension() {
    let out = run(&["analytic", "--n", "1", "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn curve_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a.csv");
    let second = dir.path().join("b.csv");
    let args = |path: &Path| {
        vec![
            "curve".to_string(),
            "--n".into(),
            "1048576".into(),
            "--t-max".into(),
            "3217".into(),
            "--dt".into(),
            "1".into(),
            "--out".into(),
            path.display().to_string(),
        ]
    };
    let out1 = Command::new(env!("CARGO_BIN_EXE_groverlab"))
        .args(args(&first))
        .output()
        .unwrap();
    assert!(out1.status.success());
    let out2 = Command::new(env!("CARGO_BIN_EXE_groverlab"))
        .args(args(&second))
        .output()
        .unwrap();
    assert!(out2.status.success());
    let bytes1 = std::fs::read(&first).unwrap();
    let bytes2 = std::fs::read(&second).unwrap();
    assert_eq!(
        bytes1, bytes2,
        "identical configs must give identical bytes"
    );

    let text = read(&first);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,lambda1,lambda2,entropy_bits,sup_norm,success_prob"
    );
    assert_eq!(text.lines().count(), 1 + 3218); // header + samples at t = 0..=3217
    assert!(!text.contains('\r'));
}

#[test]
fn curve_engines_agree_at_integer_times() {
    let dir = tempfile::tempdir().unwrap();
    let dense_path = dir.path().join("dense.csv");
    let analytic_path = dir.path().join("analytic.csv");
    let base = ["curve", "--n", "16", "--t-max", "7", "--dt", "1"];
    let run_engine = |engine: &str, path: &Path| {
        let out = Command::new(env!("CARGO_BIN_EXE_groverlab"))
            .args(base)
            .args(["--engine", engine, "--out", &path.display().to_string()])
            .output()
            .unwrap();
        assert!(out.status.success());
    };
    run_engine("dense", &dense_path);
    run_engine("analytic", &analytic_path);

    let parse = |text: String| -> Vec<Vec<f64>> {
        text.lines()
            .skip(1)
            .map(|line| line.split(',').map(|v| v.parse().unwrap()).collect())
            .collect()
    };
    let dense_rows = parse(read(&dense_path));
    let analytic_rows = parse(read(&analytic_path));
    assert_eq!(dense_rows.len(), analytic_rows.len());
    for (d, a) in dense_rows.iter().zip(&analytic_rows) {
        for col in 0..6 {
            assert!(
                (d[col] - a[col]).abs() < 1e-8,
                "column {col}: {} vs {}",
                d[col],
                a[col]
            );
        }
    }
}

#[test]
fn drift_emits_trajectories_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("drift.csv");
    let out = run(&[
        "drift",
        "--n",
        "16",
        "--grid",
        "8",
        "--out",
        &path.display().to_string(),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("bound 2*pi/sqrt(n)"));
    assert!(text.contains("empirical delta"));

    let csv = read(&path);
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "t,branch,lambda,dlambda_dt");
    // (3 steps * 8 points + 1) samples, 16 branches each
    assert_eq!(csv.lines().count() - 1, (3 * 8 + 1) * 16);
}

#[test]
fn drift_integer_delta_grid_independent() {
    let coarse = stdout(&run(&["drift", "--n", "8", "--grid", "2"]));
    let fine = stdout(&run(&["drift", "--n", "8", "--grid", "32"]));
    let pick = |text: &str| -> String {
        text.lines()
            .find(|l| l.starts_with("empirical delta"))
            .unwrap()
            .to_string()
    };
    assert_eq!(pick(&coarse), pick(&fine));
}

#[test]
fn bounds_formula_mode_reports_headline_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bounds.csv");
    let out = run(&[
        "bounds",
        "--n",
        "1048576",
        "--pe",
        "0",
        "--out",
        &path.display().to_string(),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("179.272128"));
    assert!(text.contains("146.677196"));
    assert!(text.contains("grover steps  804"));
    let csv = read(&path);
    assert!(csv.starts_with("p_e,k_lower_printed_form,k_lower_derived_form,grover_k"));
}

#[test]
fn bounds_sweep_writes_all_truncations() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = run(&["bounds", "--n", "16", "--out", &path.display().to_string()]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = read(&path);
    let lines: Vec<&str> = csv.lines().collect();
    assert!(lines[0].starts_with("K,p_e,entropy_final_bits"));
    assert_eq!(lines.len(), 1 + 4); // header + K = 0..=3
                                    // final row carries the exact n=16 error probability
    assert!(lines[4].contains("3.8681030273437"));
}

#[test]
fn bounds_rejects_bad_error_probability() {
    let out = run(&["bounds", "--n", "16", "--pe", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_n4_exact_row() {
    let out = run(&["simulate", "--n", "4", "--k", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let last = text.lines().last().unwrap();
    let fields: Vec<&str> = last.split(',').collect();
    assert_eq!(fields[0], "1");
    assert_eq!(fields[1], "1.0000000000000000e0");
    assert_eq!(fields[2], "0.0000000000000000e0");
}

#[test]
fn unwritable_output_path_is_io_error() {
    let out = run(&[
        "analytic",
        "--n",
        "4",
        "--k",
        "1",
        "--out",
        "/nonexistent-dir/x.csv",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn usage_error_exits_two() {
    let out = run(&["curve", "--n", "16"]); // missing required --t-max
    assert_eq!(out.status.code(), Some(2));
}
