//! Black-box checks of the command-line interface: determinism, file
//! formats, and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fbm-spectral"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("process runs")
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("fbm-spectral-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn simulate_is_byte_deterministic() {
    let args = [
        "simulate", "--hurst", "0.7", "--order", "32", "--paths", "3", "--grid", "50",
        "--seed", "42",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("# fbm-spectral"));
    assert!(text.contains("hurst=0.7"));
    assert!(text.contains("mode=strong"));
    // 3 comment lines + 50 data rows, newline endings only
    assert_eq!(text.lines().count(), 53);
    assert!(!text.contains('\r'));
    let first_data = text.lines().nth(3).unwrap();
    assert_eq!(first_data.split(',').count(), 4);
}

#[test]
fn strong_and_weak_paths_differ() {
    let base = [
        "simulate", "--hurst", "0.5", "--order", "16", "--grid", "20", "--seed", "7",
    ];
    let strong = run(&[&base[..], &["--mode", "strong"]].concat());
    let weak = run(&[&base[..], &["--mode", "weak"]].concat());
    assert!(strong.status.success() && weak.status.success());
    assert_ne!(strong.stdout, weak.stdout);
}

#[test]
fn half_hurst_kernel_dump_equals_integration_dump() {
    let kernel = tmp("kernel_half.csv");
    let integration = tmp("int_left_one.csv");
    let a = run(&[
        "operator", "kernel:0.5", "--order", "8",
        "--out", kernel.to_str().unwrap(),
    ]);
    let b = run(&[
        "operator", "int-left:1", "--order", "8",
        "--out", integration.to_str().unwrap(),
    ]);
    assert!(a.status.success() && b.status.success());
    let ka = std::fs::read(&kernel).unwrap();
    let kb = std::fs::read(&integration).unwrap();
    assert!(!ka.is_empty());
    assert_eq!(ka, kb);
}

#[test]
fn operator_dump_values() {
    let out = run(&["operator", "inversion", "--order", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 4);
    let first: Vec<&str> = rows[0].split(',').collect();
    assert_eq!(first[0], "1.0000000000000000e0");
    assert_eq!(first[1], "0.0000000000000000e0");
    let second: Vec<&str> = rows[1].split(',').collect();
    assert_eq!(second[1], "-1.0000000000000000e0");
}

#[test]
fn reference_check_passes() {
    let out = run(&[
        "errors", "--hurst", "0.1:0.9:0.1", "--orders", "4,8,16,32,64",
        "--paper-check",
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    // 9 Hurst values × 5 orders plus three comment lines
    assert_eq!(text.lines().count(), 3 + 45);
    assert!(text.contains("# columns: hurst,order,eps,eps1,eps2,rate"));
}

#[test]
fn errors_single_cell_value() {
    let out = run(&["errors", "--hurst", "0.5", "--orders", "64"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let data = text.lines().find(|l| !l.starts_with('#')).unwrap();
    let fields: Vec<&str> = data.split(',').collect();
    assert_eq!(fields[0], "0.5");
    assert_eq!(fields[1], "64");
    let eps: f64 = fields[2].parse().unwrap();
    assert!((eps - 0.000175).abs() < 1.5e-6);
    // fewer than three orders: no rate estimate
    assert_eq!(fields[5], "");
}

#[test]
fn json_and_csv_encode_identical_numbers() {
    let csv = run(&[
        "simulate", "--hurst", "0.3", "--order", "8", "--grid", "5", "--seed", "1",
    ]);
    let json = run(&[
        "simulate", "--hurst", "0.3", "--order", "8", "--grid", "5", "--seed", "1",
        "--format", "json",
    ]);
    assert!(csv.status.success() && json.status.success());
    let doc: serde_json::Value =
        serde_json::from_slice(&json.stdout).expect("valid JSON document");
    assert!(doc.get("meta").is_some() && doc.get("data").is_some());
    let paths = doc["data"]["paths"].as_array().unwrap();
    assert_eq!(paths.len(), 1);
    let from_json = paths[0][2].as_f64().unwrap();
    let text = String::from_utf8(csv.stdout).unwrap();
    let row = text.lines().filter(|l| !l.starts_with('#')).nth(2).unwrap();
    let from_csv: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    assert_eq!(from_json, from_csv);
}

#[test]
fn basis_sampling_values() {
    let out = run(&["basis", "--order", "2", "--horizon", "1", "--grid", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<f64>> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 3);
    let r3 = 3f64.sqrt();
    for (row, (t, p1)) in rows.iter().zip([(0.0, -r3), (0.5, 0.0), (1.0, r3)]) {
        assert!((row[0] - t).abs() < 1e-15);
        assert!((row[1] - 1.0).abs() < 1e-15);
        assert!((row[2] - p1).abs() < 1e-15);
    }
}

#[test]
fn usage_errors_exit_with_two() {
    let unknown_operator = run(&["operator", "sqrt:2", "--order", "4"]);
    assert_eq!(unknown_operator.status.code(), Some(2));

    let tiny_grid = run(&["basis", "--order", "2", "--grid", "0"]);
    assert_eq!(tiny_grid.status.code(), Some(2));

    let empty_orders = run(&["errors", "--hurst", "0.5", "--orders", ""]);
    assert_eq!(empty_orders.status.code(), Some(2));

    let bad_hurst_range = run(&["errors", "--hurst", "0.9:0.1:0.1", "--orders", "4"]);
    assert_eq!(bad_hurst_range.status.code(), Some(2));
}

#[test]
fn invalid_parameters_fail() {
    let bad_hurst = run(&["simulate", "--hurst", "1.5", "--grid", "5"]);
    assert!(!bad_hurst.status.success());

    let off_grid_reference = run(&[
        "errors", "--hurst", "0.55", "--orders", "4", "--paper-check",
    ]);
    assert_eq!(off_grid_reference.status.code(), Some(2));
}

#[test]
fn thread_cap_env_is_honored() {
    let out = bin()
        .args(["errors", "--hurst", "0.5", "--orders", "4,8"])
        .env("FBM_SPECTRAL_THREADS", "1")
        .output()
        .unwrap();
    assert!(out.status.success());

    let auto = bin()
        .args(["errors", "--hurst", "0.5", "--orders", "4,8"])
        .env("FBM_SPECTRAL_THREADS", "0")
        .output()
        .unwrap();
    assert!(auto.status.success());
    assert_eq!(out.stdout, auto.stdout);

    let bad = bin()
        .args(["errors", "--hurst", "0.5", "--orders", "4"])
        .env("FBM_SPECTRAL_THREADS", "lots")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn hurst_range_parsing_is_inclusive() {
    let out = run(&["errors", "--hurst", "0.2:0.4:0.1", "--orders", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let hs: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(hs, vec!["0.2", "0.30000000000000004", "0.4"]);
}
