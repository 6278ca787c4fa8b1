//! End-to-end checks of the command-line interface: flag handling, file
//! formats, exit codes, and byte determinism.

use curveflow::io::write_curve_csv;
use curveflow::reference::{make_reference, ReferenceKind};
use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_curveflow")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("curveflow_cli_{name}"));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_file(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn soliton_command_writes_deterministic_outputs() {
    let dir = scratch("soliton");
    let csv_a = dir.join("a.csv");
    let json_a = dir.join("a.json");
    let out = run(&[
        "soliton",
        "--p",
        "1",
        "--b",
        "0",
        "--d",
        "1",
        "--half-span",
        "8",
        "--out-csv",
        csv_a.to_str().unwrap(),
        "--out-json",
        json_a.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let meta = json_file(&json_a);
    assert_eq!(meta["mode"], "power");
    assert_eq!(meta["lambda"].as_f64().unwrap(), 0.0);
    assert_eq!(meta["a"].as_f64().unwrap(), 1.0);
    assert!(meta["residuals"]["soliton_residual_max"].as_f64().unwrap() < 1e-7);
    assert!(meta["residuals"]["first_integral_drift"].as_f64().unwrap() < 1e-8);

    // identical flags must reproduce identical bytes
    let csv_b = dir.join("b.csv");
    let json_b = dir.join("b.json");
    let out = run(&[
        "soliton",
        "--p",
        "1",
        "--b",
        "0",
        "--d",
        "1",
        "--half-span",
        "8",
        "--out-csv",
        csv_b.to_str().unwrap(),
        "--out-json",
        json_b.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(
        std::fs::read(&csv_a).unwrap(),
        std::fs::read(&csv_b).unwrap()
    );
    let a = std::fs::read(&json_a).unwrap();
    let b = std::fs::read(&json_b).unwrap();
    assert_eq!(String::from_utf8_lossy(&a), String::from_utf8_lossy(&b));

    let header = std::fs::read_to_string(&csv_a).unwrap();
    assert!(header.starts_with("s,x,y,kappa\n"));
}

#[test]
fn soliton_log_mode_uses_shifted_lambda() {
    let dir = scratch("soliton_log");
    let out = run(&[
        "soliton",
        "--log",
        "--b",
        "0",
        "--d",
        "1",
        "--half-span",
        "4",
        "--out-csv",
        dir.join("log.csv").to_str().unwrap(),
        "--out-json",
        dir.join("log.json").to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let meta = json_file(&dir.join("log.json"));
    assert_eq!(meta["mode"], "log");
    assert_eq!(meta["lambda"].as_f64().unwrap(), 1.0);
    assert!(meta["residuals"]["soliton_residual_max"].as_f64().unwrap() < 1e-6);
}

#[test]
fn degenerate_length_functional_exits_2() {
    let dir = scratch("degenerate");
    let out = run(&[
        "soliton",
        "--p",
        "0",
        "--b",
        "1",
        "--out-csv",
        dir.join("x.csv").to_str().unwrap(),
        "--out-json",
        dir.join("x.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("length functional"), "stderr: {stderr}");
}

#[test]
fn flow_on_circle_reports_non_translating_and_radius_law() {
    let dir = scratch("flow_circle");
    let input = dir.join("circle.csv");
    let circle = make_reference(ReferenceKind::Circle { radius: 1.0 }, 256)
        .unwrap()
        .curve;
    write_curve_csv(&input, &circle).unwrap();

    let out_dir = dir.join("run");
    let out = run(&[
        "flow",
        "--input",
        input.to_str().unwrap(),
        "--p",
        "1",
        "--a",
        "1",
        "--t-end",
        "0.4",
        "--snapshots",
        "5",
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("non-translating"), "stdout: {stdout}");

    let report = json_file(&out_dir.join("trajectory.json"));
    assert_eq!(report["times"].as_array().unwrap().len(), 5);
    assert!(report["fit"]["shape_residual"].as_f64().unwrap() > 0.1);

    // final snapshot obeys R(t) = sqrt(1 - 2t) within 1%
    let last = report["snapshots"].as_array().unwrap().last().unwrap();
    let csv = std::fs::read_to_string(out_dir.join(last.as_str().unwrap())).unwrap();
    let mut r_sum = 0.0;
    let mut count = 0usize;
    for line in csv.lines().skip(1) {
        let f: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        r_sum += (f[1] * f[1] + f[2] * f[2]).sqrt();
        count += 1;
    }
    let r_mean = r_sum / count as f64;
    let exact = (1.0f64 - 0.8).sqrt();
    assert!(
        (r_mean - exact).abs() / exact < 0.01,
        "R {r_mean} vs {exact}"
    );
}

#[test]
fn flow_on_line_is_stationary() {
    let dir = scratch("flow_line");
    let input = dir.join("line.csv");
    let line = make_reference(ReferenceKind::Line { span: 2.0 }, 64)
        .unwrap()
        .curve;
    write_curve_csv(&input, &line).unwrap();
    let out_dir = dir.join("run");
    let out = run(&[
        "flow",
        "--input",
        input.to_str().unwrap(),
        "--p",
        "2",
        "--a",
        "1",
        "--t-end",
        "0.3",
        "--snapshots",
        "3",
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    // the evolved snapshots rebase arc length at zero, so compare geometry
    let positions = |path: PathBuf| -> Vec<(f64, f64)> {
        std::fs::read_to_string(path)
            .unwrap()
            .lines()
            .skip(1)
            .map(|l| {
                let f: Vec<f64> = l.split(',').map(|v| v.parse().unwrap()).collect();
                (f[1], f[2])
            })
            .collect()
    };
    let first = positions(out_dir.join("snapshot_000.csv"));
    let last = positions(out_dir.join("snapshot_002.csv"));
    assert_eq!(first, last, "a straight line must not move");
}

#[test]
fn flow_refuses_nonconvex_input_for_fractional_power() {
    let dir = scratch("flow_domain");
    let input = dir.join("line.csv");
    let line = make_reference(ReferenceKind::Line { span: 2.0 }, 64)
        .unwrap()
        .curve;
    write_curve_csv(&input, &line).unwrap();
    let out = run(&[
        "flow",
        "--input",
        input.to_str().unwrap(),
        "--p",
        "0.5",
        "--a",
        "1",
        "--t-end",
        "0.1",
        "--out-dir",
        dir.join("run").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_accepts_catenary_and_rejects_circle() {
    let dir = scratch("verify");

    let catenary = make_reference(
        ReferenceKind::Catenary {
            scale: 1.0,
            span: 3.0,
        },
        2001,
    )
    .unwrap()
    .curve;
    let cat_csv = dir.join("catenary.csv");
    write_curve_csv(&cat_csv, &catenary).unwrap();
    let report_path = dir.join("catenary_report.json");
    let out = run(&[
        "verify",
        "--input",
        cat_csv.to_str().unwrap(),
        "--p",
        "0.5",
        "--b",
        "0",
        "--out-json",
        report_path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = json_file(&report_path);
    assert_eq!(report["verdict"], "PASS", "report: {report}");
    let d_est = report["d_estimate"].as_f64().unwrap();
    assert!((d_est - 0.25).abs() < 1e-3, "d estimate {d_est}");

    let cycloid = make_reference(ReferenceKind::Cycloid { r: 1.0, span: 3.2 }, 1201)
        .unwrap()
        .curve;
    let cyc_csv = dir.join("cycloid.csv");
    write_curve_csv(&cyc_csv, &cycloid).unwrap();
    let out = run(&[
        "verify",
        "--input",
        cyc_csv.to_str().unwrap(),
        "--p",
        "-1",
        "--b",
        "0",
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("\"verdict\": \"PASS\""), "stdout: {stdout}");

    let circle = make_reference(ReferenceKind::Circle { radius: 1.0 }, 512)
        .unwrap()
        .curve;
    let circle_csv = dir.join("circle.csv");
    write_curve_csv(&circle_csv, &circle).unwrap();
    let out = run(&[
        "verify",
        "--input",
        circle_csv.to_str().unwrap(),
        "--p",
        "1",
        "--b",
        "0",
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("\"verdict\": \"FAIL\""), "stdout: {stdout}");
}

#[test]
fn figure_sweep_exits_cleanly() {
    let dir = scratch("figs");
    let out = run(&["figure1", "--out-dir", dir.to_str().unwrap()]);
    assert!(out.status.success());
    for name in [
        "figure1_lambda_-0.5.svg",
        "figure1_lambda_0.svg",
        "figure1_lambda_1.svg",
        "figure1_lambda_1.8.svg",
    ] {
        let svg = std::fs::read_to_string(dir.join(name)).unwrap();
        assert!(svg.contains("<desc>"), "{name} carries its parameters");
        assert!(svg.contains("entropy energy"));
    }
}
