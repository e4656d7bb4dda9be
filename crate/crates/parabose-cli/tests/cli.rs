//! End-to-end tests of the `parabose` binary: flag surface, CSV contracts,
//! exit codes and byte-determinism.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_parabose"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

/// Parses a named column out of CSV text.
fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().expect("header").split(',').collect();
    let idx = header
        .iter()
        .position(|h| *h == name)
        .unwrap_or_else(|| panic!("column {name} in {header:?}"));
    lines.map(|l| l.split(',').nth(idx).unwrap().to_string()).collect()
}

#[test]
fn wigner_canonical_is_gaussian() {
    let out = run(&["wigner", "--n", "0", "--a", "0.5", "--rmax", "4", "--points", "5"]);
    assert!(out.status.success());
    let csv = stdout(&out);
    let rs = column(&csv, "r");
    let ws = column(&csv, "W");
    assert_eq!(rs.len(), 5);
    for (r, w) in rs.iter().zip(&ws) {
        let r: f64 = r.parse().unwrap();
        let w: f64 = w.parse().unwrap();
        let expect = std::f64::consts::FRAC_1_PI * (-r * r).exp();
        assert!((w - expect).abs() <= 1e-14 * expect.abs().max(1.0));
    }
    for status in column(&csv, "status") {
        assert_eq!(status, "Exact");
    }
}

#[test]
fn wigner_ground_state_origin_value() {
    let out = run(&["wigner", "--n", "0", "--a", "3/2", "--rmax", "4", "--points", "9"]);
    assert!(out.status.success());
    let w0: f64 = column(&stdout(&out), "W")[0].parse().unwrap();
    assert!((w0 + std::f64::consts::FRAC_1_PI).abs() < 1e-14);
}

#[test]
fn wigner_formulas_agree() {
    let a29 = run(&["wigner", "--n", "1", "--a", "3/2", "--rmax", "3", "--points", "17", "--formula", "a29"]);
    let a31 = run(&["wigner", "--n", "1", "--a", "3/2", "--rmax", "3", "--points", "17", "--formula", "a31"]);
    let w29 = column(&stdout(&a29), "W");
    let w31 = column(&stdout(&a31), "W");
    for (x, y) in w29.iter().zip(&w31) {
        let x: f64 = x.parse().unwrap();
        let y: f64 = y.parse().unwrap();
        assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
    }
}

#[test]
fn wigner_cartesian_grid() {
    let out = run(&[
        "wigner", "--n", "2", "--a", "5/2", "--points", "3",
        "--p-range", "-1:1", "--q-range", "-1:1",
    ]);
    assert!(out.status.success());
    let csv = stdout(&out);
    assert_eq!(csv.lines().count(), 1 + 9);
    // rotational invariance visible in the output: W(p,q) touches only r
    let ws = column(&csv, "W");
    let corner: f64 = ws[0].parse().unwrap();
    let other: f64 = ws[8].parse().unwrap();
    assert_eq!(corner, other);
}

#[test]
fn guard_refusal_exit_code_and_opt_in() {
    let out = run(&["wigner", "--n", "2", "--a", "0.8", "--rmax", "1", "--points", "3"]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&[
        "wigner", "--n", "2", "--a", "0.8", "--rmax", "1", "--points", "3",
        "--allow-unguaranteed", "--tol", "1e-6", "--max-terms", "20000",
    ]);
    assert_eq!(out.status.code(), Some(0));
    for status in column(&stdout(&out), "status") {
        assert_eq!(status, "NotGuaranteed");
    }
    // the opt-in is recorded in the manifest (stderr in stdout mode)
    let manifest = String::from_utf8(out.stderr).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&manifest).expect("manifest json");
    assert_eq!(parsed["flags"]["allow_unguaranteed"], true);
}

#[test]
fn odd_states_converge_for_small_a() {
    // odd states converge for every a > 0; rel_tol 1e-8 keeps the stop rule
    // within the default term cap at the slowly decaying a_eff = 1.8
    let out = run(&[
        "wigner", "--n", "3", "--a", "0.8", "--rmax", "1", "--points", "2", "--tol", "1e-8",
    ]);
    assert_eq!(out.status.code(), Some(0));
    for status in column(&stdout(&out), "status") {
        assert_eq!(status, "Converged");
    }
}

#[test]
fn usage_errors_exit_2() {
    let out = run(&["wigner", "--n", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["wigner", "--n", "0", "--a", "-1", "--rmax", "1", "--points", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["matelem", "--n", "0", "--k", "1", "--a", "1.0", "--route", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_byte_deterministic() {
    let args = ["wigner", "--n", "4", "--a", "7/2", "--rmax", "4", "--points", "33"];
    let first = stdout(&run(&args));
    let second = stdout(&run(&args));
    assert_eq!(first, second);
    // and across worker counts
    let single = bin()
        .args(args)
        .env("RAYON_NUM_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(first, stdout(&single));
}

#[test]
fn matelem_routes_cross_check() {
    let mut values = Vec::new();
    for route in ["j", "s", "recurrence", "oracle"] {
        let out = run(&[
            "matelem", "--n", "1", "--k", "2", "--a", "2.5", "--t", "1", "--route", route,
        ]);
        assert!(out.status.success(), "route {route}");
        let v: f64 = column(&stdout(&out), "value_re")[0].parse().unwrap();
        values.push(v);
    }
    for v in &values[1..] {
        assert!((v - values[0]).abs() <= 1e-10 * values[0].abs());
    }
    // reference value: route s at n=0, k=2, a=1.3 gives (a)_2 = 2.99
    let out = run(&["matelem", "--n", "0", "--k", "2", "--a", "1.3", "--t", "1", "--route", "s"]);
    let v: f64 = column(&stdout(&out), "value_re")[0].parse().unwrap();
    assert!((v - 2.99).abs() < 1e-13);
}

#[test]
fn matelem_offdiagonal_routes() {
    let mut values = Vec::new();
    for route in ["closed", "recurrence", "oracle"] {
        let out = run(&[
            "matelem", "--n", "1", "--k", "2", "--l", "1", "--a", "3/2",
            "--lambda", "1.0", "--mu", "0.5", "--route", route,
        ]);
        assert!(out.status.success(), "route {route}");
        let csv = stdout(&out);
        let re: f64 = column(&csv, "value_re")[0].parse().unwrap();
        let im: f64 = column(&csv, "value_im")[0].parse().unwrap();
        values.push((re, im));
    }
    for (re, im) in &values[1..] {
        assert!((re - values[0].0).abs() <= 1e-10 * values[0].0.abs().max(1.0));
        assert!((im - values[0].1).abs() <= 1e-10 * values[0].1.abs().max(1.0));
    }
    // diagonal-only routes refuse l != 0
    let out = run(&["matelem", "--n", "1", "--k", "2", "--l", "1", "--a", "1.5", "--route", "s"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn wavefn_reference_point() {
    let out = run(&["wavefn", "--n", "0", "--a", "0.5", "--q", "0"]);
    assert!(out.status.success());
    let psi: f64 = column(&stdout(&out), "psi")[0].parse().unwrap();
    assert!((psi - std::f64::consts::PI.powf(-0.25)).abs() < 1e-14);
    // grid mode emits the requested number of rows
    let out = run(&["wavefn", "--n", "2", "--a", "1.5", "--q-max", "3", "--points", "7"]);
    assert_eq!(stdout(&out).lines().count(), 1 + 7);
}

#[test]
fn figures_emit_series_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "figures", "--which", "1",
        "--out-dir", dir.path().to_str().unwrap(),
        "--points", "81",
    ]);
    assert!(out.status.success());
    for name in [
        "figure1_a_1_2.csv",
        "figure1_a_3_2.csv",
        "figure1_a_5_2.csv",
        "figure1_a_7_2.csv",
        "figure1_manifest.json",
    ] {
        assert!(dir.path().join(name).exists(), "{name}");
    }
    // canonical series peaks at the origin
    let gauss = std::fs::read_to_string(dir.path().join("figure1_a_1_2.csv")).unwrap();
    let ws: Vec<f64> = column(&gauss, "W").iter().map(|w| w.parse().unwrap()).collect();
    let argmax = ws
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap()
        .0;
    assert_eq!(argmax, 0);
    // maximum radius strictly increases with a
    let peak_radius = |name: &str| -> usize {
        let csv = std::fs::read_to_string(dir.path().join(name)).unwrap();
        let ws: Vec<f64> = column(&csv, "W").iter().map(|w| w.parse().unwrap()).collect();
        ws.iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0
    };
    let r32 = peak_radius("figure1_a_3_2.csv");
    let r52 = peak_radius("figure1_a_5_2.csv");
    let r72 = peak_radius("figure1_a_7_2.csv");
    assert!(r32 < r52 && r52 < r72, "{r32} {r52} {r72}");

    let manifest: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("figure1_manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["command"], "figures");
    assert_eq!(manifest["series"].as_array().unwrap().len(), 4);
}

#[test]
fn figure2_even_odd_separation_at_origin() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "figures", "--which", "2",
        "--out-dir", dir.path().to_str().unwrap(),
        "--points", "41",
    ]);
    assert!(out.status.success());
    let origin_value = |n: u32| -> f64 {
        let csv =
            std::fs::read_to_string(dir.path().join(format!("figure2_n_{n}.csv"))).unwrap();
        column(&csv, "W")[0].parse().unwrap()
    };
    // even and odd states cluster at two separated origin values:
    // -1/pi for even n, -1/(3 pi) for odd n
    let fp = std::f64::consts::FRAC_1_PI;
    assert!((origin_value(0) + fp).abs() < 1e-12);
    assert!((origin_value(2) + fp).abs() < 1e-12);
    assert!((origin_value(1) + fp / 3.0).abs() < 1e-12);
    assert!((origin_value(3) + fp / 3.0).abs() < 1e-12);
    assert!(origin_value(0).abs() > 2.0 * origin_value(1).abs());
}

#[test]
fn verify_specfun_suite_passes() {
    let out = run(&["verify", "--suite", "specfun"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let checks = report["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["status"] == "pass"));
    assert!(checks.iter().any(|c| c["name"] == "chu_vandermonde_random"));
}

#[test]
fn verify_all_suites_pass_on_pristine_build() {
    let out = run(&["verify", "--suite", "all"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let checks = report["checks"].as_array().unwrap();
    assert!(checks.len() >= 25);
    assert!(checks.iter().all(|c| c["status"] == "pass"));
    for suite in ["specfun", "matelem", "wigner", "oracle"] {
        assert!(checks.iter().any(|c| c["suite"] == suite), "{suite} ran");
    }
}

#[test]
fn io_errors_exit_4() {
    let file = tempfile::NamedTempFile::new().unwrap();
    // out-dir collides with an existing file
    let out = run(&[
        "figures", "--which", "2",
        "--out-dir", file.path().to_str().unwrap(),
        "--points", "2",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn verify_matelem_suite_passes() {
    let out = run(&["verify", "--suite", "matelem"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let names: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"diag_J_equals_diag_S"));
}

#[test]
fn wigner_writes_file_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("w.csv");
    let out = run(&[
        "wigner", "--n", "0", "--a", "1/2", "--rmax", "1", "--points", "3",
        "--out", csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(csv_path.exists());
    let manifest_path = dir.path().join("w.csv.manifest.json");
    assert!(manifest_path.exists());
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&manifest_path).unwrap()).unwrap();
    assert_eq!(manifest["flags"]["n"], 0);
    assert_eq!(manifest["flags"]["allow_unguaranteed"], false);
    assert!(manifest["tolerances"]["rel_tol"].as_f64().unwrap() > 0.0);
    assert!(Path::new(manifest["flags"]["out"].as_str().unwrap()).ends_with("w.csv"));
}
