//! End-to-end tests of the `equidist` binary: exit codes, file outputs,
//! and determinism of the emitted artifacts.

use std::path::Path;
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_equidist")
}

struct RunOutput {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run_config(dir: &Path, config_text: &str, extra: &[&str]) -> RunOutput {
    let cfg_path = dir.join("run.toml");
    std::fs::write(&cfg_path, config_text).unwrap();
    let out = Command::new(bin())
        .arg("--config")
        .arg(&cfg_path)
        .arg("--out")
        .arg(dir)
        .args(extra)
        .output()
        .unwrap();
    RunOutput {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

#[test]
fn missing_input_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let r = run_config(
        dir.path(),
        r#"
        command = "discrepancy"
        [input]
        file = "no_such_file.txt"
        "#,
        &[],
    );
    assert_eq!(r.code, 2, "stderr: {}", r.stderr);
}

#[test]
fn malformed_points_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.txt"), "circle 2\n0.5\nnot-a-number\n").unwrap();
    let r = run_config(
        dir.path(),
        r#"
        command = "discrepancy"
        [input]
        file = "bad.txt"
        "#
        .replace("bad.txt", dir.path().join("bad.txt").to_str().unwrap())
        .as_str(),
        &[],
    );
    assert_eq!(r.code, 2, "stderr: {}", r.stderr);
}

#[test]
fn unknown_config_key_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let r = run_config(
        dir.path(),
        r#"
        command = "energy"
        n_schedule = [64]
        not_a_real_key = true
        [input]
        kind = "lattice"
        [t_schedule]
        explicit = [0.01]
        "#,
        &[],
    );
    assert_eq!(r.code, 3, "stderr: {}", r.stderr);
}

#[test]
fn descending_profile_schedule_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let r = run_config(
        dir.path(),
        r#"
        command = "profile"
        n_schedule = [64]
        [input]
        kind = "lattice"
        [t_schedule]
        explicit = [0.1, 0.01]
        "#,
        &[],
    );
    assert_eq!(r.code, 3, "stderr: {}", r.stderr);
}

#[test]
fn spectral_below_feasible_time_exits_4_naming_the_cap() {
    let dir = tempfile::tempdir().unwrap();
    let r = run_config(
        dir.path(),
        r#"
        command = "energy"
        n_schedule = [64]
        method = "spectral"
        [input]
        kind = "lattice"
        [t_schedule]
        explicit = [1e-18]
        "#,
        &[],
    );
    assert_eq!(r.code, 4, "stderr: {}", r.stderr);
    assert!(r.stderr.contains("cap"), "stderr should name the cap: {}", r.stderr);
}

#[test]
fn sphere_input_for_circle_command_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let r = run_config(
        dir.path(),
        r#"
        command = "discrepancy"
        n_schedule = [32]
        [input]
        kind = "sphere_random"
        seed = 5
        "#,
        &[],
    );
    assert_eq!(r.code, 3, "stderr: {}", r.stderr);
}

#[test]
fn lattice_energy_at_saturating_time_writes_exact_unit_row() {
    let dir = tempfile::tempdir().unwrap();
    let r = run_config(
        dir.path(),
        r#"
        command = "energy"
        n_schedule = [100]
        method = "direct"
        [input]
        kind = "lattice"
        [t_schedule]
        explicit = [0.01]
        [output]
        csv = "energy.csv"
        "#,
        &[],
    );
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    let csv = std::fs::read_to_string(dir.path().join("energy.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "kind,n,t,method,value,excess,error_bound,wall_time_ns"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "lattice");
    assert_eq!(row[1], "100");
    assert_eq!(row[3], "direct");
    // At t = 0.01 the lattice energy is 1 + 2 sum_j exp(-4 pi^2 j^2 * 100),
    // which is 1.0 to double precision; the evaluation budget is 1e-12.
    let value: f64 = row[4].parse().unwrap();
    let excess: f64 = row[5].parse().unwrap();
    assert!((value - 1.0).abs() <= 1e-12, "value {value}");
    assert!(excess.abs() <= 1e-12, "excess {excess}");
}

#[test]
fn csv_goes_to_stdout_when_no_file_is_configured() {
    let dir = tempfile::tempdir().unwrap();
    let r = run_config(
        dir.path(),
        r#"
        command = "discrepancy"
        n_schedule = [8]
        [input]
        kind = "lattice"
        "#,
        &[],
    );
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    let mut lines = r.stdout.lines();
    assert_eq!(
        lines.next().unwrap(),
        "kind,n,t,method,value,excess,error_bound,wall_time_ns"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "lattice");
    assert_eq!(row[3], "arc");
    // Equally spaced dyadic N: discrepancy is exactly 1/N.
    assert_eq!(row[4], "1.2500000000000000e-1");
}

#[test]
fn bound_with_calibrated_constant_holds_on_kronecker() {
    let dir = tempfile::tempdir().unwrap();
    let r = run_config(
        dir.path(),
        r#"
        command = "bound"
        n_schedule = [1024]
        [input]
        kind = "kronecker"
        [output]
        csv = "bound.csv"
        json = "bound.json"
        "#,
        &[],
    );
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("bound.json")).unwrap())
            .unwrap();
    assert_eq!(summary["command"], "bound");
    assert_eq!(summary["c_source"], "calibrated");
    assert_eq!(summary["all_hold"], true);
    assert_eq!(summary["per_n"][0]["holds"], true);
}

#[test]
fn seed_flag_overrides_and_reproduces() {
    let dir = tempfile::tempdir().unwrap();
    let config = r#"
        command = "discrepancy"
        n_schedule = [128]
        [input]
        kind = "uniform_random"
        seed = 1
        [output]
        csv = "d.csv"
        "#;
    let r = run_config(dir.path(), config, &[]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    let from_config_seed = std::fs::read_to_string(dir.path().join("d.csv")).unwrap();

    let r = run_config(dir.path(), config, &["--seed", "1"]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    let same_seed = std::fs::read_to_string(dir.path().join("d.csv")).unwrap();

    let r = run_config(dir.path(), config, &["--seed", "2"]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    let other_seed = std::fs::read_to_string(dir.path().join("d.csv")).unwrap();

    let strip_times = |csv: &str| {
        csv.lines()
            .map(|l| l.rsplit_once(',').map(|(head, _)| head.to_string()).unwrap_or_default())
            .collect::<Vec<_>>()
    };
    assert_eq!(strip_times(&from_config_seed), strip_times(&same_seed));
    assert_ne!(strip_times(&from_config_seed), strip_times(&other_seed));
}

#[test]
fn sphere_energy_approaches_the_uniform_floor() {
    let dir = tempfile::tempdir().unwrap();
    let r = run_config(
        dir.path(),
        r#"
        command = "energy"
        n_schedule = [50]
        method = "direct"
        [input]
        kind = "sphere_fibonacci"
        [t_schedule]
        explicit = [0.5]
        [output]
        csv = "sphere.csv"
        "#,
        &[],
    );
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    let csv = std::fs::read_to_string(dir.path().join("sphere.csv")).unwrap();
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    let value: f64 = row[4].parse().unwrap();
    let floor = 1.0 / (4.0 * std::f64::consts::PI);
    assert!(value >= floor - 1e-9, "sphere energy {value} below floor {floor}");
    assert!((value - floor).abs() < 1e-2, "sphere energy {value} far from floor {floor}");
}

#[test]
fn report_rerun_is_byte_identical_and_thread_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let config = r#"
        command = "report"
        n_schedule = [64, 128]
        [input]
        kind = "kronecker"
        [output]
        json = "report.json"
        "#;
    let r = run_config(dir.path(), config, &[]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    let first = std::fs::read(dir.path().join("report.json")).unwrap();

    let r = run_config(dir.path(), config, &["--threads", "1"]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    let second = std::fs::read(dir.path().join("report.json")).unwrap();

    assert_eq!(first, second, "report bytes differ between runs");

    let doc: serde_json::Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(doc["kind"], "kronecker");
    assert_eq!(doc["verdicts"]["bound_all_hold"], true);
}
