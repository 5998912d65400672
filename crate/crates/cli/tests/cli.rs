//! End-to-end tests of the binary: output shapes, determinism, exit codes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kappa-count"))
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn count_jacobi_known_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "two_wells.json",
        r#"{"kind":"delta","points":[0,1],"strengths":[-3,-3]}"#,
    );
    let out = run(&["count", cfg.to_str().unwrap(), "--method", "jacobi"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("\"kappa_minus\":2"), "{text}");
    assert!(text.contains("\"method\":\"jacobi_inertia\""), "{text}");
    assert!(text.contains("\"schema\":1"), "{text}");
}

#[test]
fn count_strengths_delta_prime() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "dp.json",
        r#"{"kind":"delta_prime","points":[0,1,2],"strengths":[-1,0.5,-2]}"#,
    );
    let out = run(&["count", cfg.to_str().unwrap(), "--method", "strengths"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("\"kappa_minus\":2"));
}

#[test]
fn count_missing_file_exits_2() {
    let out = run(&["count", "/nonexistent/config.json", "--method", "jacobi"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn count_invalid_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "bad.json",
        r#"{"kind":"delta","points":[1,0],"strengths":[1,1]}"#,
    );
    let out = run(&["count", cfg.to_str().unwrap(), "--method", "jacobi"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("points"), "{err}");
}

#[test]
fn count_wrong_method_for_kind_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "d.json",
        r#"{"kind":"delta","points":[0],"strengths":[-2]}"#,
    );
    let out = run(&["count", cfg.to_str().unwrap(), "--method", "strengths"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_agreement_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "three.json",
        r#"{"kind":"delta","points":[0,1,2],"strengths":[-1,5,-1]}"#,
    );
    let first = run(&["verify", cfg.to_str().unwrap(), "--oracle"]);
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    let text = stdout(&first);
    assert!(text.contains("\"agreement\":true"), "{text}");
    assert!(text.contains("\"total\":1"), "{text}");
    assert!(text.contains("ZeroInSequence"), "{text}");
    assert!(!text.contains("timings"), "default output must omit timings: {text}");

    let second = run(&["verify", cfg.to_str().unwrap(), "--oracle"]);
    assert_eq!(first.stdout, second.stdout, "verify output must be byte-identical");
}

#[test]
fn verify_delta_prime_rational() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "dpq.json",
        r#"{"kind":"delta_prime","scalar":"rational","points":[0,1,2],"strengths":["-1","1/2","-2"]}"#,
    );
    let out = run(&["verify", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("\"agreement\":true"), "{text}");
    assert!(text.contains("\"total\":2"), "{text}");
}

#[test]
fn sweep_two_steps_two_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "s.json",
        r#"{"kind":"delta","points":[0,1,2],"strengths":[1,-1,1]}"#,
    );
    let out_path = dir.path().join("sweep.csv");
    let out = run(&[
        "sweep",
        cfg.to_str().unwrap(),
        "--param",
        "strengths[1]",
        "--from",
        "-6",
        "--to",
        "0",
        "--steps",
        "2",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(&out_path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 3, "header plus two rows: {csv}");
    assert_eq!(lines[0], "param_value,kappa_recurrence,kappa_jacobi,gerschgorin_lower_bound");
    // alpha_2 = -6 < -2(1+1): one certified negative square; at 0 none
    assert!(lines[1].starts_with("-6.0000000000000000e0,1,1,1"), "{csv}");
    assert!(lines[2].ends_with(",0,0,0"), "{csv}");
}

#[test]
fn sweep_delta_prime_flips_at_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "dp_sweep.json",
        r#"{"kind":"delta_prime","points":[0,1],"strengths":[1,1]}"#,
    );
    let out = run(&[
        "sweep",
        cfg.to_str().unwrap(),
        "--param",
        "strengths[0]",
        "--from",
        "-1",
        "--to",
        "1",
        "--steps",
        "5",
    ]);
    assert!(out.status.success());
    let csv = stdout(&out);
    let counts: Vec<&str> = csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(counts, vec!["1", "1", "0", "0", "0"], "{csv}");
}

#[test]
fn sweep_bad_param_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "s.json",
        r#"{"kind":"delta","points":[0,1],"strengths":[1,1]}"#,
    );
    for param in ["points[0]", "strengths[7]", "strengths"] {
        let out = run(&[
            "sweep", cfg.to_str().unwrap(), "--param", param,
            "--from", "0", "--to", "1", "--steps", "2",
        ]);
        assert_eq!(out.status.code(), Some(2), "param {param}");
    }
}

#[test]
fn oracle_subcommand_reports_roots() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "one.json",
        r#"{"kind":"delta","points":[0],"strengths":[-2]}"#,
    );
    let out = run(&["oracle", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("\"kappa_minus\":1"), "{text}");
    assert!(text.contains("root kappa"), "{text}");
}

#[test]
fn oracle_surfaces_unresolvable_degeneracy_as_exit_3() {
    // two identical wells far apart: the pair splitting (~e^-40 in kappa)
    // is below what float secular values can resolve, so the scan must
    // refuse rather than undercount
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "sym.json",
        r#"{"kind":"delta","points":[0,12],"strengths":[-8,-8]}"#,
    );
    let out = run(&["oracle", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("did not settle"), "{err}");
}

#[test]
fn epsilon_env_override() {
    let dir = tempfile::tempdir().unwrap();
    // gamma_1 = -1 + 1 = 0 only when the tolerance absorbs the 1e-9 offset
    let cfg = write_config(
        dir.path(),
        "eps.json",
        r#"{"kind":"delta","points":[0,1],"strengths":[-1.000000001,5]}"#,
    );
    let strict = bin()
        .args(["count", cfg.to_str().unwrap(), "--method", "recurrence"])
        .env(EPSILON, "1e-15")
        .output()
        .unwrap();
    let loose = bin()
        .args(["count", cfg.to_str().unwrap(), "--method", "recurrence"])
        .env(EPSILON, "1e-6")
        .output()
        .unwrap();
    let strict_text = stdout(&strict);
    let loose_text = stdout(&loose);
    assert!(strict_text.contains("\"n_infinity\":0"), "{strict_text}");
    assert!(loose_text.contains("\"n_infinity\":1"), "{loose_text}");
}

const EPSILON: &str = "KAPPA_COUNT_EPSILON";
