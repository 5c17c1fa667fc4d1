//! Black-box tests of the `qbrach` binary: exit codes, file formats, and
//! the documented report fields.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn qbrach() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qbrach"))
}

fn write_state(dir: &Path, name: &str, re: &[f64], im: &[f64]) -> PathBuf {
    let path = dir.join(name);
    let doc = serde_json::json!({"dim": re.len(), "re": re, "im": im});
    fs::write(&path, doc.to_string()).unwrap();
    path
}

fn stdout_json(output: &Output) -> Value {
    assert!(
        output.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout is a JSON document")
}

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[test]
fn distance_reports_radians_and_degrees() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write_state(dir.path(), "zero.json", &[1.0, 0.0], &[0.0, 0.0]);
    let plus = write_state(
        dir.path(),
        "plus.json",
        &[SQRT_HALF, SQRT_HALF],
        &[0.0, 0.0],
    );
    let out = qbrach()
        .arg("distance")
        .arg(&zero)
        .arg(&plus)
        .output()
        .unwrap();
    let v = stdout_json(&out);
    assert!((v["theta_rad"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    assert!((v["theta_deg"].as_f64().unwrap() - 90.0).abs() < 1e-10);
}

#[test]
fn distance_of_a_state_from_itself_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write_state(dir.path(), "zero.json", &[1.0, 0.0], &[0.0, 0.0]);
    let out = qbrach()
        .arg("distance")
        .arg(&zero)
        .arg(&zero)
        .output()
        .unwrap();
    let v = stdout_json(&out);
    assert!(v["theta_rad"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn solve_emits_the_rotation_generator_for_a_flip() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write_state(dir.path(), "zero.json", &[1.0, 0.0], &[0.0, 0.0]);
    let one = write_state(dir.path(), "one.json", &[0.0, 1.0], &[0.0, 0.0]);
    let out = qbrach().arg("solve").arg(&zero).arg(&one).output().unwrap();
    let v = stdout_json(&out);

    assert!((v["tau"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    assert!((v["theta"].as_f64().unwrap() - std::f64::consts::PI).abs() < 1e-12);
    assert_eq!(v["convention"], "eq8");

    let im = v["hamiltonian"]["im"].as_array().unwrap();
    let re = v["hamiltonian"]["re"].as_array().unwrap();
    for i in 0..2 {
        for j in 0..2 {
            assert!(re[i][j].as_f64().unwrap().abs() < 1e-12);
        }
    }
    assert!((im[0][1].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((im[1][0].as_f64().unwrap() + 1.0).abs() < 1e-12);
    assert!(im[0][0].as_f64().unwrap().abs() < 1e-12);
    assert!(im[1][1].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn solve_reports_the_equatorial_times_in_both_conventions() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write_state(dir.path(), "zero.json", &[1.0, 0.0], &[0.0, 0.0]);
    let plus = write_state(
        dir.path(),
        "plus.json",
        &[SQRT_HALF, SQRT_HALF],
        &[0.0, 0.0],
    );

    let v = stdout_json(
        &qbrach()
            .arg("solve")
            .arg(&zero)
            .arg(&plus)
            .output()
            .unwrap(),
    );
    assert!((v["tau"].as_f64().unwrap() - 1.1107207345395915).abs() < 1e-6);

    let v = stdout_json(
        &qbrach()
            .args(["solve", "--convention", "saturating"])
            .arg(&zero)
            .arg(&plus)
            .output()
            .unwrap(),
    );
    assert!((v["tau"].as_f64().unwrap() - std::f64::consts::FRAC_PI_4).abs() < 1e-6);
    assert_eq!(v["convention"], "saturating");
    assert!((v["delta_h"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn opposite_evolution_sign_negates_the_operator_and_swaps_the_axis() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write_state(dir.path(), "zero.json", &[1.0, 0.0], &[0.0, 0.0]);
    let plus = write_state(
        dir.path(),
        "plus.json",
        &[SQRT_HALF, SQRT_HALF],
        &[0.0, 0.0],
    );

    let plus_run = stdout_json(
        &qbrach()
            .arg("solve")
            .arg(&zero)
            .arg(&plus)
            .output()
            .unwrap(),
    );
    let minus_run = stdout_json(
        &qbrach()
            .args(["solve", "--schrodinger-sign", "minus"])
            .arg(&zero)
            .arg(&plus)
            .output()
            .unwrap(),
    );

    for part in ["re", "im"] {
        let a = plus_run["hamiltonian"][part].as_array().unwrap();
        let b = minus_run["hamiltonian"][part].as_array().unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let x = a[i][j].as_f64().unwrap();
                let y = b[i][j].as_f64().unwrap();
                assert!((x + y).abs() < 1e-15, "H must flip sign, got {x} and {y}");
            }
        }
    }
    assert_eq!(plus_run["e_plus"], minus_run["e_minus"]);
    assert_eq!(plus_run["e_minus"], minus_run["e_plus"]);
    assert_eq!(plus_run["tau"], minus_run["tau"]);
}

#[test]
fn solve_axis_record_reparses_as_a_state_file() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write_state(dir.path(), "zero.json", &[1.0, 0.0], &[0.0, 0.0]);
    let plus = write_state(
        dir.path(),
        "plus.json",
        &[SQRT_HALF, SQRT_HALF],
        &[0.0, 0.0],
    );
    let v = stdout_json(
        &qbrach()
            .arg("solve")
            .arg(&zero)
            .arg(&plus)
            .output()
            .unwrap(),
    );

    let e_plus_path = dir.path().join("e_plus.json");
    fs::write(&e_plus_path, v["e_plus"].to_string()).unwrap();

    // The record must survive a round trip through the strict parser
    // unchanged: distance to itself is exactly zero.
    let out = qbrach()
        .args(["distance", "--strict"])
        .arg(&e_plus_path)
        .arg(&e_plus_path)
        .output()
        .unwrap();
    let d = stdout_json(&out);
    assert!(d["theta_rad"].as_f64().unwrap().abs() < 1e-12);

    // And its amplitudes are unit-norm to full precision.
    let re = v["e_plus"]["re"].as_array().unwrap();
    let im = v["e_plus"]["im"].as_array().unwrap();
    let norm_sqr: f64 = re
        .iter()
        .zip(im)
        .map(|(r, i)| r.as_f64().unwrap().powi(2) + i.as_f64().unwrap().powi(2))
        .sum();
    assert!((norm_sqr - 1.0).abs() < 1e-12);
}

#[test]
fn evolve_emits_a_well_formed_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write_state(dir.path(), "zero.json", &[1.0, 0.0], &[0.0, 0.0]);
    let plus = write_state(
        dir.path(),
        "plus.json",
        &[SQRT_HALF, SQRT_HALF],
        &[0.0, 0.0],
    );
    let out = qbrach()
        .args(["evolve", "--samples", "64"])
        .arg(&zero)
        .arg(&plus)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains('\r'), "CSV must use LF endings");

    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 65);
    assert_eq!(
        lines[0],
        "t,fidelity_to_target,delta_h,fs_speed,re_0,im_0,re_1,im_1"
    );

    let parse_row =
        |line: &str| -> Vec<f64> { line.split(',').map(|x| x.parse().unwrap()).collect() };
    let first = parse_row(lines[1]);
    let last = parse_row(lines[64]);
    assert_eq!(first[0], 0.0);
    // Starting fidelity is cos²(θ/2) = 1/2 for the equatorial pair.
    assert!((first[1] - 0.5).abs() < 1e-12);
    assert!(last[1] >= 1.0 - 1e-9);

    let delta_h0 = first[2];
    for line in &lines[1..] {
        let row = parse_row(line);
        assert!((row[2] - delta_h0).abs() < 1e-9, "delta_h drifted");
    }
}

#[test]
fn evolve_writes_identical_bytes_to_file_and_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write_state(dir.path(), "zero.json", &[1.0, 0.0], &[0.0, 0.0]);
    let one = write_state(dir.path(), "one.json", &[0.0, 1.0], &[0.0, 0.0]);
    let csv_path = dir.path().join("trajectory.csv");

    let stdout_run = qbrach()
        .args(["evolve", "--samples", "16"])
        .arg(&zero)
        .arg(&one)
        .output()
        .unwrap();
    let file_run = qbrach()
        .args(["evolve", "--samples", "16", "--out"])
        .arg(&csv_path)
        .arg(&zero)
        .arg(&one)
        .output()
        .unwrap();
    assert!(stdout_run.status.success() && file_run.status.success());
    assert_eq!(fs::read(&csv_path).unwrap(), stdout_run.stdout);
}

#[test]
fn audit_with_no_competitors_reports_zero_trials() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write_state(dir.path(), "zero.json", &[1.0, 0.0], &[0.0, 0.0]);
    let one = write_state(dir.path(), "one.json", &[0.0, 1.0], &[0.0, 0.0]);
    let out = qbrach()
        .args(["audit", "--trials", "0", "--local-steps", "0"])
        .arg(&zero)
        .arg(&one)
        .output()
        .unwrap();
    let v = stdout_json(&out);
    assert_eq!(v["trials"], 0);
    assert_eq!(v["n_beaten"], 0);
    assert_eq!(v["verdict"], "OPTIMAL_CONFIRMED");
}

#[test]
fn audit_reports_are_byte_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write_state(dir.path(), "zero.json", &[1.0, 0.0], &[0.0, 0.0]);
    let plus = write_state(
        dir.path(),
        "plus.json",
        &[SQRT_HALF, SQRT_HALF],
        &[0.0, 0.0],
    );
    let out_a = dir.path().join("a.json");
    let out_b = dir.path().join("b.json");
    for out in [&out_a, &out_b] {
        let run = qbrach()
            .args([
                "audit",
                "--trials",
                "25",
                "--local-steps",
                "10",
                "--seed",
                "42",
                "--out",
            ])
            .arg(out)
            .arg(&zero)
            .arg(&plus)
            .output()
            .unwrap();
        assert!(run.status.success());
    }
    assert_eq!(fs::read(&out_a).unwrap(), fs::read(&out_b).unwrap());
}

#[test]
fn malformed_input_exits_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_state(dir.path(), "good.json", &[1.0, 0.0], &[0.0, 0.0]);
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{not json").unwrap();
    let out = qbrach()
        .arg("distance")
        .arg(&bad)
        .arg(&good)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let short = dir.path().join("short.json");
    fs::write(&short, r#"{"dim": 2, "re": [1.0], "im": [0.0, 0.0]}"#).unwrap();
    let out = qbrach()
        .arg("distance")
        .arg(&short)
        .arg(&good)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let missing = dir.path().join("missing.json");
    let out = qbrach()
        .arg("distance")
        .arg(&missing)
        .arg(&good)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mismatched_dimensions_exit_with_code_3() {
    let dir = tempfile::tempdir().unwrap();
    let two = write_state(dir.path(), "two.json", &[1.0, 0.0], &[0.0, 0.0]);
    let three = write_state(dir.path(), "three.json", &[1.0, 0.0, 0.0], &[0.0, 0.0, 0.0]);
    for cmd in ["distance", "solve", "evolve", "audit"] {
        let out = qbrach().arg(cmd).arg(&two).arg(&three).output().unwrap();
        assert_eq!(out.status.code(), Some(3), "{cmd} must exit 3");
    }
}

#[test]
fn degenerate_pairs_exit_with_code_4_and_the_documented_message() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write_state(dir.path(), "zero.json", &[1.0, 0.0], &[0.0, 0.0]);
    // The same ray up to a global phase is still degenerate.
    let phased = write_state(dir.path(), "phased.json", &[0.0, 0.0], &[1.0, 0.0]);
    for cmd in ["solve", "evolve", "audit"] {
        let out = qbrach().arg(cmd).arg(&zero).arg(&phased).output().unwrap();
        assert_eq!(out.status.code(), Some(4), "{cmd} must exit 4");
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert!(
            stderr.contains("states coincide; tau = 0; H = 0"),
            "missing degenerate message, got: {stderr}"
        );
    }
}

#[test]
fn off_norm_states_warn_by_default_and_fail_under_strict() {
    let dir = tempfile::tempdir().unwrap();
    let big = write_state(dir.path(), "big.json", &[2.0, 0.0], &[0.0, 0.0]);
    let one = write_state(dir.path(), "one.json", &[0.0, 1.0], &[0.0, 0.0]);

    let out = qbrach().arg("solve").arg(&big).arg(&one).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("normalizing"));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    // After normalization this is the plain flip: τ = π/2.
    assert!((v["tau"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);

    let out = qbrach()
        .args(["solve", "--strict"])
        .arg(&big)
        .arg(&one)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
