//! End-to-end CLI behavior: exit codes, summaries, CSV round trips and the
//! write-to-temp/rename discipline.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use acdrive::sim::integrate;
use acdrive_cli::config::load_scenario;
use acdrive_cli::csvio::{fmt_f64, read_trajectory};
use proptest::prelude::*;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_acdrive"))
}

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios")
        .join(name)
}

fn tmp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("acdrive-cli-test-{tag}-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

fn write_scenario(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

#[test]
fn simulate_writes_expected_row_count() {
    let dir = tmp_dir("simulate");
    let out = dir.join("traj.csv");
    let sc = write_scenario(
        &dir,
        "short.scenario",
        "[machine]\ntype = im\n\n[excitation]\nkind = sinusoid\namplitude = 20\nfrequency = 50\n\n[sim]\ndt = 1e-4\nduration = 0.02\n",
    );
    let output = run(bin().arg("simulate").arg(&sc).arg("--out").arg(&out));
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    let text = fs::read_to_string(&out).unwrap();
    // duration/dt + 1 samples plus one header row
    assert_eq!(text.lines().count(), 202);
}

#[test]
fn config_error_names_sigma_and_exits_2() {
    let dir = tmp_dir("sigma");
    let out = dir.join("traj.csv");
    let sc = write_scenario(
        &dir,
        "bad.scenario",
        "[machine]\ntype = im\nm = 0.2\n\n[sim]\ndt = 1e-4\nduration = 0.02\n",
    );
    let output = run(bin().arg("simulate").arg(&sc).arg("--out").arg(&out));
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("sigma"), "stderr: {stderr}");
    assert!(!out.exists(), "no partial output on config error");
}

#[test]
fn unstable_step_exits_3() {
    let dir = tmp_dir("diverge");
    let out = dir.join("traj.csv");
    let sc = write_scenario(
        &dir,
        "unstable.scenario",
        "[machine]\ntype = im\n\n[excitation]\nkind = sinusoid\namplitude = 20\nfrequency = 50\n\n[sim]\ndt = 0.1\nduration = 40\n",
    );
    let output = run(bin().arg("simulate").arg(&sc).arg("--out").arg(&out));
    assert_eq!(output.status.code(), Some(3), "{output:?}");
    assert!(!out.exists(), "no partial output on divergence");
}

#[test]
fn analyze_im_50hz_reports_fully_observable() {
    let dir = tmp_dir("analyze50");
    let out = dir.join("report.csv");
    let output = run(bin()
        .arg("analyze")
        .arg(scenario("im_50hz.scenario"))
        .arg("--out")
        .arg(&out));
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("observable fraction:  1.0000"), "{stdout}");
    assert!(stdout.contains("singular intervals:   none"), "{stdout}");
    assert!(out.exists());
}

#[test]
fn analyze_spmsm_standstill_strict_exits_4() {
    let dir = tmp_dir("strict");
    let out = dir.join("report.csv");
    let output = run(bin()
        .arg("analyze")
        .arg(scenario("spmsm_standstill.scenario"))
        .arg("--out")
        .arg(&out)
        .arg("--strict"));
    assert_eq!(output.status.code(), Some(4), "{output:?}");
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("observable fraction:  0.0000"), "{stdout}");
    // the report itself is still written before the strict gate fires
    assert!(out.exists());
}

#[test]
fn analyze_im_dc_identifies_singular_interval() {
    let dir = tmp_dir("dc");
    let out = dir.join("report.csv");
    let output = run(bin()
        .arg("analyze")
        .arg(scenario("im_dc_constspeed.scenario"))
        .arg("--out")
        .arg(&out));
    assert_eq!(output.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("singular interval:"), "{stdout}");
    // the singular tail reaches the end of the horizon
    assert!(stdout.contains("4.000000] s"), "{stdout}");
}

#[test]
fn trajectory_csv_roundtrips_bit_exactly() {
    let dir = tmp_dir("roundtrip");
    for name in ["im_50hz.scenario", "wrsm_spinup.scenario"] {
        let sc_path = scenario(name);
        let out = dir.join(format!("{name}.csv"));
        let output = run(bin().arg("simulate").arg(&sc_path).arg("--out").arg(&out));
        assert_eq!(output.status.code(), Some(0));

        let expected = integrate(&load_scenario(&sc_path).unwrap()).unwrap();
        let parsed = read_trajectory(&out).unwrap();
        assert_eq!(parsed, expected, "{name}: CSV round trip must be bit-exact");
    }
}

#[test]
fn oracle_off_leaves_numeric_delta_empty() {
    let dir = tmp_dir("oracleoff");
    let out = dir.join("report.csv");
    let sc = write_scenario(
        &dir,
        "off.scenario",
        "[machine]\ntype = im\n\n[excitation]\nkind = sinusoid\namplitude = 20\nfrequency = 50\n\n[sim]\ndt = 1e-4\nduration = 0.01\n\n[analysis]\noracle = off\n",
    );
    let output = run(bin().arg("analyze").arg(&sc).arg("--out").arg(&out));
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    let text = fs::read_to_string(&out).unwrap();
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    let col = header.iter().position(|c| *c == "delta_numeric").unwrap();
    for line in text.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[col], "", "delta_numeric must be empty with oracle off");
    }
}

#[test]
fn verify_mutation_mode_fails() {
    let output = run(bin().args(["verify", "--seed", "42", "--states", "200", "--mutate"]));
    assert_eq!(output.status.code(), Some(1), "{output:?}");
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("FAIL"), "{stdout}");
}

#[test]
fn verify_minimal_run() {
    let output = run(bin().args(["verify", "--seed", "1", "--states", "1"]));
    assert_eq!(output.status.code(), Some(0), "{output:?}");
}

proptest! {
    #[test]
    fn csv_float_format_roundtrips(bits in any::<u64>()) {
        let x = f64::from_bits(bits);
        prop_assume!(x.is_finite());
        let back: f64 = fmt_f64(x).parse().unwrap();
        prop_assert_eq!(back.to_bits(), x.to_bits());
    }
}
