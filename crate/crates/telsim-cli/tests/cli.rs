//! End-to-end tests of the installed binary: flag handling, config-file
//! precedence, output files, and exit-status conventions.

use std::path::Path;
use std::process::Command;

fn telsim() -> Command {
    Command::new(env!("CARGO_BIN_EXE_telsim"))
}

#[test]
fn unknown_preset_fails_and_lists_the_alternatives() {
    let out = telsim().args(["run", "--preset", "fig9"]).output().unwrap();
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("fig9"), "stderr: {stderr}");
    for name in ["fig1", "fig2", "fig3", "fig4", "fig5", "custom"] {
        assert!(stderr.contains(name), "stderr missing {name}: {stderr}");
    }
}

#[test]
fn closed_form_preset_writes_expected_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = telsim()
        .args(["run", "--preset", "fig1", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(stdout.matches("wrote ").count(), 6);
    assert!(dir.path().join("fig1_r0.333333.csv").exists());
    assert!(dir.path().join("fig1.svg").exists());
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("scenario.conf");
    std::fs::write(
        &config_path,
        "preset = custom\ns = 1\neta = 0.3\nt_max = 2\ndt = 0.02\nformat = csv\n",
    )
    .unwrap();
    let out_dir = dir.path().join("results");
    let out = telsim()
        .args(["run", "--config"])
        .arg(&config_path)
        .args(["--eta", "0.5", "--out"])
        .arg(&out_dir)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    // The flag value (eta = 0.5) names the file, not the config entry.
    assert!(out_dir.join("custom_eta0.5_r1.csv").exists());
    assert!(!out_dir.join("custom_eta0.3_r1.csv").exists());
    // csv-only format honored.
    assert!(!out_dir.join("custom.svg").exists());
}

#[test]
fn resolution_guard_reports_a_usable_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = telsim()
        .args(["run", "--preset", "fig3", "--dt", "0.2", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("resolution guard"), "stderr: {stderr}");
}

#[test]
fn validate_exit_status_matches_its_own_report() {
    let out = telsim().arg("validate").output().unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("validation report"), "stdout: {stdout}");
    assert!(stdout.contains("summary:"), "stdout: {stdout}");
    let any_failure = stdout.lines().any(|l| l.trim_start().starts_with("FAIL"));
    assert_eq!(
        out.status.success(),
        !any_failure,
        "exit status must mirror the report; stdout: {stdout}"
    );
}

#[test]
fn byte_identical_reruns() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    for dir in [dir_a.path(), dir_b.path()] {
        let out = telsim()
            .args(["run", "--preset", "fig5", "--t-max", "5", "--out"])
            .arg(dir)
            .output()
            .unwrap();
        assert!(out.status.success());
    }
    let read = |dir: &Path, name: &str| std::fs::read(dir.join(name)).unwrap();
    assert_eq!(
        read(dir_a.path(), "fig5.csv"),
        read(dir_b.path(), "fig5.csv")
    );
    assert_eq!(
        read(dir_a.path(), "fig5.svg"),
        read(dir_b.path(), "fig5.svg")
    );
}
