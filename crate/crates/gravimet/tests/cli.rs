//! End-to-end checks of the command-line interface: exit codes, output
//! files, and determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn gravimet(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gravimet"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn qfi_sweep_writes_csv_with_expected_shape() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.conf");
    fs::write(&cfg, "time_grid.t_max = 20\ntime_grid.n_points = 5\n").unwrap();
    let out = gravimet(
        &[
            "qfi-sweep",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            "rows.csv",
        ],
        dir.path(),
    );
    assert_eq!(
        exit_code(&out),
        0,
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(dir.path().join("rows.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "probe_name,t,lambda_g,purity,qfi_total,qfi_term_cov,qfi_term_purity,cfi_best_theta,crb"
    );
    assert_eq!(text.lines().count(), 1 + 4 * 5); // header + probes x times
    assert!(String::from_utf8_lossy(&out.stdout).contains("wrote 20 rows"));
}

#[test]
fn sweeps_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.csv", "b.csv"] {
        let out = gravimet(&["purity-sweep", "--out", name], dir.path());
        assert_eq!(exit_code(&out), 0);
    }
    let a = fs::read(dir.path().join("a.csv")).unwrap();
    let b = fs::read(dir.path().join("b.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn lambda_g_override_lands_in_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = gravimet(
        &[
            "qfi-sweep",
            "--lambda-g",
            "3e-7",
            "--probe",
            "thermal",
            "--out",
            "t.csv",
        ],
        dir.path(),
    );
    assert_eq!(exit_code(&out), 0);
    let text = fs::read_to_string(dir.path().join("t.csv")).unwrap();
    for line in text.lines().skip(1) {
        assert!(line.starts_with("thermal,"));
        assert!(line.contains("3.00000000000e-7"));
    }
}

#[test]
fn unknown_probe_is_a_configuration_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = gravimet(&["purity-sweep", "--probe", "fock"], dir.path());
    assert_eq!(exit_code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("fock"));
}

#[test]
fn contour_without_lambda_grid_is_a_configuration_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = gravimet(&["qfi-contour"], dir.path());
    assert_eq!(exit_code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("lambda_g_grid"));
}

#[test]
fn contour_runs_with_grid_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("contour.conf");
    fs::write(
        &cfg,
        "time_grid.t_max = 40\ntime_grid.n_points = 3\n\
         lambda_g_grid.min = 1e-9\nlambda_g_grid.max = 1e-2\nlambda_g_grid.n_points = 4\n",
    )
    .unwrap();
    let out = gravimet(
        &[
            "qfi-contour",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            "c.csv",
        ],
        dir.path(),
    );
    assert_eq!(
        exit_code(&out),
        0,
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(dir.path().join("c.csv")).unwrap();
    assert_eq!(text.lines().count(), 1 + 3 * 4);
}

#[test]
fn malformed_config_reports_line_and_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.conf");
    fs::write(&cfg, "params.gamma = 0.1\nwhat is this\n").unwrap();
    let out = gravimet(
        &["qfi-sweep", "--config", cfg.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(exit_code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn reversed_time_grid_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.conf");
    fs::write(&cfg, "time_grid.t_min = 9\ntime_grid.t_max = 1\n").unwrap();
    let out = gravimet(
        &["purity-sweep", "--config", cfg.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(exit_code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("time_grid"));
}

#[test]
fn missing_config_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = gravimet(&["purity-sweep", "--config", "nope.conf"], dir.path());
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn steady_state_prints_the_ratio_identity() {
    let dir = tempfile::tempdir().unwrap();
    let out = gravimet(
        &["steady-state", "--gamma", "0.1", "--omega-m", "1.0"],
        dir.path(),
    );
    assert_eq!(exit_code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("B_inf/A_inf"));
    assert!(text.contains("-2.00000000000e1")); // -2Q at Q = 10
    assert!(text.contains("qfi_total"));
}

#[test]
fn r_grid_probes_show_up_in_sweeps() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("r.conf");
    fs::write(
        &cfg,
        "probes = squeezed_vacuum\nr_grid = 0.5, 1.2\ntime_grid.t_max = 10\ntime_grid.n_points = 2\n",
    )
    .unwrap();
    let out = gravimet(
        &[
            "purity-sweep",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            "r.csv",
        ],
        dir.path(),
    );
    assert_eq!(exit_code(&out), 0);
    let text = fs::read_to_string(dir.path().join("r.csv")).unwrap();
    assert!(text.contains("squeezed_vacuum_r0.5,"));
    assert!(text.contains("squeezed_vacuum_r1.2,"));
    assert_eq!(text.lines().count(), 1 + 3 * 2);
}

#[test]
fn validate_passes_and_is_seed_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = gravimet(&["validate", "--seed", "123"], dir.path());
    assert_eq!(exit_code(&a), 0, "{}", String::from_utf8_lossy(&a.stdout));
    let b = gravimet(&["validate", "--seed", "123"], dir.path());
    assert_eq!(a.stdout, b.stdout);
    let default_run = gravimet(&["validate"], dir.path());
    assert_eq!(exit_code(&default_run), 0);
    assert!(String::from_utf8_lossy(&default_run.stdout).contains("validation seed 7"));
}
