//! End-to-end tests of the `msei` binary: exit codes, file contracts,
//! determinism, override precedence and config round-tripping.

use std::collections::HashMap;
use std::path::Path;
use std::process::{Command, Output};

fn msei(args: &[&str], out_dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_msei"))
        .args(args)
        .arg("--out")
        .arg(out_dir)
        .output()
        .expect("binary runs")
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name))
        .unwrap_or_else(|e| panic!("missing {name} in {}: {e}", dir.display()))
}

/// Parse a key,value CSV into a map.
fn kv_csv(text: &str) -> HashMap<String, String> {
    text.lines()
        .skip(1)
        .filter_map(|line| line.split_once(','))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

#[test]
fn simulate_writes_the_documented_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = msei(&["simulate"], dir.path());
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );

    let wh = read(dir.path(), "within_host.csv");
    assert!(wh.starts_with("s,U,U_star,V\n"));
    let bh = read(dir.path(), "between_host.csv");
    assert!(bh.starts_with("t,S,E,I\n"));
    let coupling = read(dir.path(), "coupling.csv");
    assert!(coupling
        .starts_with("n_h,s_begin,s_end,integral_u_star,detection_limit,horizon,empty_window\n"));
    let manifest = read(dir.path(), "run_manifest.txt");
    assert!(manifest.contains("command = simulate"));
    assert!(manifest.contains("config_sha256 = "));
    read(dir.path(), "normalized_config.toml");

    // First data line starts at t = 0 with the configured initials.
    let first = bh.lines().nth(1).unwrap();
    let fields: Vec<f64> = first.split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(fields[0], 0.0);
    assert_eq!(fields[1], 1000.0);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    for dir in [&dir_a, &dir_b] {
        let out = msei(&["analyze"], dir.path());
        assert!(out.status.success());
    }
    for name in [
        "stability_report.csv",
        "coupling.csv",
        "normalized_config.toml",
    ] {
        assert_eq!(
            read(dir_a.path(), name),
            read(dir_b.path(), name),
            "{name} differs between identical runs"
        );
    }
}

#[test]
fn validation_failure_exits_1_and_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let out = msei(&["--set", "between_host.mu=-1", "analyze"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("mu"), "stderr: {stderr}");

    let out = msei(&["--set", "between_host.nonsense=1", "analyze"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn numerical_failure_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = msei(
        &["--set", "coupling.integrator.max_steps=10", "simulate"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("budget"), "stderr: {stderr}");
}

#[test]
fn io_failure_exits_3() {
    let file = tempfile::NamedTempFile::new().unwrap();
    let out = msei(&["analyze"], file.path());
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn overrides_win_and_normalized_config_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = msei(&["--set", "between_host.beta=0.005", "analyze"], dir.path());
    assert!(out.status.success());
    let normalized = read(dir.path(), "normalized_config.toml");
    assert!(
        normalized.contains("beta = 0.005"),
        "normalized: {normalized}"
    );
    let report_a = read(dir.path(), "stability_report.csv");

    // Re-running from the emitted config reproduces the outputs exactly.
    let dir_b = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("normalized_config.toml");
    let out = msei(
        &["--config", config_path.to_str().unwrap(), "analyze"],
        dir_b.path(),
    );
    assert!(out.status.success());
    assert_eq!(report_a, read(dir_b.path(), "stability_report.csv"));
    assert_eq!(normalized, read(dir_b.path(), "normalized_config.toml"));
}

#[test]
fn simulate_lands_on_the_equilibrium_analyze_declares_stable() {
    // Transmission and mortality overridden together: the analysis (on the
    // coupling constant derived from the same config) names the stable
    // point, and the long-horizon trajectory must land on it.
    let overrides = [
        "--set",
        "between_host.beta=0.00115",
        "--set",
        "between_host.mu=0.72",
    ];
    let dir = tempfile::tempdir().unwrap();
    let mut args = overrides.to_vec();
    args.push("analyze");
    let out = msei(&args, dir.path());
    assert!(out.status.success());
    let report = kv_csv(&read(dir.path(), "stability_report.csv"));

    let (target, label) = if report["classification_E1"] == "stable" {
        (
            [
                report["E1_S"].parse::<f64>().unwrap(),
                report["E1_E"].parse::<f64>().unwrap(),
                report["E1_I"].parse::<f64>().unwrap(),
            ],
            "E1",
        )
    } else {
        (
            [
                report["E0_S"].parse::<f64>().unwrap(),
                report["E0_E"].parse::<f64>().unwrap(),
                report["E0_I"].parse::<f64>().unwrap(),
            ],
            "E0",
        )
    };

    let dir_sim = tempfile::tempdir().unwrap();
    let mut args = overrides.to_vec();
    args.extend(["--set", "between_host.horizon=400", "simulate"]);
    let out = msei(&args, dir_sim.path());
    assert!(out.status.success());
    let bh = read(dir_sim.path(), "between_host.csv");
    let last: Vec<f64> = bh
        .lines()
        .last()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    for (got, want) in last[1..].iter().zip(target) {
        let scale = want.abs().max(1e-6);
        assert!(
            (got - want).abs() / scale < 5e-3,
            "final state {got} vs stable {label} component {want}"
        );
    }
}

#[test]
fn heatmap_contract() {
    let dir = tempfile::tempdir().unwrap();
    // One grid spec is a usage error.
    let out = msei(&["heatmap", "--grid", "mu:0.5:0.94:10"], dir.path());
    assert_eq!(out.status.code(), Some(1));

    let out = msei(
        &[
            "heatmap",
            "--grid",
            "mu:0.5:0.94:10",
            "--grid",
            "d:0.001:0.44:8",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let csv = read(dir.path(), "heatmap.csv");
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "x_name,y_name,x,y,R0,region");
    assert_eq!(csv.lines().count(), 1 + 10 * 8);
    assert!(csv.lines().nth(1).unwrap().starts_with("mu,d,"));
    for line in csv.lines().skip(1) {
        let region = line.rsplit(',').next().unwrap();
        assert!(region == "subcritical" || region == "supercritical");
    }

    // Unknown parameter names are validation errors.
    let out = msei(
        &[
            "heatmap",
            "--grid",
            "sigma:0:1:4",
            "--grid",
            "d:0.001:0.44:4",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sigma"));
}

#[test]
fn interventions_contract() {
    let dir = tempfile::tempdir().unwrap();
    let out = msei(&["interventions"], dir.path());
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = read(dir.path(), "interventions.csv");
    assert!(csv.starts_with("combo,level,R_E,pct_reduction,rank\n"));
    assert_eq!(csv.lines().count(), 1 + 24, "8 bundles x 3 levels");
    assert!(csv.contains("rho+delta+epsilon"));

    // Custom levels shrink the table accordingly.
    let dir_b = tempfile::tempdir().unwrap();
    let out = msei(&["interventions", "--levels", "0.5"], dir_b.path());
    assert!(out.status.success());
    assert_eq!(
        read(dir_b.path(), "interventions.csv").lines().count(),
        1 + 8
    );
}

#[test]
fn bifurcate_and_elasticity_contracts() {
    let dir = tempfile::tempdir().unwrap();
    let out = msei(&["bifurcate"], dir.path());
    assert!(out.status.success());
    let csv = read(dir.path(), "bifurcation.csv");
    assert!(csv.starts_with("beta,R0,I_star_dfe,I_star_endemic,stable_branch\n"));
    assert_eq!(csv.lines().count(), 1 + 101);
    assert!(csv.contains(",E0") && csv.contains(",E1"));

    let out = msei(&["elasticity"], dir.path());
    assert!(out.status.success());
    let csv = read(dir.path(), "elasticity.csv");
    assert!(csv.starts_with("parameter,closed_form,finite_difference,abs_diff\n"));
    assert_eq!(csv.lines().count(), 1 + 8);
}

#[test]
fn bad_sweep_arguments_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = msei(&["bifurcate", "--lo", "2e-6", "--hi", "1e-6"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let out = msei(&["bifurcate", "--points", "2"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let out = msei(
        &["heatmap", "--grid", "mu:0.9:0.5:10", "--grid", "d:0.001:0.44:8"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn fixed_grid_method_is_configurable() {
    let fixed = [
        "--set",
        "coupling.integrator.method=fixed_rk4",
        "--set",
        "coupling.integrator.step=0.001",
    ];
    // The coupling constant derived on the fixed 1e-3 grid agrees with the
    // adaptive default to the documented quadrature stability (1e-4).
    let dir = tempfile::tempdir().unwrap();
    let mut args = fixed.to_vec();
    args.push("analyze");
    let out = msei(&args, dir.path());
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let coupling = read(dir.path(), "coupling.csv");
    let n_h: f64 = coupling
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!((n_h - 1.4915373829897735e5).abs() / n_h < 1e-4, "N_h = {n_h}");

    // The slow scale's initial transient is too fast for an explicit fixed
    // 1e-3 grid; the run must fail loudly as a numerical error rather than
    // return garbage.
    let dir_sim = tempfile::tempdir().unwrap();
    let mut args = fixed.to_vec();
    args.push("simulate");
    let out = msei(&args, dir_sim.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("non-finite"));

    let dir_bad = tempfile::tempdir().unwrap();
    let out = msei(
        &["--set", "coupling.integrator.method=rk4", "analyze"],
        dir_bad.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("method"));
}

#[test]
fn out_dir_env_var_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_msei"))
        .args(["analyze"])
        .env("MSEI_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    read(dir.path(), "stability_report.csv");
}
