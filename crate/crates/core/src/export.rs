//! Plot-ready CSV emission for every analysis product.
//!
//! All floating-point values are written with 17 significant digits so the
//! files round-trip losslessly and regression fixtures can be compared
//! byte for byte. Absent optional values are written as empty fields.

use crate::analysis::StabilityReport;
use crate::coupling::CouplingSummary;
use crate::integrator::Trajectory;
use crate::interventions::EffectivenessTable;
use crate::sensitivity::ElasticityReport;
use crate::sweeps::{InfluenceStudy, StableBranch, SweepGrid};
use std::fmt::Write;

/// Lossless float formatting: 17 significant digits, scientific notation.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// Trajectory as CSV under the given header, e.g. `"s,U,U_star,V"` for the
/// fast scale or `"t,S,E,I"` for the slow scale.
pub fn trajectory_csv(traj: &Trajectory, header: &str) -> String {
    let mut out = String::with_capacity(32 * traj.len());
    out.push_str(header);
    out.push('\n');
    for (t, row) in traj.times.iter().zip(&traj.states) {
        out.push_str(&fmt_f64(*t));
        for v in row {
            out.push(',');
            out.push_str(&fmt_f64(*v));
        }
        out.push('\n');
    }
    out
}

/// Coupling summary as a one-record CSV with the type's field names.
pub fn coupling_summary_csv(s: &CouplingSummary) -> String {
    let mut out = String::new();
    out.push_str("n_h,s_begin,s_end,integral_u_star,detection_limit,horizon,empty_window\n");
    let _ = writeln!(
        out,
        "{},{},{},{},{},{},{}",
        fmt_f64(s.n_h),
        fmt_f64(s.window.0),
        fmt_f64(s.window.1),
        fmt_f64(s.integral_u_star),
        fmt_f64(s.detection_limit),
        fmt_f64(s.horizon),
        s.empty_window
    );
    out
}

/// Stability report as a flat key,value record.
pub fn stability_report_csv(r: &StabilityReport) -> String {
    let mut out = String::from("key,value\n");
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(out, "{k},{v}");
    };
    kv("R0", fmt_f64(r.r0));
    kv("E0_S", fmt_f64(r.e0.susceptible));
    kv("E0_E", fmt_f64(r.e0.exposed));
    kv("E0_I", fmt_f64(r.e0.infected));
    kv("E1_S", fmt_opt(r.e1.map(|s| s.susceptible)));
    kv("E1_E", fmt_opt(r.e1.map(|s| s.exposed)));
    kv("E1_I", fmt_opt(r.e1.map(|s| s.infected)));
    for (i, eig) in r.eigenvalues_e0.iter().enumerate() {
        kv(&format!("eig_E0_{}_re", i + 1), fmt_f64(eig.re));
        kv(&format!("eig_E0_{}_im", i + 1), fmt_f64(eig.im));
    }
    for i in 0..3 {
        let eig = r.eigenvalues_e1.map(|e| e[i]);
        kv(&format!("eig_E1_{}_re", i + 1), fmt_opt(eig.map(|z| z.re)));
        kv(&format!("eig_E1_{}_im", i + 1), fmt_opt(eig.map(|z| z.im)));
    }
    kv("A1", fmt_f64(r.rh_coefficients.a1));
    kv("B1", fmt_f64(r.rh_coefficients.b1));
    kv("C1", fmt_f64(r.rh_coefficients.c1));
    kv("rh_margin", fmt_f64(r.rh_margin));
    kv(
        "classification_E0",
        r.classification_e0.as_str().to_string(),
    );
    kv(
        "classification_E1",
        r.classification_e1.as_str().to_string(),
    );
    out
}

/// Closed-form and finite-difference elasticities side by side.
///
/// Header: `parameter,closed_form,finite_difference,abs_diff`.
pub fn elasticity_csv(closed: &ElasticityReport, fd: &ElasticityReport) -> String {
    let mut out = String::from("parameter,closed_form,finite_difference,abs_diff\n");
    for (param, cf_value) in &closed.entries {
        let fd_value = fd.get(*param);
        let diff = match (cf_value, fd_value) {
            (Some(c), Some(f)) => Some((c - f).abs()),
            _ => None,
        };
        let _ = writeln!(
            out,
            "{},{},{},{}",
            param.name(),
            fmt_opt(*cf_value),
            fmt_opt(fd_value),
            fmt_opt(diff)
        );
    }
    out
}

/// Two-parameter heat grid, row-major by (y, x).
///
/// Header: `x_name,y_name,x,y,R0,region` with region in
/// {subcritical, supercritical}.
pub fn heat_grid_csv(grid: &SweepGrid) -> String {
    let y_axis = grid.y.as_ref().expect("heat grids have two axes");
    let mut out = String::from("x_name,y_name,x,y,R0,region\n");
    for (iy, y) in y_axis.values.iter().enumerate() {
        for (ix, x) in grid.x.values.iter().enumerate() {
            let cell = grid.cell(ix, iy);
            let region = if cell.r0 < 1.0 {
                "subcritical"
            } else {
                "supercritical"
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                grid.x.param.name(),
                y_axis.param.name(),
                fmt_f64(*x),
                fmt_f64(*y),
                fmt_f64(cell.r0),
                region
            );
        }
    }
    out
}

/// One-parameter bifurcation sweep.
///
/// Header: `beta,R0,I_star_dfe,I_star_endemic,stable_branch`; the
/// disease-free branch is identically zero, the endemic column is empty
/// where the branch does not exist.
pub fn bifurcation_csv(grid: &SweepGrid) -> String {
    let mut out = String::from("beta,R0,I_star_dfe,I_star_endemic,stable_branch\n");
    for (beta, cell) in grid.x.values.iter().zip(&grid.cells) {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64(*beta),
            fmt_f64(cell.r0),
            fmt_f64(0.0),
            fmt_opt(cell.i_star),
            match cell.stable_equilibrium {
                StableBranch::E0 => "E0",
                StableBranch::E1 => "E1",
            }
        );
    }
    out
}

/// Comparative-effectiveness tables, one row per (combo, level).
///
/// Header: `combo,level,R_E,pct_reduction,rank`.
pub fn effectiveness_csv(tables: &[EffectivenessTable]) -> String {
    let mut out = String::from("combo,level,R_E,pct_reduction,rank\n");
    for table in tables {
        for row in &table.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                row.combo.label(),
                fmt_f64(row.efficacy_level),
                fmt_f64(row.r_e),
                fmt_f64(row.pct_reduction),
                row.rank
            );
        }
    }
    out
}

/// Influence-study trajectories resampled to a common uniform grid, one
/// `I(t)` column per varied value.
pub fn influence_csv(study: &InfluenceStudy, n_samples: usize) -> String {
    let mut header = String::from("t");
    for value in &study.values {
        let _ = write!(header, ",I_{}_{}", study.param.name(), value);
    }
    let t_end = study
        .trajectories
        .iter()
        .map(|t| t.t_end())
        .fold(f64::INFINITY, f64::min);
    let times: Vec<f64> = (0..n_samples)
        .map(|i| t_end * i as f64 / (n_samples - 1) as f64)
        .collect();
    let sampled: Vec<Vec<Vec<f64>>> = study
        .trajectories
        .iter()
        .map(|t| t.sample(&times).expect("grid within span"))
        .collect();
    let mut out = header;
    out.push('\n');
    for (i, t) in times.iter().enumerate() {
        out.push_str(&fmt_f64(*t));
        for rows in &sampled {
            out.push(',');
            out.push_str(&fmt_f64(rows[i][crate::between_host::IDX_INFECTED]));
        }
        out.push('\n');
    }
    out
}
