//! Reduction of the fast scale to the composed parameter `N_h`.
//!
//! `N_h` is the area under the viral load curve,
//! `N_h = alpha * ∫ U* ds / (y + mu_v)`, integrated over the detection
//! window — the interval during which the viral load sits above the
//! detection limit. It proxies the infectiousness of one host and enters the
//! slow scale as a constant. Interventions modify the within-host parameters
//! and rescale the same integral ([`compute_nm`]).

use crate::error::{Error, Result};
use crate::integrator::{IntegratorConfig, Trajectory};
use crate::interventions::InterventionEfficacies;
use crate::within_host::{
    simulate_within_host, WithinHostParams, WithinHostState, IDX_INFECTED_CELLS, IDX_VIRAL_LOAD,
};

/// How the fast scale is run when deriving `N_h` or `N_m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingConfig {
    pub initial: WithinHostState,
    pub horizon: f64,
    /// Viral-load threshold bounding the detection window. Zero means the
    /// window spans the whole trajectory.
    pub detection_limit: f64,
    pub integrator: IntegratorConfig,
}

/// `N_h` together with the quantities it was assembled from.
///
/// The reconstruction identity
/// `n_h = alpha * integral_u_star / (y + mu_v)` holds on every summary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingSummary {
    /// Composed infectiousness parameter (virion·time).
    pub n_h: f64,
    /// Detection window `(s_begin, s_end)`.
    pub window: (f64, f64),
    /// `∫ U* ds` over the window (cell·time).
    pub integral_u_star: f64,
    /// Threshold that bounded the window (virions).
    pub detection_limit: f64,
    /// Simulation horizon the trajectory spanned (time).
    pub horizon: f64,
    /// Set when the viral load never reached the detection limit; `n_h` is
    /// zero in that case and the window collapses to the trajectory start.
    pub empty_window: bool,
}

/// Locate the detection window: first and last time `V >= detection_limit`,
/// with linear interpolation at the crossings. If the load never falls back
/// below the limit the window ends at the trajectory end.
pub fn detection_window(trajectory: &Trajectory, detection_limit: f64) -> Result<(f64, f64)> {
    if !(detection_limit >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "coupling.detection_limit",
            reason: format!("must be >= 0, got {detection_limit}"),
        });
    }
    let v: Vec<f64> = trajectory.component(IDX_VIRAL_LOAD).collect();
    let t = &trajectory.times;

    let first_above = match v.iter().position(|&x| x >= detection_limit) {
        Some(i) => i,
        None => {
            return Err(Error::EmptyDetectionWindow {
                limit: detection_limit,
            })
        }
    };
    let last_above = v.iter().rposition(|&x| x >= detection_limit).unwrap();

    let s_begin = if first_above == 0 {
        t[0]
    } else {
        cross_time(
            t[first_above - 1],
            v[first_above - 1],
            t[first_above],
            v[first_above],
            detection_limit,
        )
    };
    let s_end = if last_above == v.len() - 1 {
        trajectory.t_end()
    } else {
        cross_time(
            t[last_above],
            v[last_above],
            t[last_above + 1],
            v[last_above + 1],
            detection_limit,
        )
    };
    Ok((s_begin, s_end))
}

/// Linear-interpolated time at which `v` crosses `limit` between two samples.
fn cross_time(t0: f64, v0: f64, t1: f64, v1: f64, limit: f64) -> f64 {
    if v1 == v0 {
        return t0;
    }
    t0 + (limit - v0) / (v1 - v0) * (t1 - t0)
}

/// Area under the viral load curve from a within-host trajectory.
///
/// Composite trapezoid of `U*` on the accepted-step grid, restricted to the
/// detection window (window endpoints enter by linear interpolation), scaled
/// by `alpha / (y + mu_v)`. An empty window is not an error here: the summary
/// carries `n_h = 0` and the `empty_window` flag, and the caller decides.
pub fn compute_nh(
    params: &WithinHostParams,
    trajectory: &Trajectory,
    detection_limit: f64,
) -> Result<CouplingSummary> {
    let horizon = trajectory.t_end() - trajectory.t0();
    let (window, empty) = match detection_window(trajectory, detection_limit) {
        Ok(w) => (w, false),
        Err(Error::EmptyDetectionWindow { .. }) => ((trajectory.t0(), trajectory.t0()), true),
        Err(e) => return Err(e),
    };

    let integral = if empty {
        0.0
    } else {
        trapezoid_over_window(trajectory, IDX_INFECTED_CELLS, window)?
    };
    Ok(CouplingSummary {
        n_h: params.alpha * integral / (params.y() + params.mu_v),
        window,
        integral_u_star: integral,
        detection_limit,
        horizon,
        empty_window: empty,
    })
}

/// Trapezoid rule for one component over `[window.0, window.1]`.
fn trapezoid_over_window(traj: &Trajectory, idx: usize, window: (f64, f64)) -> Result<f64> {
    let (a, b) = window;
    let ends = traj.sample(&[a, b])?;
    let (fa, fb) = (ends[0][idx], ends[1][idx]);

    // Interior grid points strictly inside (a, b).
    let lo = traj.times.partition_point(|&t| t <= a);
    let hi = traj.times.partition_point(|&t| t < b);

    let mut sum = 0.0;
    let mut prev_t = a;
    let mut prev_f = fa;
    for i in lo..hi {
        let (ti, fi) = (traj.times[i], traj.states[i][idx]);
        sum += 0.5 * (ti - prev_t) * (prev_f + fi);
        prev_t = ti;
        prev_f = fi;
    }
    sum += 0.5 * (b - prev_t) * (prev_f + fb);
    Ok(sum)
}

/// Within-host parameters under active interventions: antivirals cut the
/// burst rate to `alpha(1-epsilon)`, cell-entry inhibitors cut the infection
/// rate to `k(1-gamma_k)`, and immunomodulators raise both clearance
/// aggregates to `x(1+delta)` and `y(1+delta)`.
pub fn apply_efficacies(
    params: &WithinHostParams,
    eff: &InterventionEfficacies,
) -> Result<WithinHostParams> {
    eff.validate()?;
    WithinHostParams::from_aggregates(
        params.omega,
        params.k * (1.0 - eff.gamma_k),
        params.mu_c,
        params.mu_v,
        params.alpha * (1.0 - eff.epsilon),
        params.x() * (1.0 + eff.delta),
        params.y() * (1.0 + eff.delta),
    )
}

/// Simulate the fast scale and derive `N_h` in one go.
pub fn derive_nh(params: &WithinHostParams, cfg: &CouplingConfig) -> Result<CouplingSummary> {
    let traj = simulate_within_host(params, &cfg.initial, cfg.horizon, &cfg.integrator)?;
    compute_nh(params, &traj, cfg.detection_limit)
}

/// Intervention-modified coupling constant `N_m`.
///
/// Re-simulates the fast scale with the modified parameters and applies the
/// same area-under-the-curve reduction with the modified `alpha` and `y`.
/// All-zero efficacies reproduce [`derive_nh`] exactly.
pub fn compute_nm(
    params: &WithinHostParams,
    eff: &InterventionEfficacies,
    cfg: &CouplingConfig,
) -> Result<CouplingSummary> {
    let modified = apply_efficacies(params, eff)?;
    derive_nh(&modified, cfg)
}
