//! The bundled reference scenario.
//!
//! One canonical parameterization used by the CLI's default configuration,
//! the benchmark suite and the regression fixtures: an acute respiratory
//! infection at the fast scale feeding a population of 1150 hosts at the
//! slow scale. Recruitment balances natural death at the initial population,
//! `lambda = mu * (S0 + E0 + I0)`.

use crate::between_host::{BetweenHostParams, BetweenHostState};
use crate::coupling::CouplingConfig;
use crate::integrator::IntegratorConfig;
use crate::within_host::{WithinHostParams, WithinHostState};

/// Per-channel infected-cell clearance rates (sum: `x = 0.795`).
pub const D_RATES: [f64; 6] = [0.027, 0.22, 0.1, 0.428, 0.01, 0.01];
/// Per-channel virion clearance rates (sum: `y = 0.47`).
pub const B_RATES: [f64; 6] = [0.1, 0.1, 0.08, 0.11, 0.01, 0.07];

/// Default fast-scale horizon: transients at the baseline rates decay well
/// within 30 time units.
pub const WITHIN_HOST_HORIZON: f64 = 30.0;

/// Default slow-scale horizon.
pub const BETWEEN_HOST_HORIZON: f64 = 500.0;

/// Default detection limit: zero, so the detection window spans the whole
/// trajectory and the coupling constant is maximally reproducible.
pub const DETECTION_LIMIT: f64 = 0.0;

pub fn within_host_params() -> WithinHostParams {
    WithinHostParams::from_rates(2.0, 0.05, 0.1, 0.1, 0.24, D_RATES, B_RATES)
        .expect("baseline parameters are valid")
}

pub fn within_host_initial() -> WithinHostState {
    WithinHostState::new(3.2e5, 0.0, 5.2)
}

pub fn between_host_initial() -> BetweenHostState {
    BetweenHostState::new(1000.0, 100.0, 50.0)
}

/// Between-host rates with the coupling constant supplied by the caller.
pub fn between_host_params(n_h: f64) -> BetweenHostParams {
    let initial = between_host_initial();
    let mu = 0.062;
    BetweenHostParams {
        lambda: mu * initial.total(),
        beta: 0.0115,
        mu,
        pi: 0.09,
        gamma1: 0.05,
        gamma2: 0.0714,
        d: 0.0018,
        n_h,
    }
}

pub fn coupling_config() -> CouplingConfig {
    CouplingConfig {
        initial: within_host_initial(),
        horizon: WITHIN_HOST_HORIZON,
        detection_limit: DETECTION_LIMIT,
        integrator: IntegratorConfig::default(),
    }
}
