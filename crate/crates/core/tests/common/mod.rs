//! Shared helpers for the integration and acceptance suites.
//!
//! Not every suite uses every helper, so dead-code analysis is per-target.
#![allow(dead_code)]

use msei_core::{analysis, baseline, coupling, BetweenHostParams, CouplingSummary};
use rand::Rng;
use std::sync::OnceLock;

/// Coupling summary of the bundled scenario, derived once per test binary.
pub fn baseline_summary() -> &'static CouplingSummary {
    static SUMMARY: OnceLock<CouplingSummary> = OnceLock::new();
    SUMMARY.get_or_init(|| {
        coupling::derive_nh(
            &baseline::within_host_params(),
            &baseline::coupling_config(),
        )
        .expect("baseline coupling derivation succeeds")
    })
}

/// Between-host baseline with the derived coupling constant.
pub fn baseline_bh() -> BetweenHostParams {
    baseline::between_host_params(baseline_summary().n_h)
}

/// Random parameter draw over the documented test ranges: every rate uniform
/// in [0.01, 1], recruitment in [1, 100], coupling constant in [1, 1e5].
pub fn random_params(rng: &mut impl Rng) -> BetweenHostParams {
    BetweenHostParams {
        lambda: rng.gen_range(1.0..100.0),
        beta: rng.gen_range(0.01..1.0),
        mu: rng.gen_range(0.01..1.0),
        pi: rng.gen_range(0.01..1.0),
        gamma1: rng.gen_range(0.01..1.0),
        gamma2: rng.gen_range(0.01..1.0),
        d: rng.gen_range(0.01..1.0),
        n_h: rng.gen_range(1.0..1e5),
    }
}

/// Draw moderate-rate dynamics with a prescribed reproduction number, for
/// simulation-based tests: the transmission coefficient is solved from the
/// target so the threshold side is exact by construction, and the slow
/// relaxation rate stays bounded away from zero.
pub fn draw_with_target_r0(rng: &mut impl Rng, target_r0: f64) -> BetweenHostParams {
    let mu = rng.gen_range(0.1..0.5);
    let pi = rng.gen_range(0.1..0.5);
    let gamma1 = rng.gen_range(0.1..0.5);
    let gamma2 = rng.gen_range(0.1..0.5);
    let n_h = rng.gen_range(10.0..100.0);
    let d = rng.gen_range(0.001..0.02);
    let lambda = rng.gen_range(5.0..50.0);
    let exposed_exit = mu + pi + gamma1;
    let infectious_exit = mu + gamma2 + d * n_h;
    let beta = target_r0 * mu * exposed_exit * infectious_exit / (n_h * pi * lambda);
    let params = BetweenHostParams {
        lambda,
        beta,
        mu,
        pi,
        gamma1,
        gamma2,
        d,
        n_h,
    };
    debug_assert!((analysis::compute_r0(&params).unwrap() - target_r0).abs() < 1e-9 * target_r0);
    params
}
