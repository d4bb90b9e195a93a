//! Benchmark-only crate; see `benches/pipeline.rs`.
//!
//! Shared setup lives here so the bench target stays readable.

use msei_core::{baseline, coupling, BetweenHostParams};

/// Between-host baseline with the coupling constant derived once.
pub fn derived_between_host() -> BetweenHostParams {
    let summary = coupling::derive_nh(
        &baseline::within_host_params(),
        &baseline::coupling_config(),
    )
    .expect("baseline derivation succeeds");
    baseline::between_host_params(summary.n_h)
}
