//! Nested multi-scale epidemic model toolkit.
//!
//! A within-host target-cell model produces the area under the viral load
//! curve, `N_h`, which enters a reduced between-host SEI model as a fixed
//! coupling constant. On top of that pipeline the crate computes the basic
//! reproduction number, equilibria and their Routh–Hurwitz stability, the
//! trans-critical bifurcation structure, elasticity indices of `R0`,
//! one- and two-parameter sweeps, and comparative-effectiveness rankings of
//! health interventions.
//!
//! Modules mirror the pipeline:
//!
//! - [`integrator`] — fixed RK4 and adaptive Dormand–Prince RK45 with dense
//!   output, shared by both scales.
//! - [`within_host`] — the fast-scale viral dynamics.
//! - [`coupling`] — the detection window and `N_h` / `N_m` quadratures.
//! - [`between_host`] — the reduced SEI model.
//! - [`analysis`] — `R0`, equilibria, eigenvalues, Routh–Hurwitz, `beta*`.
//! - [`sensitivity`] — elasticity indices with a finite-difference oracle.
//! - [`sweeps`] — bifurcation diagrams, heat grids, influence studies.
//! - [`interventions`] — `R_E`, percentage reductions, effectiveness tables.
//! - [`export`] — deterministic plot-ready CSV emission.
//! - [`baseline`] — the bundled reference scenario.

// Negated comparisons like `!(v >= 0.0)` also reject NaN; `v < 0.0` does not.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod baseline;
pub mod between_host;
pub mod coupling;
pub mod error;
pub mod export;
pub mod integrator;
pub mod interventions;
pub mod sensitivity;
pub mod sweeps;
pub mod within_host;

pub use analysis::{
    bifurcation_quantities, compute_r0, eigenvalues_cubic, equilibria, jacobian, routh_hurwitz,
    BifurcationQuantities, Classification, RhCoefficients, StabilityReport,
};
pub use between_host::{
    between_host_rhs, simulate_between_host, BetweenHostParams, BetweenHostState, BhParam,
};
pub use coupling::{
    apply_efficacies, compute_nh, compute_nm, derive_nh, detection_window, CouplingConfig,
    CouplingSummary,
};
pub use error::{Error, Result};
pub use integrator::{integrate, IntegratorConfig, Method, OdeSystem, StepStats, Trajectory};
pub use interventions::{
    effective_r, effectiveness_table, pct_reduction, Combo, EffectivenessRow, EffectivenessTable,
    EvalMode, InterventionEfficacies,
};
pub use sensitivity::{
    elasticity_closed_form, elasticity_finite_difference, ElasticityMethod, ElasticityReport,
};
pub use sweeps::{
    bifurcation_sweep, branch_exchange_cell, heat_grid, within_host_influence, AxisSpec,
    InfluenceParam, InfluenceStudy, StableBranch, SweepAxis, SweepCell, SweepGrid,
};
pub use within_host::{simulate_within_host, within_host_rhs, WithinHostParams, WithinHostState};
