//! Parameter sweeps: one-parameter bifurcation diagrams, two-parameter `R0`
//! heat grids, and the influence of within-host parameters on the epidemic.
//!
//! Cells are independent pure evaluations keyed by index, so parallel
//! evaluation is supported and produces bytes identical to the serial path.

use crate::analysis::{compute_r0, routh_hurwitz, Classification};
use crate::between_host::{simulate_between_host, BetweenHostParams, BetweenHostState, BhParam};
use crate::coupling::{derive_nh, CouplingConfig};
use crate::error::{Error, Result};
use crate::integrator::{IntegratorConfig, Trajectory};
use crate::interventions::EvalMode;
use crate::within_host::WithinHostParams;
use rayon::prelude::*;

/// Which equilibrium is locally stable in a sweep cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StableBranch {
    /// Disease-free equilibrium (`R0 < 1`).
    E0,
    /// Endemic equilibrium (`R0 >= 1`).
    E1,
}

impl StableBranch {
    pub fn as_str(&self) -> &'static str {
        match self {
            StableBranch::E0 => "E0",
            StableBranch::E1 => "E1",
        }
    }
}

/// One evaluated grid cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepCell {
    pub r0: f64,
    pub stable_equilibrium: StableBranch,
    /// Endemic infected level where it exists (`R0 > 1`).
    pub i_star: Option<f64>,
}

/// One sweep axis: a parameter name and its grid values.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxis {
    pub param: BhParam,
    pub values: Vec<f64>,
}

/// Evaluated sweep: one axis (bifurcation) or two (heat grid).
/// Cells are row-major by (y index, x index).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub x: SweepAxis,
    pub y: Option<SweepAxis>,
    pub cells: Vec<SweepCell>,
}

impl SweepGrid {
    pub fn cell(&self, ix: usize, iy: usize) -> &SweepCell {
        &self.cells[iy * self.x.values.len() + ix]
    }
}

/// Uniform grid including both endpoints.
fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + i as f64 * step })
        .collect()
}

fn evaluate_cell(params: &BetweenHostParams) -> Result<SweepCell> {
    let r0 = compute_r0(params)?;
    let i_star = (r0 > 1.0).then(|| params.mu * (r0 - 1.0) / (params.beta * params.n_h));
    Ok(SweepCell {
        r0,
        stable_equilibrium: if r0 < 1.0 {
            StableBranch::E0
        } else {
            StableBranch::E1
        },
        i_star,
    })
}

/// Sweep `beta` across `(lo, hi)` and record both equilibrium branches.
///
/// The branch exchange sits within one grid cell of the closed-form
/// `beta*` of [`bifurcation_quantities`].
pub fn bifurcation_sweep(
    base: &BetweenHostParams,
    beta_range: (f64, f64),
    n_points: usize,
) -> Result<SweepGrid> {
    let (lo, hi) = beta_range;
    if !(lo < hi) {
        return Err(Error::InvalidParameter {
            name: "sweeps.beta_range",
            reason: format!("requires lo < hi, got ({lo}, {hi})"),
        });
    }
    if n_points < 3 {
        return Err(Error::InvalidParameter {
            name: "sweeps.n_points",
            reason: format!("needs at least 3 points, got {n_points}"),
        });
    }
    let values = linspace(lo, hi, n_points);
    let cells = values
        .iter()
        .map(|&beta| {
            let mut p = *base;
            p.beta = beta;
            evaluate_cell(&p)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepGrid {
        x: SweepAxis {
            param: BhParam::Beta,
            values,
        },
        y: None,
        cells,
    })
}

/// Grid-cell index of the branch exchange: the unique `i` with
/// `(R0(i) - 1)(R0(i+1) - 1) <= 0`, if any.
pub fn branch_exchange_cell(grid: &SweepGrid) -> Option<usize> {
    grid.cells
        .windows(2)
        .position(|w| (w[0].r0 - 1.0) * (w[1].r0 - 1.0) <= 0.0)
}

/// Axis request for [`heat_grid`]: parameter name, range, point count.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisSpec {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl AxisSpec {
    pub fn new(name: &str, lo: f64, hi: f64, n: usize) -> Self {
        Self {
            name: name.to_string(),
            lo,
            hi,
            n,
        }
    }

    fn resolve(&self) -> Result<SweepAxis> {
        if self.n < 2 {
            return Err(Error::InvalidParameter {
                name: "sweeps.axis.n",
                reason: format!("needs at least 2 points, got {}", self.n),
            });
        }
        if !(self.lo < self.hi) {
            return Err(Error::InvalidParameter {
                name: "sweeps.axis.range",
                reason: format!("requires lo < hi, got ({}, {})", self.lo, self.hi),
            });
        }
        Ok(SweepAxis {
            param: BhParam::from_name(&self.name)?,
            values: linspace(self.lo, self.hi, self.n),
        })
    }
}

/// Evaluate `R0` over the full two-parameter grid, row-major by
/// (y index, x index). Unknown parameter names are rejected.
pub fn heat_grid(
    base: &BetweenHostParams,
    x: &AxisSpec,
    y: &AxisSpec,
    mode: EvalMode,
) -> Result<SweepGrid> {
    let x_axis = x.resolve()?;
    let y_axis = y.resolve()?;
    let nx = x_axis.values.len();
    let indices: Vec<(usize, usize)> = (0..y_axis.values.len())
        .flat_map(|iy| (0..nx).map(move |ix| (ix, iy)))
        .collect();
    let eval = |&(ix, iy): &(usize, usize)| -> Result<SweepCell> {
        let mut p = *base;
        x_axis.param.set(&mut p, x_axis.values[ix]);
        y_axis.param.set(&mut p, y_axis.values[iy]);
        evaluate_cell(&p)
    };
    let cells: Vec<SweepCell> = match mode {
        EvalMode::Serial => indices.iter().map(eval).collect::<Result<_>>()?,
        EvalMode::Parallel => indices.par_iter().map(eval).collect::<Result<_>>()?,
    };
    Ok(SweepGrid {
        x: x_axis,
        y: Some(y_axis),
        cells,
    })
}

/// Spot-check that a cell's stability label re-derives from the full
/// Routh–Hurwitz analysis at the cell's parameters.
pub fn cell_label_consistent(
    base: &BetweenHostParams,
    grid: &SweepGrid,
    ix: usize,
    iy: usize,
) -> Result<bool> {
    let mut p = *base;
    grid.x.param.set(&mut p, grid.x.values[ix]);
    if let Some(y_axis) = &grid.y {
        y_axis.param.set(&mut p, y_axis.values[iy]);
    }
    let report = routh_hurwitz(&p)?;
    let cell = grid.cell(ix, iy);
    Ok(match cell.stable_equilibrium {
        StableBranch::E0 => report.r0 < 1.0 && report.classification_e0 == Classification::Stable,
        StableBranch::E1 => {
            report.r0 >= 1.0 && report.classification_e0 == Classification::Unstable
        }
    })
}

/// Within-host parameter varied by an influence study.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfluenceParam {
    /// Burst rate `alpha`.
    Alpha,
    /// Aggregate infected-cell clearance `x`.
    X,
    /// Aggregate virion clearance `y`.
    Y,
}

impl InfluenceParam {
    pub fn name(&self) -> &'static str {
        match self {
            InfluenceParam::Alpha => "alpha",
            InfluenceParam::X => "x",
            InfluenceParam::Y => "y",
        }
    }

    fn apply(&self, base: &WithinHostParams, value: f64) -> Result<WithinHostParams> {
        match self {
            InfluenceParam::Alpha => base.with_alpha(value),
            InfluenceParam::X => base.with_x(value),
            InfluenceParam::Y => base.with_y(value),
        }
    }
}

/// One influence study: for each parameter value, the re-derived coupling
/// constant and the resulting epidemic trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceStudy {
    pub param: InfluenceParam,
    pub values: Vec<f64>,
    pub n_h: Vec<f64>,
    pub trajectories: Vec<Trajectory>,
}

impl InfluenceStudy {
    /// Infected level at the end of each trajectory.
    pub fn late_infected(&self) -> Vec<f64> {
        self.trajectories
            .iter()
            .map(|t| t.final_state()[crate::between_host::IDX_INFECTED])
            .collect()
    }
}

/// Vary one within-host parameter, re-derive `N_h` per value, rebuild the
/// between-host parameters and simulate `I(t)` over `[0, horizon]`.
#[allow(clippy::too_many_arguments)]
pub fn within_host_influence(
    base_wh: &WithinHostParams,
    base_bh: &BetweenHostParams,
    vary: InfluenceParam,
    values: &[f64],
    horizon: f64,
    initial: &BetweenHostState,
    coupling: &CouplingConfig,
    bh_integrator: &IntegratorConfig,
) -> Result<InfluenceStudy> {
    if values.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::InvalidParameter {
            name: "sweeps.influence.values",
            reason: "all varied values must be positive".into(),
        });
    }
    let mut n_h = Vec::with_capacity(values.len());
    let mut trajectories = Vec::with_capacity(values.len());
    for &value in values {
        let wh = vary.apply(base_wh, value)?;
        let summary = derive_nh(&wh, coupling)?;
        let bh = base_bh.with_n_h(summary.n_h);
        trajectories.push(simulate_between_host(&bh, initial, horizon, bh_integrator)?);
        n_h.push(summary.n_h);
    }
    Ok(InfluenceStudy {
        param: vary,
        values: values.to_vec(),
        n_h,
        trajectories,
    })
}
