//! Fast-scale viral dynamics inside one infected host.
//!
//! Target-cell-limited model: susceptible epithelial cells are produced at a
//! constant rate, become infected on contact with free virions, and infected
//! cells burst into new virions. Immune clearance of infected cells and
//! virions enters through the aggregate rates `x` and `y` (sums of the six
//! cytokine/chemokine channel rates); the dynamics only ever use the sums.

use crate::error::{Error, Result};
use crate::integrator::{integrate, IntegratorConfig, OdeSystem, Trajectory};

/// Parameters of the within-host model.
///
/// Clearance can be supplied either as the six per-channel rates
/// ([`WithinHostParams::from_rates`]) or directly as the aggregates
/// ([`WithinHostParams::from_aggregates`]); `x` and `y` are read-only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WithinHostParams {
    /// Cell production rate (cells/time).
    pub omega: f64,
    /// Infection rate of susceptible cells (1/(virion·time)).
    pub k: f64,
    /// Natural cell death rate (1/time).
    pub mu_c: f64,
    /// Natural virion death rate (1/time).
    pub mu_v: f64,
    /// Burst rate (virions/(cell·time)).
    pub alpha: f64,
    x: f64,
    y: f64,
}

impl WithinHostParams {
    /// Build from the six infected-cell and six virion clearance rates.
    pub fn from_rates(
        omega: f64,
        k: f64,
        mu_c: f64,
        mu_v: f64,
        alpha: f64,
        d_rates: [f64; 6],
        b_rates: [f64; 6],
    ) -> Result<Self> {
        for (i, r) in d_rates.iter().enumerate() {
            if !(*r >= 0.0) {
                return Err(Error::InvalidParameter {
                    name: "within_host.d_rates",
                    reason: format!("rate d{} must be >= 0, got {r}", i + 1),
                });
            }
        }
        for (i, r) in b_rates.iter().enumerate() {
            if !(*r >= 0.0) {
                return Err(Error::InvalidParameter {
                    name: "within_host.b_rates",
                    reason: format!("rate b{} must be >= 0, got {r}", i + 1),
                });
            }
        }
        Self::from_aggregates(
            omega,
            k,
            mu_c,
            mu_v,
            alpha,
            d_rates.iter().sum(),
            b_rates.iter().sum(),
        )
    }

    /// Build directly from the aggregate clearance rates `x` and `y`.
    pub fn from_aggregates(
        omega: f64,
        k: f64,
        mu_c: f64,
        mu_v: f64,
        alpha: f64,
        x: f64,
        y: f64,
    ) -> Result<Self> {
        let positive: [(&'static str, f64); 4] = [
            ("within_host.omega", omega),
            ("within_host.mu_c", mu_c),
            ("within_host.mu_v", mu_v),
            ("within_host.alpha", alpha),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be > 0, got {v}"),
                });
            }
        }
        let non_negative: [(&'static str, f64); 3] = [
            ("within_host.k", k),
            ("within_host.x", x),
            ("within_host.y", y),
        ];
        for (name, v) in non_negative {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be >= 0, got {v}"),
                });
            }
        }
        Ok(Self {
            omega,
            k,
            mu_c,
            mu_v,
            alpha,
            x,
            y,
        })
    }

    /// Aggregate infected-cell clearance rate (sum of the d-rates).
    pub fn x(&self) -> f64 {
        self.x
    }

    /// Aggregate virion clearance rate (sum of the b-rates).
    pub fn y(&self) -> f64 {
        self.y
    }

    /// Cell population in the absence of infection, `omega / mu_c`.
    pub fn infection_free_cells(&self) -> f64 {
        self.omega / self.mu_c
    }

    /// Copy with a different burst rate.
    pub fn with_alpha(self, alpha: f64) -> Result<Self> {
        Self::from_aggregates(
            self.omega, self.k, self.mu_c, self.mu_v, alpha, self.x, self.y,
        )
    }

    /// Copy with a different aggregate infected-cell clearance rate.
    pub fn with_x(self, x: f64) -> Result<Self> {
        Self::from_aggregates(
            self.omega, self.k, self.mu_c, self.mu_v, self.alpha, x, self.y,
        )
    }

    /// Copy with a different aggregate virion clearance rate.
    pub fn with_y(self, y: f64) -> Result<Self> {
        Self::from_aggregates(
            self.omega, self.k, self.mu_c, self.mu_v, self.alpha, self.x, y,
        )
    }
}

/// State of the fast scale: target cells, infected cells, free virions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WithinHostState {
    /// Susceptible epithelial cells, `U`.
    pub target_cells: f64,
    /// Infected epithelial cells, `U*`.
    pub infected_cells: f64,
    /// Free viral load, `V`.
    pub viral_load: f64,
}

impl WithinHostState {
    pub fn new(target_cells: f64, infected_cells: f64, viral_load: f64) -> Self {
        Self {
            target_cells,
            infected_cells,
            viral_load,
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.target_cells, self.infected_cells, self.viral_load]
    }

    pub fn from_slice(s: &[f64]) -> Self {
        Self::new(s[0], s[1], s[2])
    }

    fn validate_non_negative(&self) -> Result<()> {
        if self
            .as_array()
            .iter()
            .any(|v| !(*v >= 0.0) || !v.is_finite())
        {
            return Err(Error::InvalidParameter {
                name: "within_host.initial",
                reason: format!("initial state must be non-negative and finite, got {self:?}"),
            });
        }
        Ok(())
    }
}

/// State-component indices of within-host trajectories.
pub const IDX_TARGET_CELLS: usize = 0;
pub const IDX_INFECTED_CELLS: usize = 1;
pub const IDX_VIRAL_LOAD: usize = 2;

/// Time derivative of the within-host state:
/// `[omega - k U V - mu_c U,  k U V - x U* - mu_c U*,  alpha U* - y V - mu_v V]`.
pub fn within_host_rhs(params: &WithinHostParams, state: &WithinHostState) -> [f64; 3] {
    let WithinHostState {
        target_cells: u,
        infected_cells: u_star,
        viral_load: v,
    } = *state;
    let infection = params.k * u * v;
    [
        params.omega - infection - params.mu_c * u,
        infection - params.x * u_star - params.mu_c * u_star,
        params.alpha * u_star - params.y * v - params.mu_v * v,
    ]
}

/// [`OdeSystem`] adapter for the within-host model.
pub struct WithinHostSystem {
    pub params: WithinHostParams,
}

impl OdeSystem for WithinHostSystem {
    fn dimension(&self) -> usize {
        3
    }
    fn rhs(&self, _t: f64, y: &[f64], out: &mut [f64]) {
        let d = within_host_rhs(&self.params, &WithinHostState::from_slice(y));
        out.copy_from_slice(&d);
    }
}

/// Simulate the fast scale over `[0, horizon]`.
pub fn simulate_within_host(
    params: &WithinHostParams,
    initial: &WithinHostState,
    horizon: f64,
    config: &IntegratorConfig,
) -> Result<Trajectory> {
    initial.validate_non_negative()?;
    if !(horizon > 0.0) {
        return Err(Error::InvalidParameter {
            name: "within_host.horizon",
            reason: format!("must be > 0, got {horizon}"),
        });
    }
    let system = WithinHostSystem { params: *params };
    integrate(&system, &initial.as_array(), 0.0, horizon, config)
}
