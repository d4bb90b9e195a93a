//! Slow-scale SEI dynamics of the host population.
//!
//! The reduced model: transmission and disease-induced death are scaled by
//! the fixed coupling constant `N_h` delivered by the coupling module.
//! The recovered compartment is decoupled from (S, E, I) and omitted from the
//! state; [`reconstruct_recovered`] rebuilds it by quadrature when a full
//! SEIR trace is wanted for plotting.

use crate::error::{Error, Result};
use crate::integrator::{integrate, IntegratorConfig, OdeSystem, Trajectory};

/// Parameters of the between-host SEI model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetweenHostParams {
    /// Recruitment rate (humans/time).
    pub lambda: f64,
    /// Transmission coefficient (1/(virion·human·time)).
    pub beta: f64,
    /// Natural death rate (1/time).
    pub mu: f64,
    /// Progression rate E -> I (1/time).
    pub pi: f64,
    /// Recovery rate of exposed hosts (1/time).
    pub gamma1: f64,
    /// Recovery rate of infected hosts (1/time).
    pub gamma2: f64,
    /// Disease-induced death coefficient (1/(virion·time)).
    pub d: f64,
    /// Coupling constant from the fast scale (virion·time).
    pub n_h: f64,
}

impl BetweenHostParams {
    pub fn validate(&self) -> Result<()> {
        let non_negative: [(&'static str, f64); 7] = [
            ("between_host.lambda", self.lambda),
            ("between_host.beta", self.beta),
            ("between_host.pi", self.pi),
            ("between_host.gamma1", self.gamma1),
            ("between_host.gamma2", self.gamma2),
            ("between_host.d", self.d),
            ("between_host.n_h", self.n_h),
        ];
        for (name, v) in non_negative {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be >= 0, got {v}"),
                });
            }
        }
        if !(self.mu > 0.0) || !self.mu.is_finite() {
            return Err(Error::InvalidParameter {
                name: "between_host.mu",
                reason: format!("must be > 0, got {}", self.mu),
            });
        }
        Ok(())
    }

    /// Copy with a different coupling constant.
    pub fn with_n_h(mut self, n_h: f64) -> Self {
        self.n_h = n_h;
        self
    }

    /// Population ceiling `lambda / mu` of the feasible region.
    pub fn population_ceiling(&self) -> f64 {
        self.lambda / self.mu
    }
}

/// Field handles for by-name access in sweeps and sensitivity reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BhParam {
    Lambda,
    Beta,
    Mu,
    Pi,
    Gamma1,
    Gamma2,
    D,
    NH,
}

impl BhParam {
    /// All parameters in the canonical reporting order.
    pub const ALL: [BhParam; 8] = [
        BhParam::Beta,
        BhParam::Lambda,
        BhParam::Pi,
        BhParam::Mu,
        BhParam::Gamma1,
        BhParam::Gamma2,
        BhParam::NH,
        BhParam::D,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BhParam::Lambda => "lambda",
            BhParam::Beta => "beta",
            BhParam::Mu => "mu",
            BhParam::Pi => "pi",
            BhParam::Gamma1 => "gamma1",
            BhParam::Gamma2 => "gamma2",
            BhParam::D => "d",
            BhParam::NH => "n_h",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == name)
            .ok_or_else(|| Error::UnknownParameter(name.to_string()))
    }

    pub fn get(&self, params: &BetweenHostParams) -> f64 {
        match self {
            BhParam::Lambda => params.lambda,
            BhParam::Beta => params.beta,
            BhParam::Mu => params.mu,
            BhParam::Pi => params.pi,
            BhParam::Gamma1 => params.gamma1,
            BhParam::Gamma2 => params.gamma2,
            BhParam::D => params.d,
            BhParam::NH => params.n_h,
        }
    }

    pub fn set(&self, params: &mut BetweenHostParams, value: f64) {
        match self {
            BhParam::Lambda => params.lambda = value,
            BhParam::Beta => params.beta = value,
            BhParam::Mu => params.mu = value,
            BhParam::Pi => params.pi = value,
            BhParam::Gamma1 => params.gamma1 = value,
            BhParam::Gamma2 => params.gamma2 = value,
            BhParam::D => params.d = value,
            BhParam::NH => params.n_h = value,
        }
    }
}

/// State of the slow scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetweenHostState {
    pub susceptible: f64,
    pub exposed: f64,
    pub infected: f64,
}

impl BetweenHostState {
    pub fn new(susceptible: f64, exposed: f64, infected: f64) -> Self {
        Self {
            susceptible,
            exposed,
            infected,
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.susceptible, self.exposed, self.infected]
    }

    pub fn from_slice(s: &[f64]) -> Self {
        Self::new(s[0], s[1], s[2])
    }

    pub fn total(&self) -> f64 {
        self.susceptible + self.exposed + self.infected
    }

    fn validate_non_negative(&self) -> Result<()> {
        if self
            .as_array()
            .iter()
            .any(|v| !(*v >= 0.0) || !v.is_finite())
        {
            return Err(Error::InvalidParameter {
                name: "between_host.initial",
                reason: format!("initial state must be non-negative and finite, got {self:?}"),
            });
        }
        Ok(())
    }
}

/// State-component indices of between-host trajectories.
pub const IDX_SUSCEPTIBLE: usize = 0;
pub const IDX_EXPOSED: usize = 1;
pub const IDX_INFECTED: usize = 2;

/// Time derivative of the SEI state:
/// `[lambda - beta N_h S I - mu S,
///   beta N_h S I - (mu + pi + gamma1) E,
///   pi E - (mu + gamma2) I - d N_h I]`.
pub fn between_host_rhs(params: &BetweenHostParams, state: &BetweenHostState) -> [f64; 3] {
    let BetweenHostState {
        susceptible: s,
        exposed: e,
        infected: i,
    } = *state;
    let transmission = params.beta * params.n_h * s * i;
    [
        params.lambda - transmission - params.mu * s,
        transmission - (params.mu + params.pi + params.gamma1) * e,
        params.pi * e - (params.mu + params.gamma2) * i - params.d * params.n_h * i,
    ]
}

/// [`OdeSystem`] adapter for the between-host model.
pub struct BetweenHostSystem {
    pub params: BetweenHostParams,
}

impl OdeSystem for BetweenHostSystem {
    fn dimension(&self) -> usize {
        3
    }
    fn rhs(&self, _t: f64, y: &[f64], out: &mut [f64]) {
        let d = between_host_rhs(&self.params, &BetweenHostState::from_slice(y));
        out.copy_from_slice(&d);
    }
}

/// Simulate the slow scale over `[0, horizon]`.
pub fn simulate_between_host(
    params: &BetweenHostParams,
    initial: &BetweenHostState,
    horizon: f64,
    config: &IntegratorConfig,
) -> Result<Trajectory> {
    params.validate()?;
    initial.validate_non_negative()?;
    if !(horizon > 0.0) {
        return Err(Error::InvalidParameter {
            name: "between_host.horizon",
            reason: format!("must be > 0, got {horizon}"),
        });
    }
    let system = BetweenHostSystem { params: *params };
    integrate(&system, &initial.as_array(), 0.0, horizon, config)
}

/// Rebuild the omitted recovered compartment along a stored trajectory by
/// integrating `dR/dt = gamma1 E + gamma2 I - mu R` with the integrating
/// factor `e^{mu t}` and trapezoid quadrature on the trajectory grid.
pub fn reconstruct_recovered(
    params: &BetweenHostParams,
    trajectory: &Trajectory,
    r_initial: f64,
) -> Vec<f64> {
    let inflow: Vec<f64> = trajectory
        .states
        .iter()
        .map(|s| params.gamma1 * s[IDX_EXPOSED] + params.gamma2 * s[IDX_INFECTED])
        .collect();
    let mut out = Vec::with_capacity(trajectory.len());
    out.push(r_initial);
    // Step the integrating-factor form segment by segment so the
    // exponentials stay bounded on long horizons.
    let mut r = r_initial;
    for w in 0..trajectory.len() - 1 {
        let (ta, tb) = (trajectory.times[w], trajectory.times[w + 1]);
        let decay = (-params.mu * (tb - ta)).exp();
        let seg = 0.5 * (tb - ta) * (inflow[w] * decay + inflow[w + 1]);
        r = r * decay + seg;
        out.push(r);
    }
    out
}
