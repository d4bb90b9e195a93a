//! Elasticity (normalized sensitivity) indices of `R0`.
//!
//! The elasticity of `R0` with respect to a parameter `p` is
//! `phi_p = (dR0/dp) * (p / R0)` — the relative change of `R0` per relative
//! change of `p`. Closed forms come from differentiating the `R0` formula;
//! an independent central-finite-difference route driven purely by
//! [`compute_r0`] arbitrates them.
//!
//! Every closed form here is the actual derivative of the `R0` expression,
//! which differs from what a glance at the formula suggests in three places:
//! `pi` appears in both the numerator and the exposed-compartment exit rate,
//! so `phi_pi = (mu + gamma1)/(mu + pi + gamma1)` rather than 1; the
//! `gamma2` index is normalized by the full infectious exit rate
//! `mu + gamma2 + d N_h`; and the `N_h` index is positive. The
//! finite-difference oracle confirms all three.

use crate::analysis::compute_r0;
use crate::between_host::{BetweenHostParams, BhParam};
use crate::error::{Error, Result};

/// Which route produced an [`ElasticityReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElasticityMethod {
    ClosedForm,
    FiniteDifference,
}

/// Per-parameter elasticities in the canonical order of [`BhParam::ALL`].
///
/// An entry is `None` when the index is not computable for that parameter —
/// the finite-difference route cannot scale a parameter that is exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ElasticityReport {
    pub method: ElasticityMethod,
    pub entries: Vec<(BhParam, Option<f64>)>,
}

impl ElasticityReport {
    pub fn get(&self, param: BhParam) -> Option<f64> {
        self.entries
            .iter()
            .find(|(p, _)| *p == param)
            .and_then(|(_, v)| *v)
    }
}

/// Closed-form elasticity indices.
///
/// `phi_beta = phi_lambda = 1` identically;
/// `phi_pi = (mu + gamma1)/(mu + pi + gamma1)`;
/// `phi_mu = -1 - mu/(mu + pi + gamma1) - mu/(mu + gamma2 + d N_h)`;
/// `phi_gamma1 = -gamma1/(mu + pi + gamma1)`;
/// `phi_gamma2 = -gamma2/(mu + gamma2 + d N_h)`;
/// `phi_N_h = (mu + gamma2)/(mu + gamma2 + d N_h)`;
/// `phi_d = -d N_h/(mu + gamma2 + d N_h)`.
pub fn elasticity_closed_form(params: &BetweenHostParams) -> Result<ElasticityReport> {
    let r0 = compute_r0(params)?;
    if !(r0 > 0.0) {
        return Err(Error::UndefinedElasticity);
    }
    let exposed_exit = params.mu + params.pi + params.gamma1;
    let infectious_exit = params.mu + params.gamma2 + params.d * params.n_h;
    let value = |param: BhParam| -> f64 {
        match param {
            BhParam::Beta | BhParam::Lambda => 1.0,
            BhParam::Pi => (params.mu + params.gamma1) / exposed_exit,
            BhParam::Mu => -1.0 - params.mu / exposed_exit - params.mu / infectious_exit,
            BhParam::Gamma1 => -params.gamma1 / exposed_exit,
            BhParam::Gamma2 => -params.gamma2 / infectious_exit,
            BhParam::NH => (params.mu + params.gamma2) / infectious_exit,
            BhParam::D => -params.d * params.n_h / infectious_exit,
        }
    };
    Ok(ElasticityReport {
        method: ElasticityMethod::ClosedForm,
        entries: BhParam::ALL.iter().map(|&p| (p, Some(value(p)))).collect(),
    })
}

/// Central-finite-difference elasticities, evaluated through [`compute_r0`]
/// only: `phi_p ~ (R0(p(1+h)) - R0(p(1-h))) / (2 h R0(p))`.
///
/// `rel_step` must lie in `(0, 0.01]`; parameters equal to zero are skipped
/// with a `None` marker.
pub fn elasticity_finite_difference(
    params: &BetweenHostParams,
    rel_step: f64,
) -> Result<ElasticityReport> {
    if !(rel_step > 0.0 && rel_step <= 0.01) {
        return Err(Error::InvalidParameter {
            name: "sensitivity.rel_step",
            reason: format!("must lie in (0, 0.01], got {rel_step}"),
        });
    }
    let r0 = compute_r0(params)?;
    if !(r0 > 0.0) {
        return Err(Error::UndefinedElasticity);
    }
    let mut entries = Vec::with_capacity(BhParam::ALL.len());
    for param in BhParam::ALL {
        let p0 = param.get(params);
        if p0 == 0.0 {
            entries.push((param, None));
            continue;
        }
        let mut up = *params;
        param.set(&mut up, p0 * (1.0 + rel_step));
        let mut down = *params;
        param.set(&mut down, p0 * (1.0 - rel_step));
        let phi = (compute_r0(&up)? - compute_r0(&down)?) / (2.0 * rel_step * r0);
        entries.push((param, Some(phi)));
    }
    Ok(ElasticityReport {
        method: ElasticityMethod::FiniteDifference,
        entries,
    })
}

/// Default step of the finite-difference route.
pub const DEFAULT_REL_STEP: f64 = 1e-6;
