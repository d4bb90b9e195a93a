//! Closed-form analysis of the between-host model: reproduction number,
//! equilibria, Jacobians, characteristic polynomial, Routh–Hurwitz
//! classification and the forward-bifurcation quantities.

use crate::between_host::{between_host_rhs, BetweenHostParams, BetweenHostState};
use crate::error::{Error, Result};
use nalgebra::{Complex, Matrix3};

/// Outcome of a stability classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Stable,
    Unstable,
    /// The equilibrium does not exist for these parameters.
    NotApplicable,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::Stable => "stable",
            Classification::Unstable => "unstable",
            Classification::NotApplicable => "not_applicable",
        }
    }
}

/// Coefficients of the characteristic cubic at the endemic equilibrium,
/// `lambda^3 + A1 lambda^2 + B1 lambda + C1 = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhCoefficients {
    pub a1: f64,
    pub b1: f64,
    pub c1: f64,
}

/// Everything the stability analysis produces for one parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub r0: f64,
    /// Disease-free equilibrium `(lambda/mu, 0, 0)`.
    pub e0: BetweenHostState,
    /// Endemic equilibrium; present exactly when `r0 > 1`.
    pub e1: Option<BetweenHostState>,
    pub eigenvalues_e0: [Complex<f64>; 3],
    pub eigenvalues_e1: Option<[Complex<f64>; 3]>,
    /// Routh–Hurwitz coefficients of the endemic characteristic cubic.
    /// When `r0 <= 1` they are the formal continuations of the same
    /// closed forms (C1 then flips sign with `r0 - 1`).
    pub rh_coefficients: RhCoefficients,
    /// `A1 * B1 - C1`; positive together with `C1 > 0` means stable.
    pub rh_margin: f64,
    pub classification_e0: Classification,
    pub classification_e1: Classification,
}

/// Basic reproduction number
/// `R0 = beta N_h pi lambda / (mu (mu + pi + gamma1) (mu + gamma2 + d N_h))`.
pub fn compute_r0(params: &BetweenHostParams) -> Result<f64> {
    params.validate()?;
    let infectious_exit = params.mu + params.gamma2 + params.d * params.n_h;
    let exposed_exit = params.mu + params.pi + params.gamma1;
    let denom = params.mu * exposed_exit * infectious_exit;
    if !(denom > 0.0) {
        return Err(Error::ParameterDomain(format!(
            "R0 denominator must be positive, got {denom}"
        )));
    }
    Ok(params.beta * params.n_h * params.pi * params.lambda / denom)
}

/// Both equilibria: the disease-free point `(lambda/mu, 0, 0)` always, and
/// the endemic point
/// `I* = mu (R0 - 1) / (beta N_h)`,
/// `E* = (mu + gamma2 + d N_h) I* / pi`,
/// `S* = lambda / (beta N_h I* + mu)`
/// only when `R0 > 1`.
pub fn equilibria(
    params: &BetweenHostParams,
) -> Result<(BetweenHostState, Option<BetweenHostState>)> {
    let r0 = compute_r0(params)?;
    let e0 = BetweenHostState::new(params.lambda / params.mu, 0.0, 0.0);
    let e1 = (r0 > 1.0).then(|| endemic_formal(params, r0));
    Ok((e0, e1))
}

/// Endemic-equilibrium formulas without the existence gate; for `r0 <= 1`
/// they continue into the nonphysical branch (used by the formal
/// Routh–Hurwitz coefficients).
fn endemic_formal(params: &BetweenHostParams, r0: f64) -> BetweenHostState {
    let bn = params.beta * params.n_h;
    let i_star = params.mu * (r0 - 1.0) / bn;
    let e_star = (params.mu + params.gamma2 + params.d * params.n_h) * i_star / params.pi;
    let s_star = params.lambda / (bn * i_star + params.mu);
    BetweenHostState::new(s_star, e_star, i_star)
}

/// Analytic Jacobian of the SEI field at `at`, row-major.
pub fn jacobian(params: &BetweenHostParams, at: &BetweenHostState) -> [[f64; 3]; 3] {
    let bn = params.beta * params.n_h;
    let s = at.susceptible;
    let i = at.infected;
    [
        [-(bn * i + params.mu), 0.0, -bn * s],
        [bn * i, -(params.mu + params.pi + params.gamma1), bn * s],
        [
            0.0,
            params.pi,
            -(params.mu + params.gamma2 + params.d * params.n_h),
        ],
    ]
}

/// Monic characteristic-polynomial coefficients `(a2, a1, a0)` of a 3x3
/// matrix: `lambda^3 + a2 lambda^2 + a1 lambda + a0` via trace, the sum of
/// principal 2x2 minors and the determinant.
pub fn char_poly_coefficients(j: &[[f64; 3]; 3]) -> (f64, f64, f64) {
    let trace = j[0][0] + j[1][1] + j[2][2];
    let minors = (j[0][0] * j[1][1] - j[0][1] * j[1][0])
        + (j[0][0] * j[2][2] - j[0][2] * j[2][0])
        + (j[1][1] * j[2][2] - j[1][2] * j[2][1]);
    let det = j[0][0] * (j[1][1] * j[2][2] - j[1][2] * j[2][1])
        - j[0][1] * (j[1][0] * j[2][2] - j[1][2] * j[2][0])
        + j[0][2] * (j[1][0] * j[2][1] - j[1][1] * j[2][0]);
    (-trace, minors, -det)
}

/// Roots of `a3 x^3 + a2 x^2 + a1 x + a0`, in deterministic order by
/// (real part, imaginary part). Computed as companion-matrix eigenvalues,
/// which stays well behaved near repeated roots at the bifurcation point.
pub fn eigenvalues_cubic(a3: f64, a2: f64, a1: f64, a0: f64) -> Result<[Complex<f64>; 3]> {
    if a3 == 0.0 || !a3.is_finite() {
        return Err(Error::DegenerateCubic);
    }
    let (p, q, r) = (a2 / a3, a1 / a3, a0 / a3);
    let companion = Matrix3::new(0.0, 0.0, -r, 1.0, 0.0, -q, 0.0, 1.0, -p);
    let eig = companion.complex_eigenvalues();
    let mut roots = [eig[0], eig[1], eig[2]];
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(roots)
}

fn eigenvalues_of(j: &[[f64; 3]; 3]) -> Result<[Complex<f64>; 3]> {
    let (a2, a1, a0) = char_poly_coefficients(j);
    eigenvalues_cubic(1.0, a2, a1, a0)
}

/// Closed-form Routh–Hurwitz coefficients of the characteristic cubic at the
/// endemic equilibrium:
/// `A1 = 3 mu + pi + beta N_h I* + gamma1 + gamma2 + d N_h`,
/// `B1 = (mu + beta N_h I*)(2 mu + pi + gamma1 + gamma2 + d N_h)
///       + (mu + pi + gamma1)(mu + gamma2 + d N_h) - beta N_h pi S*`,
/// `C1 = mu (mu + pi + gamma1)(mu + gamma2 + d N_h)(R0 - 1)`.
///
/// Without transmission (`beta N_h = 0`) the formal endemic branch has no
/// finite continuation; the coefficients are then evaluated at the
/// disease-free point, onto which the branch degenerates.
pub fn rh_coefficients(params: &BetweenHostParams, r0: f64) -> RhCoefficients {
    let e1 = if params.beta * params.n_h > 0.0 {
        endemic_formal(params, r0)
    } else {
        BetweenHostState::new(params.lambda / params.mu, 0.0, 0.0)
    };
    let bn = params.beta * params.n_h;
    let exposed_exit = params.mu + params.pi + params.gamma1;
    let infectious_exit = params.mu + params.gamma2 + params.d * params.n_h;
    let a1 = 3.0 * params.mu
        + params.pi
        + bn * e1.infected
        + params.gamma1
        + params.gamma2
        + params.d * params.n_h;
    let b1 = (params.mu + bn * e1.infected)
        * (2.0 * params.mu + params.pi + params.gamma1 + params.gamma2 + params.d * params.n_h)
        + exposed_exit * infectious_exit
        - bn * params.pi * e1.susceptible;
    let c1 = params.mu * exposed_exit * infectious_exit * (r0 - 1.0);
    RhCoefficients { a1, b1, c1 }
}

/// Full stability analysis of one parameter set.
///
/// `E0` is classified by the threshold theorem (stable exactly when
/// `R0 < 1`); `E1`, when it exists, by the Routh–Hurwitz criterion
/// (`C1 > 0` and `A1 B1 - C1 > 0`). The reported eigenvalues come from the
/// characteristic cubics of the analytic Jacobians and let callers check the
/// classifications spectrally.
pub fn routh_hurwitz(params: &BetweenHostParams) -> Result<StabilityReport> {
    let r0 = compute_r0(params)?;
    let (e0, e1) = equilibria(params)?;
    let eigenvalues_e0 = eigenvalues_of(&jacobian(params, &e0))?;
    let eigenvalues_e1 = match &e1 {
        Some(state) => Some(eigenvalues_of(&jacobian(params, state))?),
        None => None,
    };
    let coeffs = rh_coefficients(params, r0);
    let rh_margin = coeffs.a1 * coeffs.b1 - coeffs.c1;
    let classification_e0 = if r0 < 1.0 {
        Classification::Stable
    } else {
        Classification::Unstable
    };
    let classification_e1 = if e1.is_none() {
        Classification::NotApplicable
    } else if coeffs.c1 > 0.0 && rh_margin > 0.0 {
        Classification::Stable
    } else {
        Classification::Unstable
    };
    Ok(StabilityReport {
        r0,
        e0,
        e1,
        eigenvalues_e0,
        eigenvalues_e1,
        rh_coefficients: coeffs,
        rh_margin,
        classification_e0,
        classification_e1,
    })
}

/// Quantities certifying the forward (trans-critical) bifurcation at
/// `R0 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BifurcationQuantities {
    /// Critical transmission coefficient solving `R0(beta*) = 1`:
    /// `beta* = mu (mu + pi + gamma1)(mu + gamma2 + d N_h) / (N_h pi lambda)`.
    pub beta_star: f64,
    /// Quadratic normal-form coefficient `a = -2 beta*^2 N_h^2 lambda`.
    pub a_coeff: f64,
    /// Transversality coefficient `b = N_h lambda`.
    pub b_coeff: f64,
}

impl BifurcationQuantities {
    /// `a < 0` and `b > 0`: the bifurcation at `R0 = 1` is forward.
    pub fn is_forward(&self) -> bool {
        self.a_coeff < 0.0 && self.b_coeff > 0.0
    }
}

/// Compute the bifurcation quantities for a parameter set with `N_h > 0`.
pub fn bifurcation_quantities(params: &BetweenHostParams) -> Result<BifurcationQuantities> {
    params.validate()?;
    if !(params.n_h > 0.0) {
        return Err(Error::NoTransmission);
    }
    if !(params.pi > 0.0) || !(params.lambda > 0.0) {
        return Err(Error::ParameterDomain(
            "beta* requires pi > 0 and lambda > 0".into(),
        ));
    }
    let beta_star = params.mu
        * (params.mu + params.pi + params.gamma1)
        * (params.mu + params.gamma2 + params.d * params.n_h)
        / (params.n_h * params.pi * params.lambda);
    Ok(BifurcationQuantities {
        beta_star,
        a_coeff: -2.0 * beta_star * beta_star * params.n_h * params.n_h * params.lambda,
        b_coeff: params.n_h * params.lambda,
    })
}

/// Residual norm of the SEI field at a state; equilibria drive it to zero.
pub fn rhs_residual(params: &BetweenHostParams, state: &BetweenHostState) -> f64 {
    between_host_rhs(params, state)
        .iter()
        .map(|v| v * v)
        .sum::<f64>()
        .sqrt()
}
