//! Explicit ODE integration with dense trajectory output.
//!
//! Two methods, both recording every accepted step:
//!
//! - [`Method::AdaptiveRk45`] — Dormand–Prince 5(4) embedded pair with
//!   proportional step control. The default for all simulations.
//! - [`Method::FixedRk4`] — classic fourth-order Runge–Kutta on a fixed grid,
//!   kept as a deterministic cross-check of the adaptive path.
//!
//! Values between stored points come from linear interpolation
//! ([`Trajectory::sample`]); the quadratures downstream operate directly on
//! the accepted-step grid, so no continuous extension is needed.

use crate::error::{Error, Result};

/// A first-order system `dy/dt = f(t, y)`.
pub trait OdeSystem {
    /// Number of state variables.
    fn dimension(&self) -> usize;

    /// Evaluate `f(t, y)` into `out` (`y` and `out` have length `dimension()`).
    ///
    /// Must be deterministic: identical `(t, y)` inputs yield identical output.
    fn rhs(&self, t: f64, y: &[f64], out: &mut [f64]);
}

/// Closure-backed system, handy for tests and one-off problems.
pub struct FnSystem<F: Fn(f64, &[f64], &mut [f64])> {
    dimension: usize,
    f: F,
}

impl<F: Fn(f64, &[f64], &mut [f64])> FnSystem<F> {
    pub fn new(dimension: usize, f: F) -> Self {
        Self { dimension, f }
    }
}

impl<F: Fn(f64, &[f64], &mut [f64])> OdeSystem for FnSystem<F> {
    fn dimension(&self) -> usize {
        self.dimension
    }
    fn rhs(&self, t: f64, y: &[f64], out: &mut [f64]) {
        (self.f)(t, y, out)
    }
}

/// Integration method selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    FixedRk4,
    AdaptiveRk45,
}

/// Tolerances and step limits for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub method: Method,
    /// Step size (fixed method) or initial step size (adaptive method).
    pub step: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            method: Method::AdaptiveRk45,
            step: 1e-3,
            abs_tol: 1e-9,
            rel_tol: 1e-9,
            max_steps: 10_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0) || !self.step.is_finite() {
            return Err(Error::InvalidParameter {
                name: "integrator.step",
                reason: format!("must be a positive finite number, got {}", self.step),
            });
        }
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter {
                name: "integrator.abs_tol/rel_tol",
                reason: format!(
                    "tolerances must be positive, got abs_tol = {}, rel_tol = {}",
                    self.abs_tol, self.rel_tol
                ),
            });
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidParameter {
                name: "integrator.max_steps",
                reason: "must be at least 1".into(),
            });
        }
        Ok(())
    }
}

/// Accepted/rejected step counters of one integration run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
}

/// Dense output of one integration: states at every accepted step.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Strictly increasing times, `times[0] = t0`, `times.last() = t_end`.
    pub times: Vec<f64>,
    /// One state row per entry of `times`.
    pub states: Vec<Vec<f64>>,
    pub stats: StepStats,
}

impl Trajectory {
    pub fn dimension(&self) -> usize {
        self.states.first().map_or(0, Vec::len)
    }

    pub fn t0(&self) -> f64 {
        self.times[0]
    }

    pub fn t_end(&self) -> f64 {
        *self.times.last().expect("trajectory is never empty")
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> &[f64] {
        self.states.last().expect("trajectory is never empty")
    }

    /// Values of one state component along the trajectory.
    pub fn component(&self, idx: usize) -> impl Iterator<Item = f64> + '_ {
        self.states.iter().map(move |row| row[idx])
    }

    /// Linear interpolation at `query_times`; exact at stored times.
    ///
    /// Queries outside `[t0, t_end]` fail with [`Error::SampleOutOfRange`].
    pub fn sample(&self, query_times: &[f64]) -> Result<Vec<Vec<f64>>> {
        let (t0, t_end) = (self.t0(), self.t_end());
        let mut out = Vec::with_capacity(query_times.len());
        for &tq in query_times {
            if !(tq >= t0 && tq <= t_end) {
                return Err(Error::SampleOutOfRange { t: tq, t0, t_end });
            }
            // partition_point: first index with times[i] >= tq
            let hi = self.times.partition_point(|&t| t < tq);
            if hi == 0 || self.times[hi] == tq {
                out.push(self.states[hi].clone());
                continue;
            }
            let lo = hi - 1;
            let (ta, tb) = (self.times[lo], self.times[hi]);
            let w = (tq - ta) / (tb - ta);
            let row = self.states[lo]
                .iter()
                .zip(&self.states[hi])
                .map(|(&a, &b)| a + w * (b - a))
                .collect();
            out.push(row);
        }
        Ok(out)
    }
}

/// Integrate `system` from `initial` over `[t0, t_end]`.
///
/// The adaptive method bounds the local error per step by
/// `abs_tol + rel_tol * |y|` componentwise (RMS norm). Exhausting
/// `max_steps` or producing a non-finite derivative is an error.
pub fn integrate<S: OdeSystem>(
    system: &S,
    initial: &[f64],
    t0: f64,
    t_end: f64,
    config: &IntegratorConfig,
) -> Result<Trajectory> {
    config.validate()?;
    if initial.len() != system.dimension() {
        return Err(Error::DimensionMismatch {
            expected: system.dimension(),
            got: initial.len(),
        });
    }
    if initial.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "initial",
            reason: "initial state must be finite".into(),
        });
    }
    if !(t_end > t0) || !t0.is_finite() || !t_end.is_finite() {
        return Err(Error::BadInterval { t0, t_end });
    }

    match config.method {
        Method::FixedRk4 => rk4_fixed(system, initial, t0, t_end, config),
        Method::AdaptiveRk45 => rk45_adaptive(system, initial, t0, t_end, config),
    }
}

fn eval_rhs<S: OdeSystem>(system: &S, t: f64, y: &[f64], out: &mut [f64]) -> Result<()> {
    system.rhs(t, y, out);
    if out.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteDerivative { t });
    }
    Ok(())
}

fn rk4_fixed<S: OdeSystem>(
    system: &S,
    initial: &[f64],
    t0: f64,
    t_end: f64,
    config: &IntegratorConfig,
) -> Result<Trajectory> {
    let n = system.dimension();
    let h = config.step;
    // Number of whole steps; a shortened final step lands exactly on t_end.
    let span = t_end - t0;
    let n_whole = (span / h).floor() as usize;
    let n_steps = if t0 + n_whole as f64 * h >= t_end {
        n_whole
    } else {
        n_whole + 1
    };
    if n_steps > config.max_steps {
        return Err(Error::StepBudgetExhausted {
            max_steps: config.max_steps,
            t: t0 + config.max_steps as f64 * h,
        });
    }

    let mut times = Vec::with_capacity(n_steps + 1);
    let mut states = Vec::with_capacity(n_steps + 1);
    times.push(t0);
    states.push(initial.to_vec());

    let mut y = initial.to_vec();
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut tmp = vec![0.0; n];

    for i in 0..n_steps {
        let t = t0 + i as f64 * h;
        let t_next = if i + 1 == n_steps {
            t_end
        } else {
            t0 + (i + 1) as f64 * h
        };
        let hi = t_next - t;

        eval_rhs(system, t, &y, &mut k1)?;
        for j in 0..n {
            tmp[j] = y[j] + 0.5 * hi * k1[j];
        }
        eval_rhs(system, t + 0.5 * hi, &tmp, &mut k2)?;
        for j in 0..n {
            tmp[j] = y[j] + 0.5 * hi * k2[j];
        }
        eval_rhs(system, t + 0.5 * hi, &tmp, &mut k3)?;
        for j in 0..n {
            tmp[j] = y[j] + hi * k3[j];
        }
        eval_rhs(system, t_next, &tmp, &mut k4)?;
        for j in 0..n {
            y[j] += hi / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }

        times.push(t_next);
        states.push(y.clone());
    }

    Ok(Trajectory {
        times,
        states,
        stats: StepStats {
            accepted: n_steps,
            rejected: 0,
        },
    })
}

// Dormand–Prince 5(4) tableau.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

// 5th-order weights (advancing solution; b2 = b7 = 0).
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;

// Error weights: 5th-order minus embedded 4th-order.
const E1: f64 = 71.0 / 57_600.0;
const E3: f64 = -71.0 / 16_695.0;
const E4: f64 = 71.0 / 1_920.0;
const E5: f64 = -17_253.0 / 339_200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn rk45_adaptive<S: OdeSystem>(
    system: &S,
    initial: &[f64],
    t0: f64,
    t_end: f64,
    config: &IntegratorConfig,
) -> Result<Trajectory> {
    let n = system.dimension();
    let span = t_end - t0;

    let mut times = vec![t0];
    let mut states = vec![initial.to_vec()];
    let mut stats = StepStats::default();

    let mut t = t0;
    let mut y = initial.to_vec();
    let mut h = config.step.min(span);

    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut k5 = vec![0.0; n];
    let mut k6 = vec![0.0; n];
    let mut k7 = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    let mut y_new = vec![0.0; n];

    eval_rhs(system, t, &y, &mut k1)?;

    let mut total_steps = 0usize;
    while t < t_end {
        total_steps += 1;
        if total_steps > config.max_steps {
            return Err(Error::StepBudgetExhausted {
                max_steps: config.max_steps,
                t,
            });
        }
        // Do not step past the end; guard against a step that underflows t + h.
        h = h.min(t_end - t);
        if t + h <= t {
            return Err(Error::StepBudgetExhausted {
                max_steps: config.max_steps,
                t,
            });
        }

        for j in 0..n {
            tmp[j] = y[j] + h * A21 * k1[j];
        }
        eval_rhs(system, t + C2 * h, &tmp, &mut k2)?;
        for j in 0..n {
            tmp[j] = y[j] + h * (A31 * k1[j] + A32 * k2[j]);
        }
        eval_rhs(system, t + C3 * h, &tmp, &mut k3)?;
        for j in 0..n {
            tmp[j] = y[j] + h * (A41 * k1[j] + A42 * k2[j] + A43 * k3[j]);
        }
        eval_rhs(system, t + C4 * h, &tmp, &mut k4)?;
        for j in 0..n {
            tmp[j] = y[j] + h * (A51 * k1[j] + A52 * k2[j] + A53 * k3[j] + A54 * k4[j]);
        }
        eval_rhs(system, t + C5 * h, &tmp, &mut k5)?;
        for j in 0..n {
            tmp[j] =
                y[j] + h * (A61 * k1[j] + A62 * k2[j] + A63 * k3[j] + A64 * k4[j] + A65 * k5[j]);
        }
        eval_rhs(system, t + h, &tmp, &mut k6)?;
        for j in 0..n {
            y_new[j] = y[j] + h * (B1 * k1[j] + B3 * k3[j] + B4 * k4[j] + B5 * k5[j] + B6 * k6[j]);
        }
        // FSAL stage, also the error-estimate stage.
        eval_rhs(system, t + h, &y_new, &mut k7)?;

        let mut err = 0.0;
        for j in 0..n {
            let e =
                h * (E1 * k1[j] + E3 * k3[j] + E4 * k4[j] + E5 * k5[j] + E6 * k6[j] + E7 * k7[j]);
            let scale = config.abs_tol + config.rel_tol * y[j].abs().max(y_new[j].abs());
            err += (e / scale) * (e / scale);
        }
        err = (err / n as f64).sqrt();

        if err <= 1.0 {
            t += h;
            // Land exactly on t_end once the remaining gap is roundoff-sized.
            if t_end - t < f64::EPSILON * t_end.abs().max(1.0) {
                t = t_end;
            }
            y.copy_from_slice(&y_new);
            k1.copy_from_slice(&k7);
            times.push(t);
            states.push(y.clone());
            stats.accepted += 1;
        } else {
            stats.rejected += 1;
        }

        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
    }

    Ok(Trajectory {
        times,
        states,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn decay() -> FnSystem<impl Fn(f64, &[f64], &mut [f64])> {
        FnSystem::new(1, |_t, y, out| out[0] = -y[0])
    }

    fn tight_adaptive() -> IntegratorConfig {
        IntegratorConfig {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            ..IntegratorConfig::default()
        }
    }

    #[test]
    fn zero_derivative_stays_constant() {
        let sys = FnSystem::new(1, |_t, _y, out| out[0] = 0.0);
        let traj = integrate(&sys, &[5.0], 0.0, 10.0, &IntegratorConfig::default()).unwrap();
        assert!(traj.states.iter().all(|s| s[0] == 5.0));
        assert_eq!(traj.t0(), 0.0);
        assert_eq!(traj.t_end(), 10.0);
    }

    #[test]
    fn exponential_decay_matches_closed_form() {
        // dx/dt = -x, x(0) = 1 -> x(1) = e^{-1}.
        let traj = integrate(&decay(), &[1.0], 0.0, 1.0, &tight_adaptive()).unwrap();
        assert!((traj.final_state()[0] - (-1.0_f64).exp()).abs() < 1e-8);
    }

    #[test]
    fn logistic_matches_closed_form() {
        // dx/dt = x(1-x), x(0) = 1/2 -> x(4) = 1/(1+e^{-4}).
        let sys = FnSystem::new(1, |_t, y, out| out[0] = y[0] * (1.0 - y[0]));
        let traj = integrate(&sys, &[0.5], 0.0, 4.0, &tight_adaptive()).unwrap();
        let expected = 1.0 / (1.0 + (-4.0_f64).exp());
        assert!((traj.final_state()[0] - expected).abs() < 1e-8);
    }

    #[test]
    fn rk4_shows_fourth_order_convergence() {
        // Endpoint error on dx/dt = -x over [0,1] shrinks ~16x per halving.
        let exact = (-1.0_f64).exp();
        let err = |step: f64| {
            let cfg = IntegratorConfig {
                method: Method::FixedRk4,
                step,
                ..IntegratorConfig::default()
            };
            let traj = integrate(&decay(), &[1.0], 0.0, 1.0, &cfg).unwrap();
            (traj.final_state()[0] - exact).abs()
        };
        let (e1, e2, e3) = (err(0.1), err(0.05), err(0.025));
        let r12 = e1 / e2;
        let r23 = e2 / e3;
        assert!((14.0..=18.0).contains(&r12), "ratio {r12} outside [14, 18]");
        assert!((14.0..=18.0).contains(&r23), "ratio {r23} outside [14, 18]");
    }

    #[test]
    fn fixed_grid_lands_exactly_on_t_end() {
        // Span not divisible by the step: last step is shortened.
        let cfg = IntegratorConfig {
            method: Method::FixedRk4,
            step: 0.3,
            ..IntegratorConfig::default()
        };
        let traj = integrate(&decay(), &[1.0], 0.0, 1.0, &cfg).unwrap();
        assert_eq!(traj.t_end(), 1.0);
        assert!(traj.times.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn step_budget_exhaustion_reports_error() {
        let cfg = IntegratorConfig {
            max_steps: 3,
            ..IntegratorConfig::default()
        };
        let err = integrate(&decay(), &[1.0], 0.0, 100.0, &cfg).unwrap_err();
        assert!(matches!(
            err,
            Error::StepBudgetExhausted { max_steps: 3, .. }
        ));
    }

    #[test]
    fn non_finite_derivative_reports_offending_time() {
        let sys = FnSystem::new(1, |t, _y, out| {
            out[0] = if t > 0.5 { f64::NAN } else { 1.0 };
        });
        let err = integrate(&sys, &[0.0], 0.0, 1.0, &IntegratorConfig::default()).unwrap_err();
        match err {
            Error::NonFiniteDerivative { t } => assert!(t > 0.5),
            other => panic!("expected NonFiniteDerivative, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            integrate(&decay(), &[1.0], 1.0, 0.0, &IntegratorConfig::default()),
            Err(Error::BadInterval { .. })
        ));
        assert!(matches!(
            integrate(
                &decay(),
                &[1.0, 2.0],
                0.0,
                1.0,
                &IntegratorConfig::default()
            ),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            integrate(
                &decay(),
                &[f64::NAN],
                0.0,
                1.0,
                &IntegratorConfig::default()
            ),
            Err(Error::InvalidParameter { .. })
        ));
        let cfg = IntegratorConfig {
            abs_tol: 0.0,
            ..IntegratorConfig::default()
        };
        assert!(integrate(&decay(), &[1.0], 0.0, 1.0, &cfg).is_err());
    }

    #[test]
    fn sample_is_exact_at_stored_times_and_linear_between() {
        let traj = Trajectory {
            times: vec![0.0, 1.0],
            states: vec![vec![0.0], vec![2.0]],
            stats: StepStats::default(),
        };
        assert_eq!(traj.sample(&[0.5]).unwrap()[0][0], 1.0);
        assert_eq!(traj.sample(&[0.0]).unwrap()[0][0], 0.0);
        assert_eq!(traj.sample(&[1.0]).unwrap()[0][0], 2.0);
        assert!(matches!(
            traj.sample(&[1.5]),
            Err(Error::SampleOutOfRange { .. })
        ));

        let constant = Trajectory {
            times: vec![0.0, 0.4, 2.0],
            states: vec![vec![3.0], vec![3.0], vec![3.0]],
            stats: StepStats::default(),
        };
        assert_eq!(constant.sample(&[1.3]).unwrap()[0][0], 3.0);
    }

    #[test]
    fn sample_matches_solution_on_uniform_grid() {
        // Against the closed form of dx/dt = -x. Linear interpolation on the
        // accepted grid carries an O(h^2/8) relative error, ~3e-4 for the
        // step sizes these tolerances produce.
        let traj = integrate(&decay(), &[1.0], 0.0, 3.0, &tight_adaptive()).unwrap();
        let queries: Vec<f64> = (0..=300).map(|i| i as f64 / 100.0).collect();
        for (q, row) in queries.iter().zip(traj.sample(&queries).unwrap()) {
            assert_relative_eq!(row[0], (-q).exp(), max_relative = 1e-3);
        }
    }

    #[test]
    fn trajectory_times_strictly_increase() {
        for t_end in [0.37, 1.0, 8.5] {
            let traj =
                integrate(&decay(), &[1.0], 0.0, t_end, &IntegratorConfig::default()).unwrap();
            assert!(traj.times.windows(2).all(|w| w[1] > w[0]));
            assert_eq!(traj.t0(), 0.0);
            assert_eq!(traj.t_end(), t_end);
            assert_eq!(traj.states.len(), traj.times.len());
        }
    }

    proptest::proptest! {
        // Grid and span invariants hold across rates, spans and methods.
        #[test]
        fn grid_invariants_hold_for_linear_systems(
            rate in -3.0f64..3.0,
            t_end in 0.05f64..20.0,
            x0 in -10.0f64..10.0,
            fixed in proptest::bool::ANY,
        ) {
            let sys = FnSystem::new(1, move |_t, y: &[f64], out: &mut [f64]| {
                out[0] = rate * y[0];
            });
            let cfg = IntegratorConfig {
                method: if fixed { Method::FixedRk4 } else { Method::AdaptiveRk45 },
                step: 0.01,
                ..IntegratorConfig::default()
            };
            let traj = integrate(&sys, &[x0], 0.0, t_end, &cfg).unwrap();
            proptest::prop_assert!(traj.times.windows(2).all(|w| w[1] > w[0]));
            proptest::prop_assert_eq!(traj.t0(), 0.0);
            proptest::prop_assert_eq!(traj.t_end(), t_end);
            proptest::prop_assert_eq!(traj.states.len(), traj.times.len());
            let expected = x0 * (rate * t_end).exp();
            let scale = expected.abs().max(1.0);
            proptest::prop_assert!((traj.final_state()[0] - expected).abs() < 1e-5 * scale);
        }

        // Interpolation never leaves the bracket of its two support points.
        #[test]
        fn sample_stays_within_its_bracket(
            values in proptest::collection::vec(-100.0f64..100.0, 2..40),
            q in 0.0f64..1.0,
        ) {
            let n = values.len();
            let times: Vec<f64> = (0..n).map(|i| i as f64).collect();
            let states: Vec<Vec<f64>> = values.iter().map(|v| vec![*v]).collect();
            let traj = Trajectory { times, states, stats: StepStats::default() };
            let tq = q * (n - 1) as f64;
            let sampled = traj.sample(&[tq]).unwrap()[0][0];
            let (lo, hi) = (tq.floor() as usize, tq.ceil() as usize);
            let (a, b) = (values[lo].min(values[hi]), values[lo].max(values[hi]));
            proptest::prop_assert!(sampled >= a - 1e-12 && sampled <= b + 1e-12);
        }
    }
}
