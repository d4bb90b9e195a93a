//! Error type shared by every module of the toolkit.

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes of the toolkit.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// The step budget ran out before the integrator reached `t_end`.
    #[error("integration budget exhausted after {max_steps} steps at t = {t:e}")]
    StepBudgetExhausted { max_steps: usize, t: f64 },

    /// The right-hand side produced a NaN or infinite derivative.
    #[error("non-finite derivative encountered at t = {t:e}")]
    NonFiniteDerivative { t: f64 },

    /// Initial state length does not match the system dimension.
    #[error("dimension mismatch: initial state has length {got}, system dimension is {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Integration interval is empty or reversed.
    #[error("invalid integration interval: t_end = {t_end} must exceed t0 = {t0}")]
    BadInterval { t0: f64, t_end: f64 },

    /// A configuration or parameter value violates its documented invariant.
    #[error("invalid value for {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Interpolation query outside the stored trajectory span.
    #[error("query time {t} outside trajectory range [{t0}, {t_end}]")]
    SampleOutOfRange { t: f64, t0: f64, t_end: f64 },

    /// The viral load never reaches the detection limit.
    #[error("viral load never reaches the detection limit {limit}")]
    EmptyDetectionWindow { limit: f64 },

    /// A closed-form expression was evaluated outside its parameter domain.
    #[error("parameter domain error: {0}")]
    ParameterDomain(String),

    /// The cubic solver needs a nonzero leading coefficient.
    #[error("cubic leading coefficient must be nonzero")]
    DegenerateCubic,

    /// Bifurcation quantities are undefined without transmission.
    #[error("no transmission: N_h must be positive")]
    NoTransmission,

    /// Elasticities are undefined when R0 vanishes.
    #[error("elasticity undefined: R0 = 0 at the evaluation point")]
    UndefinedElasticity,

    /// A sweep referenced a parameter name that does not exist.
    #[error("unknown parameter name: {0}")]
    UnknownParameter(String),
}
