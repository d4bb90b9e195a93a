//! Configuration loading: TOML schema, `--set` overrides, validation into
//! core parameter types, and normalized re-emission.
//!
//! Unknown keys are rejected everywhere. Validation errors name the
//! offending field. Overrides are applied to the parsed TOML document
//! before deserialization, so they win over file values and are validated
//! identically.

use crate::CliError;
use msei_core::{
    BetweenHostParams, BetweenHostState, CouplingConfig, IntegratorConfig, InterventionEfficacies,
    Method, WithinHostParams, WithinHostState,
};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

/// The bundled default scenario.
pub const BASELINE_TOML: &str = include_str!(concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/../../configs/baseline.toml"
));

// ---------------------------------------------------------------------------
// Raw schema (exactly what the file says, defaults not yet applied)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub within_host: RawWithinHost,
    pub between_host: RawBetweenHost,
    #[serde(default)]
    pub coupling: RawCoupling,
    #[serde(default)]
    pub interventions: RawInterventions,
    #[serde(default)]
    pub output: RawOutput,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawWithinHost {
    pub omega: f64,
    pub k: f64,
    pub mu_c: f64,
    pub mu_v: f64,
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_rates: Option<[f64; 6]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_rates: Option<[f64; 6]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
    #[serde(default = "default_wh_horizon")]
    pub horizon: f64,
    pub initial: RawWithinHostInitial,
}

fn default_wh_horizon() -> f64 {
    30.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawWithinHostInitial {
    pub u: f64,
    pub u_star: f64,
    pub v: f64,
}

/// Recruitment is either an explicit number or the literal `"auto"`,
/// meaning `mu * (s + e + i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LambdaSpec {
    Value(f64),
    Keyword(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawBetweenHost {
    pub lambda: LambdaSpec,
    pub beta: f64,
    pub mu: f64,
    pub pi: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub d: f64,
    #[serde(default = "default_bh_horizon")]
    pub horizon: f64,
    pub initial: RawBetweenHostInitial,
}

fn default_bh_horizon() -> f64 {
    500.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawBetweenHostInitial {
    pub s: f64,
    pub e: f64,
    pub i: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RawCoupling {
    pub detection_limit: f64,
    pub integrator: RawIntegrator,
}

impl Default for RawCoupling {
    fn default() -> Self {
        Self {
            detection_limit: 0.0,
            integrator: RawIntegrator::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RawIntegrator {
    pub method: String,
    pub step: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_steps: usize,
}

impl Default for RawIntegrator {
    fn default() -> Self {
        let d = IntegratorConfig::default();
        Self {
            method: "adaptive_rk45".to_string(),
            step: d.step,
            abs_tol: d.abs_tol,
            rel_tol: d.rel_tol,
            max_steps: d.max_steps,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct RawInterventions {
    pub epsilon: f64,
    pub gamma_k: f64,
    pub delta: f64,
    pub rho: f64,
    pub levels: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct RawOutput {
    pub directory: Option<String>,
    pub format: Option<String>,
}

// ---------------------------------------------------------------------------
// Validated scenario
// ---------------------------------------------------------------------------

/// A fully validated scenario: core parameter types plus run settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub within_host: WithinHostParams,
    pub wh_initial: WithinHostState,
    pub wh_horizon: f64,
    /// Between-host rates; the coupling constant is derived per run, so the
    /// template carries `n_h = 0` until [`Scenario::between_host`] fills it.
    bh_template: BetweenHostParams,
    pub bh_initial: BetweenHostState,
    pub bh_horizon: f64,
    pub coupling: CouplingConfig,
    pub efficacies: InterventionEfficacies,
    pub levels: Vec<f64>,
    pub out_dir: Option<PathBuf>,
    raw: RawConfig,
}

impl Scenario {
    /// Between-host parameters with the derived coupling constant.
    pub fn between_host(&self, n_h: f64) -> BetweenHostParams {
        self.bh_template.with_n_h(n_h)
    }

    /// Normalized re-emission of the configuration (defaults applied,
    /// overrides folded in). Loading the emitted text reproduces this
    /// scenario exactly.
    pub fn to_normalized_toml(&self) -> String {
        toml::to_string_pretty(&self.raw).expect("raw config serializes")
    }
}

fn invalid(field: &str, reason: impl AsRef<str>) -> CliError {
    CliError::Config(format!("invalid value for {field}: {}", reason.as_ref()))
}

fn numeric(err: msei_core::Error) -> CliError {
    CliError::Config(err.to_string())
}

/// Parse one `--set key=value` override.
pub fn parse_override(spec: &str) -> Result<(String, toml::Value), CliError> {
    let (key, value_text) = spec.split_once('=').ok_or_else(|| {
        CliError::Usage(format!("override '{spec}' is not of the form key=value"))
    })?;
    if key.is_empty() {
        return Err(CliError::Usage(format!(
            "override '{spec}' has an empty key"
        )));
    }
    // Parse the right-hand side as a TOML value; bare words fall back to
    // strings so `--set between_host.lambda=auto` works unquoted.
    let parsed = format!("v = {value_text}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(value_text.to_string()));
    Ok((key.to_string(), parsed))
}

/// Apply dotted-path overrides to a parsed TOML document. Intermediate
/// tables are created as needed; leaf keys land in the table they name and
/// are validated by the schema afterwards.
pub fn apply_overrides(
    table: &mut toml::Table,
    overrides: &[(String, toml::Value)],
) -> Result<(), CliError> {
    for (path, value) in overrides {
        let mut parts = path.split('.').collect::<Vec<_>>();
        let leaf = parts.pop().expect("split yields at least one part");
        let mut cursor = &mut *table;
        for part in parts {
            let entry = cursor
                .entry(part.to_string())
                .or_insert_with(|| toml::Value::Table(toml::Table::new()));
            cursor = entry.as_table_mut().ok_or_else(|| {
                CliError::Config(format!(
                    "override '{path}' traverses '{part}', which is not a table"
                ))
            })?;
        }
        cursor.insert(leaf.to_string(), value.clone());
    }
    Ok(())
}

/// Load, override and validate a configuration from TOML text.
pub fn load_config(text: &str, overrides: &[(String, toml::Value)]) -> Result<Scenario, CliError> {
    let mut table = text
        .parse::<toml::Table>()
        .map_err(|e| CliError::Config(format!("config parse error: {e}")))?;
    apply_overrides(&mut table, overrides)?;
    let patched = toml::to_string(&table).expect("parsed table re-serializes");
    let raw: RawConfig =
        toml::from_str(&patched).map_err(|e| CliError::Config(format!("config error: {e}")))?;
    validate(raw)
}

fn validate(raw: RawConfig) -> Result<Scenario, CliError> {
    let wh = &raw.within_host;
    let within_host = match (wh.d_rates, wh.x) {
        (Some(_), Some(_)) => {
            return Err(invalid(
                "within_host.d_rates/x",
                "give the six d-rates or the aggregate x, not both",
            ))
        }
        (None, None) => {
            return Err(invalid(
                "within_host.d_rates/x",
                "one of the six d-rates or the aggregate x is required",
            ))
        }
        (Some(d_rates), None) => {
            let b_rates = match (wh.b_rates, wh.y) {
                (Some(b), None) => b,
                (None, Some(_)) | (None, None) => {
                    return Err(invalid(
                        "within_host.b_rates",
                        "six b-rates are required when d_rates are given",
                    ))
                }
                (Some(_), Some(_)) => {
                    return Err(invalid(
                        "within_host.b_rates/y",
                        "give the six b-rates or the aggregate y, not both",
                    ))
                }
            };
            WithinHostParams::from_rates(
                wh.omega, wh.k, wh.mu_c, wh.mu_v, wh.alpha, d_rates, b_rates,
            )
            .map_err(numeric)?
        }
        (None, Some(x)) => {
            let y = match (wh.b_rates, wh.y) {
                (None, Some(y)) => y,
                _ => {
                    return Err(invalid(
                        "within_host.y",
                        "the aggregate y is required when x is given",
                    ))
                }
            };
            WithinHostParams::from_aggregates(wh.omega, wh.k, wh.mu_c, wh.mu_v, wh.alpha, x, y)
                .map_err(numeric)?
        }
    };

    let wh_initial = WithinHostState::new(wh.initial.u, wh.initial.u_star, wh.initial.v);
    if wh_initial.as_array().iter().any(|v| !(*v >= 0.0)) {
        return Err(invalid("within_host.initial", "components must be >= 0"));
    }
    if !(wh.horizon > 0.0) {
        return Err(invalid("within_host.horizon", "must be > 0"));
    }

    let bh = &raw.between_host;
    let bh_initial = BetweenHostState::new(bh.initial.s, bh.initial.e, bh.initial.i);
    if bh_initial.as_array().iter().any(|v| !(*v >= 0.0)) {
        return Err(invalid("between_host.initial", "components must be >= 0"));
    }
    let lambda = match &bh.lambda {
        LambdaSpec::Value(v) => *v,
        LambdaSpec::Keyword(word) if word == "auto" => bh.mu * bh_initial.total(),
        LambdaSpec::Keyword(word) => {
            return Err(invalid(
                "between_host.lambda",
                format!("expected a number or \"auto\", got \"{word}\""),
            ))
        }
    };
    let bh_template = BetweenHostParams {
        lambda,
        beta: bh.beta,
        mu: bh.mu,
        pi: bh.pi,
        gamma1: bh.gamma1,
        gamma2: bh.gamma2,
        d: bh.d,
        n_h: 0.0,
    };
    bh_template.validate().map_err(numeric)?;
    if !(bh.horizon > 0.0) {
        return Err(invalid("between_host.horizon", "must be > 0"));
    }

    let method = match raw.coupling.integrator.method.as_str() {
        "adaptive_rk45" => Method::AdaptiveRk45,
        "fixed_rk4" => Method::FixedRk4,
        other => {
            return Err(invalid(
                "coupling.integrator.method",
                format!("expected \"adaptive_rk45\" or \"fixed_rk4\", got \"{other}\""),
            ))
        }
    };
    let integrator = IntegratorConfig {
        method,
        step: raw.coupling.integrator.step,
        abs_tol: raw.coupling.integrator.abs_tol,
        rel_tol: raw.coupling.integrator.rel_tol,
        max_steps: raw.coupling.integrator.max_steps,
    };
    integrator.validate().map_err(numeric)?;
    if !(raw.coupling.detection_limit >= 0.0) {
        return Err(invalid("coupling.detection_limit", "must be >= 0"));
    }

    let efficacies = InterventionEfficacies {
        epsilon: raw.interventions.epsilon,
        gamma_k: raw.interventions.gamma_k,
        delta: raw.interventions.delta,
        rho: raw.interventions.rho,
    };
    efficacies.validate().map_err(numeric)?;
    let levels = raw
        .interventions
        .levels
        .clone()
        .unwrap_or_else(|| vec![0.3, 0.6, 0.9]);
    for level in &levels {
        if !(*level > 0.0 && *level < 1.0) {
            return Err(invalid("interventions.levels", "levels must lie in (0, 1)"));
        }
    }

    if let Some(format) = raw.output.format.as_deref() {
        if format != "csv" {
            return Err(invalid(
                "output.format",
                format!("only \"csv\" is supported, got \"{format}\""),
            ));
        }
    }

    Ok(Scenario {
        within_host,
        wh_initial,
        wh_horizon: wh.horizon,
        bh_template,
        bh_initial,
        bh_horizon: bh.horizon,
        coupling: CouplingConfig {
            initial: wh_initial,
            horizon: wh.horizon,
            detection_limit: raw.coupling.detection_limit,
            integrator,
        },
        efficacies,
        levels,
        out_dir: raw.output.directory.as_ref().map(PathBuf::from),
        raw,
    })
}
