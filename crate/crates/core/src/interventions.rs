//! Health-intervention modeling: the effective reproduction number under
//! antivirals, cell-entry inhibitors, immunomodulators and generalized social
//! distancing, percentage reductions of `R0`, and the comparative-
//! effectiveness ranking of the eight {rho, delta, epsilon} bundles.

use crate::analysis::compute_r0;
use crate::between_host::BetweenHostParams;
use crate::coupling::{compute_nm, derive_nh, CouplingConfig};
use crate::error::{Error, Result};
use crate::within_host::WithinHostParams;
use rayon::prelude::*;

/// Efficacies of the four modeled interventions, each in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InterventionEfficacies {
    /// Antiviral efficacy; scales the burst rate to `alpha (1 - epsilon)`.
    pub epsilon: f64,
    /// Cell-entry-inhibition efficacy; scales the infection rate to
    /// `k (1 - gamma_k)`.
    pub gamma_k: f64,
    /// Immunomodulator efficacy; scales both clearance aggregates to
    /// `x (1 + delta)` and `y (1 + delta)`.
    pub delta: f64,
    /// Social-distancing efficacy; scales transmission to `beta (1 - rho)`.
    pub rho: f64,
}

impl InterventionEfficacies {
    pub fn validate(&self) -> Result<()> {
        let fields: [(&'static str, f64); 4] = [
            ("interventions.epsilon", self.epsilon),
            ("interventions.gamma_k", self.gamma_k),
            ("interventions.delta", self.delta),
            ("interventions.rho", self.rho),
        ];
        for (name, v) in fields {
            if !(0.0..1.0).contains(&v) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("efficacy must lie in [0, 1), got {v}"),
                });
            }
        }
        Ok(())
    }
}

/// One of the eight intervention bundles built from rho, delta and epsilon.
///
/// `gamma_k` is not part of the comparative table (its three-intervention
/// design uses social distancing, immunomodulators and antivirals); it stays
/// available through [`effective_r`] for ad-hoc queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Combo {
    pub rho: bool,
    pub delta: bool,
    pub epsilon: bool,
}

impl Combo {
    /// The eight bundles in table order: none, single, pairs, full.
    pub const ALL: [Combo; 8] = [
        Combo {
            rho: false,
            delta: false,
            epsilon: false,
        },
        Combo {
            rho: true,
            delta: false,
            epsilon: false,
        },
        Combo {
            rho: false,
            delta: true,
            epsilon: false,
        },
        Combo {
            rho: false,
            delta: false,
            epsilon: true,
        },
        Combo {
            rho: true,
            delta: true,
            epsilon: false,
        },
        Combo {
            rho: true,
            delta: false,
            epsilon: true,
        },
        Combo {
            rho: false,
            delta: true,
            epsilon: true,
        },
        Combo {
            rho: true,
            delta: true,
            epsilon: true,
        },
    ];

    /// Subset string such as `"none"`, `"rho+delta"` or
    /// `"rho+delta+epsilon"`.
    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        if self.rho {
            parts.push("rho");
        }
        if self.delta {
            parts.push("delta");
        }
        if self.epsilon {
            parts.push("epsilon");
        }
        if parts.is_empty() {
            "none".to_string()
        } else {
            parts.join("+")
        }
    }

    pub fn cardinality(&self) -> usize {
        usize::from(self.rho) + usize::from(self.delta) + usize::from(self.epsilon)
    }

    pub fn is_subset_of(&self, other: &Combo) -> bool {
        (!self.rho || other.rho) && (!self.delta || other.delta) && (!self.epsilon || other.epsilon)
    }

    /// Efficacies with every active intervention at `level`.
    pub fn at_level(&self, level: f64) -> InterventionEfficacies {
        InterventionEfficacies {
            epsilon: if self.epsilon { level } else { 0.0 },
            gamma_k: 0.0,
            delta: if self.delta { level } else { 0.0 },
            rho: if self.rho { level } else { 0.0 },
        }
    }
}

/// One evaluated bundle at one efficacy level.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectivenessRow {
    pub combo: Combo,
    pub efficacy_level: f64,
    pub r_e: f64,
    pub pct_reduction: f64,
    /// 1 (least effective) through 8 (most effective), by ascending
    /// percentage reduction.
    pub rank: usize,
}

/// The eight ranked bundles at one efficacy level, in table order.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectivenessTable {
    pub level: f64,
    pub r0: f64,
    pub rows: Vec<EffectivenessRow>,
}

/// Serial or parallel evaluation of independent cells; results are
/// byte-identical either way.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    Serial,
    Parallel,
}

/// Effective reproduction number under interventions:
/// `R_E = beta (1 - rho) N_m pi lambda
///        / (mu (mu + pi + gamma1)(mu + gamma2 + d N_m))`,
/// with `N_m` re-derived from the modified within-host dynamics.
/// All-zero efficacies reproduce `R0` exactly.
pub fn effective_r(
    base_bh: &BetweenHostParams,
    base_wh: &WithinHostParams,
    eff: &InterventionEfficacies,
    coupling: &CouplingConfig,
) -> Result<f64> {
    eff.validate()?;
    let n_m = compute_nm(base_wh, eff, coupling)?.n_h;
    let r0_with_nm = compute_r0(&base_bh.with_n_h(n_m))?;
    Ok((1.0 - eff.rho) * r0_with_nm)
}

/// Percentage reduction of `R0`, `(R0 - R_E) / R0 * 100`.
pub fn pct_reduction(r0: f64, r_e: f64) -> Result<f64> {
    if !(r0 > 0.0) {
        return Err(Error::ParameterDomain(format!(
            "percentage reduction needs R0 > 0, got {r0}"
        )));
    }
    Ok((r0 - r_e) / r0 * 100.0)
}

/// Evaluate and rank all eight bundles at each efficacy level.
///
/// Within a level every active intervention runs at that level and ranks are
/// assigned by ascending percentage reduction; ties (possible only for
/// degenerate inputs) break by combo cardinality, then by label.
pub fn effectiveness_table(
    base_bh: &BetweenHostParams,
    base_wh: &WithinHostParams,
    levels: &[f64],
    coupling: &CouplingConfig,
    mode: EvalMode,
) -> Result<Vec<EffectivenessTable>> {
    for level in levels {
        if !(*level > 0.0 && *level < 1.0) {
            return Err(Error::InvalidParameter {
                name: "interventions.levels",
                reason: format!("levels must lie in (0, 1), got {level}"),
            });
        }
    }
    let r0 = compute_r0(&base_bh.with_n_h(derive_nh(base_wh, coupling)?.n_h))?;

    let jobs: Vec<(f64, Combo)> = levels
        .iter()
        .flat_map(|&level| Combo::ALL.iter().map(move |&combo| (level, combo)))
        .collect();
    let evaluate = |&(level, combo): &(f64, Combo)| -> Result<(f64, Combo, f64, f64)> {
        let r_e = effective_r(base_bh, base_wh, &combo.at_level(level), coupling)?;
        Ok((level, combo, r_e, pct_reduction(r0, r_e)?))
    };
    let evaluated: Vec<(f64, Combo, f64, f64)> = match mode {
        EvalMode::Serial => jobs.iter().map(evaluate).collect::<Result<_>>()?,
        EvalMode::Parallel => jobs.par_iter().map(evaluate).collect::<Result<_>>()?,
    };

    let mut tables = Vec::with_capacity(levels.len());
    for &level in levels {
        let per_level: Vec<&(f64, Combo, f64, f64)> =
            evaluated.iter().filter(|(l, ..)| *l == level).collect();
        // Rank by ascending reduction; ties by cardinality then label.
        let mut order: Vec<usize> = (0..per_level.len()).collect();
        order.sort_by(|&a, &b| {
            let (_, ca, _, pa) = per_level[a];
            let (_, cb, _, pb) = per_level[b];
            pa.total_cmp(pb)
                .then(ca.cardinality().cmp(&cb.cardinality()))
                .then(ca.label().cmp(&cb.label()))
        });
        let mut ranks = vec![0usize; per_level.len()];
        for (rank_minus_one, &idx) in order.iter().enumerate() {
            ranks[idx] = rank_minus_one + 1;
        }
        let rows = per_level
            .iter()
            .zip(&ranks)
            .map(|(&&(_, combo, r_e, pct), &rank)| EffectivenessRow {
                combo,
                efficacy_level: level,
                r_e,
                pct_reduction: pct,
                rank,
            })
            .collect();
        tables.push(EffectivenessTable { level, r0, rows });
    }
    Ok(tables)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combo_labels_follow_canonical_order() {
        assert_eq!(Combo::ALL[0].label(), "none");
        assert_eq!(Combo::ALL[4].label(), "rho+delta");
        assert_eq!(Combo::ALL[6].label(), "delta+epsilon");
        assert_eq!(Combo::ALL[7].label(), "rho+delta+epsilon");
        assert_eq!(Combo::ALL[7].cardinality(), 3);
        assert!(Combo::ALL[1].is_subset_of(&Combo::ALL[4]));
        assert!(!Combo::ALL[4].is_subset_of(&Combo::ALL[1]));
    }

    #[test]
    fn efficacies_are_validated() {
        let bad = InterventionEfficacies {
            epsilon: 1.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = InterventionEfficacies {
            rho: -0.1,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        assert!(InterventionEfficacies::default().validate().is_ok());
    }

    #[test]
    fn pct_reduction_algebra() {
        assert_eq!(pct_reduction(2.0, 2.0).unwrap(), 0.0);
        assert_eq!(pct_reduction(2.0, 0.0).unwrap(), 100.0);
        let thirty = pct_reduction(2.0, 0.7 * 2.0).unwrap();
        assert!((thirty - 30.0).abs() < 1e-12);
        assert!(pct_reduction(0.0, 1.0).is_err());
    }

    // The table itself is exercised in the integration suite, where the
    // within-host baseline is available.
}
