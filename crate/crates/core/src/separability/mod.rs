//! Separability classification by the cross-norm criterion: a state is
//! separable exactly when its projective norm equals 1.

pub mod gallery;
mod ppt;
mod witness;

use serde::{Deserialize, Serialize};

use crate::bipartite::BipartiteOperator;
use crate::cross_norm::{
    lower_bound_witness, pi_bounds, robustness_upper, BoundsConfig, NormBounds, RobustnessConfig,
    RobustnessOutcome, SignedDecomposition,
};
use crate::error::Result;
use crate::tol::{PINCH_TOL, VALIDATE_TOL};

pub use ppt::{ppt_oracle, PptReport};
pub use witness::{
    build_witness_en, general_g_upper, realignment_witness, witness_check, Witness, WitnessKind,
    WitnessReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Separable,
    Entangled,
    Undecided,
}

#[derive(Debug, Clone)]
pub enum Evidence {
    /// Positive product decomposition with weights summing to 1.
    Mixture(SignedDecomposition),
    /// Witness with certified `‖E‖_G ≤ 1` and `tr(D E) > 1`.
    Witness { witness: Witness, expectation: f64 },
    Bounds(Box<NormBounds>),
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub verdict: Verdict,
    pub evidence: Evidence,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyConfig {
    pub bounds: BoundsConfig,
    /// Budget of the search for a positive product decomposition.
    pub separable_search: RobustnessConfig,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        Self::with_seed(0)
    }
}

impl ClassifyConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            bounds: BoundsConfig::with_seed(seed),
            separable_search: RobustnessConfig {
                max_atoms: 400,
                atoms_per_iter: 8,
                seed,
                ..RobustnessConfig::default()
            },
        }
    }
}

fn entangled(d: &BipartiteOperator, config: &ClassifyConfig) -> Result<Option<Evidence>> {
    let mut found: Option<(Witness, f64)> = None;
    let mut consider = |w: Witness| {
        let t = w.expectation(d);
        if t > 1.0 + PINCH_TOL && found.as_ref().is_none_or(|(_, best)| t > *best) {
            found = Some((w, t));
        }
    };
    let wb = lower_bound_witness(d, &config.bounds.seesaw)?;
    if wb.value > 1.0 + PINCH_TOL {
        consider(Witness::rank_one(&wb.certificate)?);
    }
    if crate::cross_norm::lower_bound_realignment(d) > 1.0 + PINCH_TOL {
        consider(realignment_witness(d)?);
    }
    Ok(found.and_then(|(witness, expectation)| {
        witness_check(&witness, Some(d))
            .detects()
            .then_some(Evidence::Witness {
                witness,
                expectation,
            })
    }))
}

fn accepts_mixture(d: &BipartiteOperator, dec: &SignedDecomposition) -> bool {
    let report = dec.validate(d);
    report.valid
        && dec.is_positive()
        && (dec.total() - 1.0).abs() <= VALIDATE_TOL
        && dec.hermitian_weight() <= 1.0 + PINCH_TOL
}

/// Classifies a density. Entanglement is checked first with certified lower
/// bounds, then a positive product decomposition is searched; if neither
/// succeeds the verdict is undecided and the computed bounds are returned.
pub fn classify(d: &BipartiteOperator, config: &ClassifyConfig) -> Result<Classification> {
    classify_with_hint(d, config, None)
}

/// As [`classify`], accepting a candidate product mixture that is used as the
/// separability certificate if it validates.
pub fn classify_with_hint(
    d: &BipartiteOperator,
    config: &ClassifyConfig,
    hint: Option<&SignedDecomposition>,
) -> Result<Classification> {
    d.ensure_density()?;
    if let Some(evidence) = entangled(d, config)? {
        return Ok(Classification {
            verdict: Verdict::Entangled,
            evidence,
        });
    }
    if let Some(h) = hint.filter(|h| accepts_mixture(d, h)) {
        return Ok(Classification {
            verdict: Verdict::Separable,
            evidence: Evidence::Mixture(h.clone()),
        });
    }
    if let RobustnessOutcome::Certified(cert) = robustness_upper(d, &config.separable_search)? {
        if accepts_mixture(d, &cert.decomposition) {
            return Ok(Classification {
                verdict: Verdict::Separable,
                evidence: Evidence::Mixture(cert.decomposition),
            });
        }
    }
    Ok(Classification {
        verdict: Verdict::Undecided,
        evidence: Evidence::Bounds(Box::new(pi_bounds(d, &config.bounds)?)),
    })
}
