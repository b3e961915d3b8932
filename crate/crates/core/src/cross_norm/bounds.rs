use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bipartite::linalg::c;
use crate::bipartite::{BipartiteOperator, BipartiteVector};
use crate::error::{Error, Result};
use crate::injective::SeeSawConfig;
use crate::tol::PINCH_TOL;

use super::decomposition::{SignedDecomposition, StandardDecomposition};
use super::robustness::RobustnessConfig;
use super::strategy::{Estimate, NormKind, Side, StrategyRegistry};

/// Evidence attached to a bound. Every variant can be rechecked against the
/// target without rerunning the search that produced it.
#[derive(Debug, Clone)]
pub enum Certificate {
    /// `‖D‖₁`, recomputable directly.
    TraceNorm,
    /// `‖R(D)‖₁`, recomputable directly.
    Realignment,
    /// Witness vector `c` with leading Schmidt coefficient 1.
    Witness(BipartiteVector),
    Standard(StandardDecomposition),
    Signed(SignedDecomposition),
    /// Twice a projective upper bound.
    Doubled(Box<Certificate>),
    /// Bounds for the Hermitian parts of `C = C₁ + i C₂`, added.
    Split {
        real: Box<Certificate>,
        imag: Box<Certificate>,
    },
}

#[derive(Debug, Clone)]
pub struct Bound {
    pub value: f64,
    pub method: String,
    pub certificate: Certificate,
}

impl Bound {
    fn from_estimate(e: Estimate) -> Self {
        Self {
            value: e.value,
            method: e.method,
            certificate: e.certificate,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsConfig {
    pub seesaw: SeeSawConfig,
    pub robustness: RobustnessConfig,
    /// Strategy names to run; `None` runs every registered strategy.
    pub strategies: Option<Vec<String>>,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        Self {
            seesaw: SeeSawConfig::default(),
            robustness: RobustnessConfig::default(),
            strategies: None,
        }
    }
}

impl BoundsConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seesaw: SeeSawConfig::with_seed(seed),
            robustness: RobustnessConfig {
                seed,
                ..RobustnessConfig::default()
            },
            strategies: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NormBounds {
    pub pi_lower: Bound,
    pub pi_upper: Bound,
    pub h_lower: Bound,
    pub h_upper: Bound,
    /// Set when the input was not Hermitian and the bounds come from its
    /// Hermitian parts.
    pub indirect: bool,
    /// Every value produced, as `(method, norm, side, value)`.
    pub candidates: Vec<(String, NormKind, Side, f64)>,
}

impl NormBounds {
    /// The common value when the projective bounds agree within the pinch
    /// tolerance.
    pub fn pi_value(&self) -> Option<f64> {
        (self.pi_upper.value - self.pi_lower.value < PINCH_TOL).then_some(self.pi_upper.value)
    }

    pub fn h_value(&self) -> Option<f64> {
        (self.h_upper.value - self.h_lower.value < PINCH_TOL).then_some(self.h_upper.value)
    }
}

/// Picks the best estimate of one kind; ties keep the earliest registry entry.
fn best(estimates: &[Estimate], norm: NormKind, side: Side) -> Option<&Estimate> {
    estimates
        .iter()
        .filter(|e| e.norm == norm && e.side == side)
        .fold(None, |acc: Option<&Estimate>, e| match acc {
            Some(b) if !better(e.value, b.value, side) => acc,
            _ => Some(e),
        })
}

fn better(a: f64, b: f64, side: Side) -> bool {
    match side {
        Side::Lower => a > b,
        Side::Upper => a < b,
    }
}

fn hermitian_bounds(
    d: &BipartiteOperator,
    config: &BoundsConfig,
    registry: &StrategyRegistry,
    supplied: &[StandardDecomposition],
) -> Result<NormBounds> {
    let results: Vec<Result<Vec<Estimate>>> = registry
        .strategies()
        .par_iter()
        .map(|s| s.evaluate(d, config))
        .collect();
    let mut estimates = Vec::new();
    for r in results {
        estimates.extend(r?);
    }
    for (i, dec) in supplied.iter().enumerate() {
        let report = dec.validate(d);
        if report.valid {
            estimates.push(Estimate {
                method: format!("supplied-{i}"),
                norm: NormKind::Projective,
                side: Side::Upper,
                value: report.weight,
                certificate: Certificate::Standard(dec.clone()),
            });
        }
    }
    // A Hermitian decomposition is also a projective one.
    let from_h: Vec<Estimate> = estimates
        .iter()
        .filter(|e| e.norm == NormKind::Hermitian && e.side == Side::Upper)
        .map(|e| Estimate {
            norm: NormKind::Projective,
            certificate: match &e.certificate {
                Certificate::Signed(s) => Certificate::Standard(s.to_standard()),
                other => other.clone(),
            },
            ..e.clone()
        })
        .collect();
    estimates.extend(from_h);

    let missing = |what: &str| {
        Error::InvalidParameter(format!("strategy selection yields no {what} bound"))
    };
    let pi_lower = best(&estimates, NormKind::Projective, Side::Lower)
        .cloned()
        .ok_or_else(|| missing("projective lower"))?;
    let pi_upper = best(&estimates, NormKind::Projective, Side::Upper)
        .cloned()
        .ok_or_else(|| missing("projective upper"))?;
    let doubled = Estimate {
        method: format!("2x{}", pi_upper.method),
        norm: NormKind::Hermitian,
        side: Side::Upper,
        value: 2.0 * pi_upper.value,
        certificate: Certificate::Doubled(Box::new(pi_upper.certificate.clone())),
    };
    let h_upper = best(&estimates, NormKind::Hermitian, Side::Upper)
        .filter(|e| e.value <= doubled.value)
        .cloned()
        .unwrap_or(doubled);
    let candidates = estimates
        .iter()
        .map(|e| (e.method.clone(), e.norm, e.side, e.value))
        .collect();
    let h_lower = Bound::from_estimate(pi_lower.clone());
    Ok(NormBounds {
        pi_lower: Bound::from_estimate(pi_lower),
        pi_upper: Bound::from_estimate(pi_upper),
        h_lower,
        h_upper: Bound::from_estimate(h_upper),
        indirect: false,
        candidates,
    })
}

fn merge_split(re: &StandardDecomposition, im: &StandardDecomposition) -> StandardDecomposition {
    let mut out = re.clone();
    for t in &im.terms {
        out.push(t.weight, t.left.map(|z| z * c(0.0, 1.0)), t.right.clone());
    }
    out
}

fn split_upper(re: Bound, im: Bound) -> Bound {
    let certificate = match (&re.certificate, &im.certificate) {
        (Certificate::Standard(a), Certificate::Standard(b)) => {
            Certificate::Standard(merge_split(a, b))
        }
        _ => Certificate::Split {
            real: Box::new(re.certificate),
            imag: Box::new(im.certificate),
        },
    };
    Bound {
        value: re.value + im.value,
        method: format!("indirect:{}+{}", re.method, im.method),
        certificate,
    }
}

/// Bounds with an explicit registry and additional user decompositions.
pub fn pi_bounds_with(
    d: &BipartiteOperator,
    config: &BoundsConfig,
    registry: &StrategyRegistry,
    supplied: &[StandardDecomposition],
) -> Result<NormBounds> {
    crate::bipartite::linalg::ensure_finite(d.matrix())?;
    if d.is_hermitian() {
        return hermitian_bounds(d, config, registry, supplied);
    }
    // C = C₁ + i C₂; the triangle inequality bounds each norm by the sum over
    // the parts. Lower bounds that hold for every operator are taken on C.
    let c1 = d.hermitian_part();
    let c2 = d.anti_hermitian_part();
    let b1 = hermitian_bounds(&c1, config, registry, &[])?;
    let b2 = hermitian_bounds(&c2, config, registry, &[])?;
    let lower = registry.general_lower(d, config)?;
    let pi_lower = Bound::from_estimate(lower);
    let pi_upper = split_upper(b1.pi_upper, b2.pi_upper);
    let mut pi_upper = pi_upper;
    for (i, dec) in supplied.iter().enumerate() {
        let report = dec.validate(d);
        if report.valid && report.weight < pi_upper.value {
            pi_upper = Bound {
                value: report.weight,
                method: format!("supplied-{i}"),
                certificate: Certificate::Standard(dec.clone()),
            };
        }
    }
    let h_sum = split_upper(b1.h_upper, b2.h_upper);
    let h_upper = if h_sum.value <= 2.0 * pi_upper.value {
        h_sum
    } else {
        Bound {
            value: 2.0 * pi_upper.value,
            method: format!("2x{}", pi_upper.method),
            certificate: Certificate::Doubled(Box::new(pi_upper.certificate.clone())),
        }
    };
    let mut candidates = b1.candidates;
    candidates.extend(b2.candidates);
    Ok(NormBounds {
        h_lower: pi_lower.clone(),
        pi_lower,
        pi_upper,
        h_upper,
        indirect: true,
        candidates,
    })
}

/// Certified bounds on `‖D‖_π` and `‖D‖_H` from the strategies named in
/// `config` (all built-in ones by default).
pub fn pi_bounds(d: &BipartiteOperator, config: &BoundsConfig) -> Result<NormBounds> {
    let registry = StrategyRegistry::from_config(config)?;
    pi_bounds_with(d, config, &registry, &[])
}

/// The entanglement function. At finite dimension every state is a cross
/// state, so it coincides with the projective norm and the bounds are those
/// of [`pi_bounds`]; the input must be a density.
pub fn ent(d: &BipartiteOperator, config: &BoundsConfig) -> Result<NormBounds> {
    d.ensure_density()?;
    pi_bounds(d, config)
}
