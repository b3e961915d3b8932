//! Bound strategies behind a common trait, registered by name.

use serde::{Deserialize, Serialize};

use crate::bipartite::BipartiteOperator;
use crate::error::{Error, Result};

use super::bounds::{BoundsConfig, Certificate};
use super::hermitian::hermitian_upper;
use super::realignment::{lower_bound_realignment, upper_bound_realignment};
use super::robustness::{robustness_upper, RobustnessOutcome};
use super::spectral::upper_bound_spectral;
use super::witness::lower_bound_witness;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    Projective,
    Hermitian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Lower,
    Upper,
}

/// One certified value produced by a strategy.
#[derive(Debug, Clone)]
pub struct Estimate {
    pub method: String,
    pub norm: NormKind,
    pub side: Side,
    pub value: f64,
    pub certificate: Certificate,
}

pub trait BoundStrategy: Send + Sync {
    fn name(&self) -> &'static str;

    /// Whether the lower bounds of this strategy hold for non-Hermitian
    /// operators too.
    fn general(&self) -> bool {
        false
    }

    /// Certified estimates for a Hermitian `d`. Strategies that do not apply
    /// to `d` (for example a positivity requirement) return an empty list.
    fn evaluate(&self, d: &BipartiteOperator, config: &BoundsConfig) -> Result<Vec<Estimate>>;
}

fn estimate(method: &str, norm: NormKind, side: Side, value: f64, certificate: Certificate) -> Estimate {
    Estimate {
        method: method.to_string(),
        norm,
        side,
        value,
        certificate,
    }
}

pub struct TraceNormStrategy;

impl BoundStrategy for TraceNormStrategy {
    fn name(&self) -> &'static str {
        "trace-norm"
    }

    fn general(&self) -> bool {
        true
    }

    fn evaluate(&self, d: &BipartiteOperator, _: &BoundsConfig) -> Result<Vec<Estimate>> {
        Ok(vec![estimate(
            self.name(),
            NormKind::Projective,
            Side::Lower,
            d.trace_norm(),
            Certificate::TraceNorm,
        )])
    }
}

pub struct RealignmentStrategy;

impl BoundStrategy for RealignmentStrategy {
    fn name(&self) -> &'static str {
        "realignment"
    }

    fn general(&self) -> bool {
        true
    }

    fn evaluate(&self, d: &BipartiteOperator, _: &BoundsConfig) -> Result<Vec<Estimate>> {
        let (up, dec) = upper_bound_realignment(d);
        let mut out = vec![estimate(
            self.name(),
            NormKind::Projective,
            Side::Lower,
            lower_bound_realignment(d),
            Certificate::Realignment,
        )];
        if dec.validate(d).valid {
            out.push(estimate(
                self.name(),
                NormKind::Projective,
                Side::Upper,
                up,
                Certificate::Standard(dec),
            ));
        }
        Ok(out)
    }
}

pub struct WitnessStrategy;

impl BoundStrategy for WitnessStrategy {
    fn name(&self) -> &'static str {
        "witness"
    }

    fn evaluate(&self, d: &BipartiteOperator, config: &BoundsConfig) -> Result<Vec<Estimate>> {
        if d.ensure_psd().is_err() {
            return Ok(vec![]);
        }
        let w = lower_bound_witness(d, &config.seesaw)?;
        Ok(vec![estimate(
            self.name(),
            NormKind::Projective,
            Side::Lower,
            w.value,
            Certificate::Witness(w.certificate),
        )])
    }
}

pub struct SpectralStrategy;

impl BoundStrategy for SpectralStrategy {
    fn name(&self) -> &'static str {
        "spectral"
    }

    fn evaluate(&self, d: &BipartiteOperator, _: &BoundsConfig) -> Result<Vec<Estimate>> {
        let (value, dec) = upper_bound_spectral(d)?;
        if !dec.validate(d).valid {
            return Ok(vec![]);
        }
        Ok(vec![estimate(
            self.name(),
            NormKind::Projective,
            Side::Upper,
            value,
            Certificate::Standard(dec),
        )])
    }
}

pub struct HermitianStrategy;

impl BoundStrategy for HermitianStrategy {
    fn name(&self) -> &'static str {
        "hermitian"
    }

    fn evaluate(&self, d: &BipartiteOperator, _: &BoundsConfig) -> Result<Vec<Estimate>> {
        let (value, dec) = hermitian_upper(d)?;
        if !dec.validate(d).valid {
            return Ok(vec![]);
        }
        Ok(vec![estimate(
            self.name(),
            NormKind::Hermitian,
            Side::Upper,
            value,
            Certificate::Signed(dec),
        )])
    }
}

pub struct RobustnessStrategy;

impl BoundStrategy for RobustnessStrategy {
    fn name(&self) -> &'static str {
        "robustness"
    }

    fn evaluate(&self, d: &BipartiteOperator, config: &BoundsConfig) -> Result<Vec<Estimate>> {
        if d.ensure_density().is_err() {
            return Ok(vec![]);
        }
        Ok(match robustness_upper(d, &config.robustness)? {
            RobustnessOutcome::Certified(cert) => vec![estimate(
                self.name(),
                NormKind::Hermitian,
                Side::Upper,
                cert.value,
                Certificate::Signed(cert.decomposition),
            )],
            RobustnessOutcome::NoCertificate { .. } => vec![],
        })
    }
}

/// Named collection of strategies, evaluated in registration order.
pub struct StrategyRegistry {
    strategies: Vec<Box<dyn BoundStrategy>>,
}

impl Default for StrategyRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

impl StrategyRegistry {
    pub fn empty() -> Self {
        Self { strategies: vec![] }
    }

    pub fn builtin() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(TraceNormStrategy));
        r.register(Box::new(RealignmentStrategy));
        r.register(Box::new(WitnessStrategy));
        r.register(Box::new(SpectralStrategy));
        r.register(Box::new(HermitianStrategy));
        r.register(Box::new(RobustnessStrategy));
        r
    }

    /// Adds a strategy, replacing any existing one with the same name.
    pub fn register(&mut self, strategy: Box<dyn BoundStrategy>) {
        match self.strategies.iter().position(|s| s.name() == strategy.name()) {
            Some(i) => self.strategies[i] = strategy,
            None => self.strategies.push(strategy),
        }
    }

    pub fn get(&self, name: &str) -> Option<&dyn BoundStrategy> {
        self.strategies
            .iter()
            .find(|s| s.name() == name)
            .map(|s| s.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.strategies.iter().map(|s| s.name()).collect()
    }

    pub fn strategies(&self) -> &[Box<dyn BoundStrategy>] {
        &self.strategies
    }

    /// Keeps only the named strategies, in the order given.
    pub fn select<S: AsRef<str>>(mut self, names: &[S]) -> Result<Self> {
        let mut picked = Vec::with_capacity(names.len());
        for name in names {
            let name = name.as_ref();
            let i = self
                .strategies
                .iter()
                .position(|s| s.name() == name)
                .ok_or_else(|| {
                    Error::InvalidParameter(format!(
                        "unknown strategy '{name}' (known: {})",
                        self.names().join(", ")
                    ))
                })?;
            picked.push(self.strategies.remove(i));
        }
        Ok(Self { strategies: picked })
    }

    pub fn from_config(config: &BoundsConfig) -> Result<Self> {
        match &config.strategies {
            Some(names) => Self::builtin().select(names),
            None => Ok(Self::builtin()),
        }
    }

    /// Best lower bound among strategies valid for arbitrary operators.
    pub(crate) fn general_lower(
        &self,
        d: &BipartiteOperator,
        config: &BoundsConfig,
    ) -> Result<Estimate> {
        let mut best: Option<Estimate> = None;
        for s in self.strategies.iter().filter(|s| s.general()) {
            for e in s.evaluate(d, config)? {
                if e.side == Side::Lower
                    && e.norm == NormKind::Projective
                    && best.as_ref().is_none_or(|b| e.value > b.value)
                {
                    best = Some(e);
                }
            }
        }
        best.ok_or_else(|| {
            Error::InvalidParameter("strategy selection yields no general lower bound".into())
        })
    }
}
