use serde::Serialize;

use crate::bipartite::linalg::{self, spectral_norm};
use crate::bipartite::{realign, schmidt_decompose, BipartiteOperator, BipartiteVector, CMatrix};
use crate::error::{Error, Result};
use crate::tol::{EPS_HERM, SCHMIDT_CUTOFF};

/// Slack allowed when checking `‖E‖_G ≤ 1` and strict inequalities.
const CHECK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum WitnessKind {
    /// `|c_N⟩⟨c_N|` with `c_N` the flat sum over the first `N` Schmidt pairs.
    EnFamily { n: usize },
    RankOne,
    General,
}

#[derive(Debug, Clone)]
pub struct Witness {
    pub operator: BipartiteOperator,
    /// Upper bound on `‖E‖_G` implied by the construction.
    pub g_norm_certified_upper: f64,
    pub kind: WitnessKind,
    /// Generating vector of rank-one witnesses.
    pub vector: Option<BipartiteVector>,
}

/// `min(‖E‖∞, ‖R(E)‖∞)`: both dominate `|⟨φ⊗ψ, E(η⊗χ)⟩|`.
pub fn general_g_upper(e: &BipartiteOperator) -> f64 {
    spectral_norm(e.matrix()).min(spectral_norm(&realign(e)))
}

impl Witness {
    /// `|c⟩⟨c| / a₁(c)²`, whose injective norm is exactly 1.
    pub fn rank_one(c: &BipartiteVector) -> Result<Self> {
        let a1 = schmidt_decompose(c)?.leading();
        let operator = c.projector().scale(1.0 / (a1 * a1));
        Ok(Self {
            operator,
            g_norm_certified_upper: 1.0,
            kind: WitnessKind::RankOne,
            vector: Some(BipartiteVector::new(c.shape(), c.data().unscale(a1))?),
        })
    }

    /// Any Hermitian operator, rescaled so that its certified injective-norm
    /// bound is 1.
    pub fn general(e: BipartiteOperator) -> Result<Self> {
        e.ensure_hermitian()?;
        let g = general_g_upper(&e);
        if g == 0.0 {
            return Err(Error::InvalidParameter("zero operator is no witness".into()));
        }
        Ok(Self {
            operator: e.scale(1.0 / g),
            g_norm_certified_upper: 1.0,
            kind: WitnessKind::General,
            vector: None,
        })
    }

    /// `Re tr(D E)`.
    pub fn expectation(&self, d: &BipartiteOperator) -> f64 {
        (d.matrix() * self.operator.matrix()).trace().re
    }
}

/// `E_N = |c_N⟩⟨c_N|` for `c_N = Σ_{l≤N} φ_l ⊗ ψ_l` from the Schmidt basis of
/// `v`. Not normalized: `‖E_N‖_G = 1` while `‖E_N‖∞ = N`.
pub fn build_witness_en(v: &BipartiteVector, n: usize) -> Result<Witness> {
    let f = schmidt_decompose(v)?;
    if n == 0 || n > f.rank() {
        return Err(Error::OutOfRange {
            what: "N",
            value: n.to_string(),
            range: format!("[1, {}]", f.rank()),
        });
    }
    let cn = f.flat_sum(n);
    Ok(Witness {
        operator: cn.projector(),
        g_norm_certified_upper: 1.0,
        kind: WitnessKind::EnFamily { n },
        vector: Some(cn),
    })
}

/// Witness detecting a violation of the realignment criterion: the Hermitian
/// part of the operator whose realignment is the conjugate polar factor of
/// `R(D)`, so that `tr(D E) = ‖R(D)‖₁`.
pub fn realignment_witness(d: &BipartiteOperator) -> Result<Witness> {
    let shape = d.shape();
    let (dh, dj) = (shape.dh(), shape.dj());
    let p = linalg::polar_factor(&realign(d), SCHMIDT_CUTOFF);
    let n = shape.dim();
    let e = CMatrix::from_fn(n, n, |r, col| {
        let (j, l) = (r / dj, r % dj);
        let (i, k) = (col / dj, col % dj);
        p[(i * dh + j, k * dj + l)].conj()
    });
    let e = BipartiteOperator::new(shape, linalg::hermitian_part(&e))?;
    Witness::general(e)
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    pub hermitian: bool,
    /// Recomputed from the operator (and generating vector, if any).
    pub g_norm_upper: f64,
    pub operator_norm: f64,
    pub expectation: Option<f64>,
    /// `‖E‖_G ≤ 1` and `|tr(D E)| > 1`.
    pub w1: bool,
    /// `‖E‖∞ > 1 ≥ ‖E‖_G`.
    pub w2: bool,
    /// The stored bound is at least the recomputed one.
    pub bound_holds: bool,
}

impl WitnessReport {
    pub fn detects(&self) -> bool {
        self.hermitian && self.bound_holds && self.w1
    }
}

/// Rechecks a witness independently of how it was built.
pub fn witness_check(w: &Witness, d: Option<&BipartiteOperator>) -> WitnessReport {
    let e = &w.operator;
    let hermitian = linalg::hermitian_deviation(e.matrix()) <= EPS_HERM * linalg::max_abs(e.matrix()).max(1.0);
    let mut g = general_g_upper(e);
    if let Some(v) = &w.vector {
        // For E = s |c⟩⟨c| the injective norm is s·a₁(c)² exactly.
        if let Ok(f) = schmidt_decompose(v) {
            let cc = v.projector();
            let s = (cc.matrix().dotc(e.matrix())).re / cc.matrix().norm_squared();
            let residual = (e.matrix() - cc.matrix().scale(s)).norm();
            if residual <= EPS_HERM * e.matrix().norm().max(1.0) {
                g = g.min(s.abs() * f.leading().powi(2));
            }
        }
    }
    let operator_norm = spectral_norm(e.matrix());
    let expectation = d.map(|d| (d.matrix() * e.matrix()).trace().re);
    let g_ok = g <= 1.0 + CHECK_TOL;
    WitnessReport {
        hermitian,
        g_norm_upper: g,
        operator_norm,
        expectation,
        w1: g_ok && expectation.is_some_and(|t| t.abs() > 1.0 + CHECK_TOL),
        w2: g_ok && operator_norm > 1.0 + CHECK_TOL,
        bound_holds: g <= w.g_norm_certified_upper + CHECK_TOL,
    }
}
