//! Simple-tensor decompositions and their independent validation.
//!
//! Any valid standard decomposition `C = Σ r_k X_k ⊗ Y_k` with
//! `‖X_k‖₁ ‖Y_k‖₁ = 1` certifies `‖C‖_π ≤ Σ r_k`; a signed decomposition
//! over product densities certifies the Hermitian norm the same way.

use serde::Serialize;

use crate::bipartite::linalg::{self, is_hermitian, min_eigenvalue, nuclear_norm};
use crate::bipartite::{BipartiteOperator, CMatrix, Shape};
use crate::tol::{EPS_PSD, EPS_TRACE, VALIDATE_TOL};

#[derive(Debug, Clone, PartialEq)]
pub struct SimpleTerm {
    pub weight: f64,
    pub left: CMatrix,
    pub right: CMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StandardDecomposition {
    pub shape: Shape,
    pub terms: Vec<SimpleTerm>,
}

impl StandardDecomposition {
    pub fn new(shape: Shape) -> Self {
        Self {
            shape,
            terms: vec![],
        }
    }

    pub fn push(&mut self, weight: f64, left: CMatrix, right: CMatrix) {
        self.terms.push(SimpleTerm {
            weight,
            left,
            right,
        });
    }

    /// `Σ r_k`.
    pub fn weight(&self) -> f64 {
        self.terms.iter().map(|t| t.weight).sum()
    }

    pub fn reconstruct(&self) -> CMatrix {
        let n = self.shape.dim();
        let mut m = CMatrix::zeros(n, n);
        for t in &self.terms {
            m += linalg::kron(&t.left, &t.right).scale(t.weight);
        }
        m
    }

    pub fn validate(&self, target: &BipartiteOperator) -> ValidationReport {
        validate_standard(target, self)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProductTerm {
    pub coeff: f64,
    pub rho: CMatrix,
    pub sigma: CMatrix,
}

/// `Σ t_k ρ_k ⊗ σ_k` with real `t_k` and product densities.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedDecomposition {
    pub shape: Shape,
    pub terms: Vec<ProductTerm>,
}

impl SignedDecomposition {
    pub fn new(shape: Shape) -> Self {
        Self {
            shape,
            terms: vec![],
        }
    }

    pub fn push(&mut self, coeff: f64, rho: CMatrix, sigma: CMatrix) {
        self.terms.push(ProductTerm { coeff, rho, sigma });
    }

    /// `Σ_{t>0} t`.
    pub fn alpha(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff).filter(|&t| t > 0.0).sum()
    }

    /// `Σ |t|`.
    pub fn hermitian_weight(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.abs()).sum()
    }

    /// `Σ t`.
    pub fn total(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff).sum()
    }

    pub fn is_positive(&self) -> bool {
        self.terms.iter().all(|t| t.coeff > 0.0)
    }

    pub fn reconstruct(&self) -> CMatrix {
        let n = self.shape.dim();
        let mut m = CMatrix::zeros(n, n);
        for t in &self.terms {
            m += linalg::kron(&t.rho, &t.sigma).scale(t.coeff);
        }
        m
    }

    /// The normalized separable parts `(D₁, D₂)` of `D = α D₁ − (α−1) D₂`.
    /// `D₂` is `None` when no coefficient is negative.
    pub fn robustness_parts(&self) -> (Option<CMatrix>, Option<CMatrix>) {
        let n = self.shape.dim();
        let mut pos = CMatrix::zeros(n, n);
        let mut neg = CMatrix::zeros(n, n);
        let (mut wp, mut wn) = (0.0, 0.0);
        for t in &self.terms {
            let k = linalg::kron(&t.rho, &t.sigma);
            if t.coeff > 0.0 {
                pos += k.scale(t.coeff);
                wp += t.coeff;
            } else if t.coeff < 0.0 {
                neg += k.scale(-t.coeff);
                wn -= t.coeff;
            }
        }
        (
            (wp > 0.0).then(|| pos.unscale(wp)),
            (wn > 0.0).then(|| neg.unscale(wn)),
        )
    }

    /// The Hermitian standard decomposition `Σ |t_k| (sgn(t_k) ρ_k) ⊗ σ_k`.
    pub fn to_standard(&self) -> StandardDecomposition {
        let mut out = StandardDecomposition::new(self.shape);
        for t in &self.terms {
            let sign = if t.coeff < 0.0 { -1.0 } else { 1.0 };
            out.push(t.coeff.abs(), t.rho.scale(sign), t.sigma.clone());
        }
        out
    }

    pub fn validate(&self, target: &BipartiteOperator) -> ValidationReport {
        validate_signed(target, self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecompositionKind {
    Standard,
    Signed,
    Positive,
}

/// Outcome of checking a decomposition against its target. Never an error:
/// invalid decompositions are reported, not rejected.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub kind: DecompositionKind,
    pub valid: bool,
    pub weight: f64,
    /// Trace norm of `target − Σ terms`.
    pub reconstruction_error: f64,
    pub tolerance: f64,
    pub normalization_ok: bool,
    pub factors_ok: bool,
    /// The weight is a certified upper bound on `‖target‖_π` (and on the
    /// Hermitian norm for signed decompositions).
    pub certifies_upper_bound: bool,
    /// Weight equals `‖target‖₁` within tolerance, so the decomposition is
    /// optimal for both `‖·‖_π` and `‖·‖_H`.
    pub certified_optimal: bool,
    pub issues: Vec<String>,
}

fn tolerance_for(target: &BipartiteOperator) -> f64 {
    VALIDATE_TOL * target.trace_norm().max(1.0)
}

pub fn validate_standard(
    target: &BipartiteOperator,
    dec: &StandardDecomposition,
) -> ValidationReport {
    let tol = tolerance_for(target);
    let mut issues = vec![];
    let shape_ok = dec.shape == target.shape();
    if !shape_ok {
        issues.push(format!("shape {} does not match target {}", dec.shape, target.shape()));
    }
    let mut normalization_ok = true;
    let mut factors_ok = true;
    for (k, t) in dec.terms.iter().enumerate() {
        if !(t.weight >= 0.0 && t.weight.is_finite()) {
            factors_ok = false;
            issues.push(format!("term {k}: weight {} is not a nonnegative number", t.weight));
        }
        if t.left.shape() != (dec.shape.dh(), dec.shape.dh())
            || t.right.shape() != (dec.shape.dj(), dec.shape.dj())
        {
            factors_ok = false;
            issues.push(format!("term {k}: factor dimensions do not match the shape"));
            continue;
        }
        let n = nuclear_norm(&t.left) * nuclear_norm(&t.right);
        if (n - 1.0).abs() > 1e-9 {
            normalization_ok = false;
            issues.push(format!("term {k}: normalization violation, ‖X‖₁‖Y‖₁ = {n:.12}"));
        }
    }
    let error = if shape_ok && factors_ok {
        nuclear_norm(&(target.matrix() - dec.reconstruct()))
    } else {
        f64::INFINITY
    };
    if error > tol {
        issues.push(format!("reconstruction error {error:.3e} exceeds {tol:.3e}"));
    }
    let weight = dec.weight();
    let valid = shape_ok && factors_ok && normalization_ok && error <= tol;
    ValidationReport {
        kind: DecompositionKind::Standard,
        valid,
        weight,
        reconstruction_error: error,
        tolerance: tol,
        normalization_ok,
        factors_ok,
        certifies_upper_bound: valid,
        certified_optimal: valid && weight <= target.trace_norm() + tol,
        issues,
    }
}

fn is_local_density(m: &CMatrix, dim: usize) -> bool {
    m.shape() == (dim, dim) && is_hermitian(m) && min_eigenvalue(m) >= -EPS_PSD
}

pub fn validate_signed(target: &BipartiteOperator, dec: &SignedDecomposition) -> ValidationReport {
    let tol = tolerance_for(target);
    let mut issues = vec![];
    let shape_ok = dec.shape == target.shape();
    if !shape_ok {
        issues.push(format!("shape {} does not match target {}", dec.shape, target.shape()));
    }
    let mut normalization_ok = true;
    let mut factors_ok = true;
    for (k, t) in dec.terms.iter().enumerate() {
        if !t.coeff.is_finite() {
            factors_ok = false;
            issues.push(format!("term {k}: coefficient is not finite"));
        }
        if !is_local_density(&t.rho, dec.shape.dh()) || !is_local_density(&t.sigma, dec.shape.dj())
        {
            factors_ok = false;
            issues.push(format!("term {k}: factors are not positive semidefinite"));
            continue;
        }
        let (tr_r, tr_s) = (t.rho.trace(), t.sigma.trace());
        if (tr_r.re - 1.0).abs() > EPS_TRACE * 10.0 || (tr_s.re - 1.0).abs() > EPS_TRACE * 10.0 {
            normalization_ok = false;
            issues.push(format!(
                "term {k}: normalization violation, traces {:.12} and {:.12}",
                tr_r.re, tr_s.re
            ));
        }
    }
    let error = if shape_ok && factors_ok {
        nuclear_norm(&(target.matrix() - dec.reconstruct()))
    } else {
        f64::INFINITY
    };
    if error > tol {
        issues.push(format!("reconstruction error {error:.3e} exceeds {tol:.3e}"));
    }
    let trace = target.trace().re;
    if (dec.total() - trace).abs() > tol {
        issues.push(format!(
            "coefficients sum to {:.12}, target trace is {trace:.12}",
            dec.total()
        ));
    }
    let weight = dec.hermitian_weight();
    let valid = shape_ok && factors_ok && normalization_ok && error <= tol;
    let positive = dec.is_positive();
    ValidationReport {
        kind: if positive {
            DecompositionKind::Positive
        } else {
            DecompositionKind::Signed
        },
        valid,
        weight,
        reconstruction_error: error,
        tolerance: tol,
        normalization_ok,
        factors_ok,
        certifies_upper_bound: valid,
        certified_optimal: valid && weight <= target.trace_norm() + tol,
        issues,
    }
}
