//! Injective norm `‖L‖_G = sup |⟨φ⊗ψ, L(η⊗χ)⟩|` over unit product vectors.
//!
//! Closed forms are used where they are exact (simple tensors, rank-one
//! positive operators); otherwise a see-saw ascent produces a certified
//! lower bound, while `‖L‖∞` is always a certified upper bound.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bipartite::linalg::{self, c, kron_vec};
use crate::bipartite::{
    operator_schmidt, random_unit_vector, schmidt_decompose, BipartiteOperator, BipartiteVector,
    CMatrix, CVector, C64,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeeSawConfig {
    pub restarts: usize,
    pub max_iters: usize,
    /// Relative objective change below which a sweep counts as stalled.
    pub tol: f64,
    pub seed: u64,
}

impl Default for SeeSawConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iters: 500,
            tol: 1e-10,
            seed: 0,
        }
    }
}

impl SeeSawConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iters == 0 {
            return Err(Error::InvalidParameter(
                "restarts and max_iters must be positive".into(),
            ));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "tol must lie in (0, 1), got {}",
                self.tol
            )));
        }
        Ok(())
    }

    /// Independent generator for restart `index`.
    pub(crate) fn restart_rng(&self, index: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64 + 1);
        rng
    }
}

/// Unit vectors `(φ, ψ)` on the output side and `(η, χ)` on the input side.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductCandidate {
    pub phi: CVector,
    pub psi: CVector,
    pub eta: CVector,
    pub chi: CVector,
}

impl ProductCandidate {
    pub fn random<R: Rng + ?Sized>(dh: usize, dj: usize, rng: &mut R) -> Self {
        Self {
            phi: random_unit_vector(dh, rng),
            psi: random_unit_vector(dj, rng),
            eta: random_unit_vector(dh, rng),
            chi: random_unit_vector(dj, rng),
        }
    }

    /// `⟨φ⊗ψ, L(η⊗χ)⟩`.
    pub fn overlap(&self, l: &BipartiteOperator) -> C64 {
        let out = kron_vec(&self.phi, &self.psi);
        let inp = kron_vec(&self.eta, &self.chi);
        out.dotc(&(l.matrix() * inp))
    }

    pub fn objective(&self, l: &BipartiteOperator) -> f64 {
        self.overlap(l).norm()
    }

    /// Moves every vector by the local unitaries `u` (on H) and `v` (on J).
    pub fn transport(&self, u: &CMatrix, v: &CMatrix) -> Self {
        Self {
            phi: u * &self.phi,
            psi: v * &self.psi,
            eta: u * &self.eta,
            chi: v * &self.chi,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GNormEstimate {
    /// Certified: attained by `candidate`.
    pub lower_bound: f64,
    /// Certified: `‖L‖∞`.
    pub upper_bound: f64,
    pub candidate: ProductCandidate,
    pub iterations_used: usize,
    pub converged: bool,
    pub restart: usize,
}

/// One see-saw ascent from a fixed start.
#[derive(Debug, Clone)]
pub struct SeeSawRun {
    pub candidate: ProductCandidate,
    pub value: f64,
    /// Objective after every half-step, starting with the initial value.
    pub trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// `‖a ⊗ b‖_G = ‖a‖∞ ‖b‖∞`.
pub fn g_norm_product(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    Ok(linalg::operator_norm(a)? * linalg::operator_norm(b)?)
}

/// `‖ |c⟩⟨c| ‖_G = a₁(c)²`, the squared leading Schmidt coefficient.
pub fn g_norm_rank_one(c: &BipartiteVector) -> Result<f64> {
    let f = schmidt_decompose(c)?;
    Ok(f.leading().powi(2))
}

/// `‖L‖∞`, which dominates `‖L‖_G`.
pub fn g_norm_upper(l: &BipartiteOperator) -> f64 {
    l.operator_norm()
}

/// Leading Schmidt pair of `v` and its coefficient; zero vectors give `None`.
pub(crate) fn leading_pair(v: &BipartiteVector) -> Option<(f64, CVector, CVector)> {
    if v.norm() == 0.0 {
        return None;
    }
    let f = schmidt_decompose(v).ok()?;
    Some((f.leading(), f.left_vector(0), f.right_vector(0)))
}

pub fn seesaw_from(
    l: &BipartiteOperator,
    start: ProductCandidate,
    max_iters: usize,
    tol: f64,
) -> SeeSawRun {
    let shape = l.shape();
    let adj = l.matrix().adjoint();
    let mut cand = start;
    let mut value = cand.objective(l);
    let mut trace = vec![value];
    let mut stalled = 0;
    let mut converged = false;
    let mut iterations = 0;

    for _ in 0..max_iters {
        iterations += 1;
        let prev = value;
        let w = BipartiteVector::new(shape, l.matrix() * kron_vec(&cand.eta, &cand.chi))
            .expect("shape is consistent");
        let Some((a, phi, psi)) = leading_pair(&w) else {
            converged = true;
            break;
        };
        cand.phi = phi;
        cand.psi = psi;
        trace.push(a);

        let u = BipartiteVector::new(shape, &adj * kron_vec(&cand.phi, &cand.psi))
            .expect("shape is consistent");
        let Some((b, eta, chi)) = leading_pair(&u) else {
            converged = true;
            break;
        };
        cand.eta = eta;
        cand.chi = chi;
        value = b;
        trace.push(b);

        if (value - prev).abs() <= tol * value.max(f64::MIN_POSITIVE) {
            stalled += 1;
            if stalled >= 2 {
                converged = true;
                break;
            }
        } else {
            stalled = 0;
        }
    }

    // Make the overlap real nonnegative.
    let z = cand.overlap(l);
    if z.norm() > 0.0 {
        cand.phi *= z / z.norm();
    }
    let value = cand.objective(l);
    SeeSawRun {
        candidate: cand,
        value,
        trace,
        iterations,
        converged,
    }
}

/// Start built from the leading operator-Schmidt pair `G ⊗ H` of `L`.
fn operator_schmidt_start(l: &BipartiteOperator) -> Option<ProductCandidate> {
    let f = operator_schmidt(l);
    if f.is_empty() {
        return None;
    }
    let g = linalg::svd(&f.left_ops[0]);
    let h = linalg::svd(&f.right_ops[0]);
    Some(ProductCandidate {
        phi: g.u.column(0).into_owned(),
        eta: g.v_t.row(0).adjoint(),
        psi: h.u.column(0).into_owned(),
        chi: h.v_t.row(0).adjoint(),
    })
}

pub fn g_norm_seesaw(l: &BipartiteOperator, config: &SeeSawConfig) -> Result<GNormEstimate> {
    config.validate()?;
    linalg::ensure_finite(l.matrix())?;
    let shape = l.shape();
    let upper = g_norm_upper(l);

    let runs: Vec<SeeSawRun> = (0..config.restarts)
        .into_par_iter()
        .map(|r| {
            let start = if r == 0 {
                operator_schmidt_start(l)
            } else {
                None
            };
            let start = start.unwrap_or_else(|| {
                ProductCandidate::random(shape.dh(), shape.dj(), &mut config.restart_rng(r))
            });
            seesaw_from(l, start, config.max_iters, config.tol)
        })
        .collect();

    // Max objective; ties go to the lowest restart index.
    let (best_idx, best) = runs
        .iter()
        .enumerate()
        .fold(None::<(usize, &SeeSawRun)>, |acc, (i, r)| match acc {
            Some((_, b)) if b.value >= r.value => acc,
            _ => Some((i, r)),
        })
        .expect("at least one restart");
    Ok(GNormEstimate {
        lower_bound: best.value,
        upper_bound: upper,
        candidate: best.candidate.clone(),
        iterations_used: best.iterations,
        converged: best.converged,
        restart: best_idx,
    })
}

/// `⟨a⊗b, y (a⊗b)⟩` for Hermitian `y`.
pub(crate) fn product_expectation(y: &CMatrix, a: &CVector, b: &CVector) -> f64 {
    let v = kron_vec(a, b);
    v.dotc(&(y * &v)).re
}

pub(crate) fn unit(n: usize, i: usize) -> CVector {
    let mut v = CVector::zeros(n);
    v[i] = c(1.0, 0.0);
    v
}
