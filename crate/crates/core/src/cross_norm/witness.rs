//! Witness lower bounds `‖D‖_π ≥ ⟨c|D|c⟩ / a₁(c)²`.
//!
//! `F = |c⟩⟨c| / a₁(c)²` has injective norm exactly 1, so every vector `c`
//! is a certificate. The search runs over coefficient matrices `V` with
//! `‖V‖∞ ≤ 1`: each step is a power step `c ← D c` followed by setting all
//! Schmidt coefficients of the result to 1 (the polar factor), which is the
//! exact maximizer of the linearized objective and so never decreases
//! `⟨c|D|c⟩` for positive `D`.

use rayon::prelude::*;

use crate::bipartite::linalg::{self, polar_factor};
use crate::bipartite::{schmidt_decompose, BipartiteOperator, BipartiteVector, CMatrix, CVector};
use crate::error::Result;
use crate::injective::SeeSawConfig;
use crate::tol::SCHMIDT_CUTOFF;

#[derive(Debug, Clone)]
pub struct WitnessBound {
    pub value: f64,
    /// Witness vector, scaled so that its leading Schmidt coefficient is 1.
    pub certificate: BipartiteVector,
    pub restart: usize,
    pub iterations: usize,
    pub converged: bool,
}

/// `⟨c|D|c⟩ / a₁(c)²`, recomputed from scratch.
pub fn witness_value(d: &BipartiteOperator, c: &BipartiteVector) -> Result<f64> {
    let a1 = schmidt_decompose(c)?.leading();
    let dc = d.apply(c)?;
    Ok(c.inner(&dc).re / (a1 * a1))
}

struct Ascent {
    coeffs: CMatrix,
    value: f64,
    trace: Vec<f64>,
    iterations: usize,
    converged: bool,
}

fn quad(d: &CMatrix, v: &CVector) -> f64 {
    v.dotc(&(d * v)).re
}

fn vectorize(m: &CMatrix) -> CVector {
    let (r, c) = m.shape();
    CVector::from_fn(r * c, |idx, _| m[(idx / c, idx % c)])
}

fn ascend(d: &BipartiteOperator, start: CMatrix, max_iters: usize, tol: f64) -> Ascent {
    let (dh, dj) = (d.shape().dh(), d.shape().dj());
    let m = d.matrix();
    let mut v = start;
    let mut value = quad(m, &vectorize(&v));
    let mut trace = vec![value];
    let mut stalled = 0;
    let mut converged = false;
    let mut iterations = 0;
    for _ in 0..max_iters {
        iterations += 1;
        let g = m * vectorize(&v);
        let gm = CMatrix::from_fn(dh, dj, |i, k| g[i * dj + k]);
        let next = polar_factor(&gm, SCHMIDT_CUTOFF);
        let next_value = quad(m, &vectorize(&next));
        trace.push(next_value);
        if next_value < value {
            // Only possible through rounding; keep the better point.
            converged = true;
            break;
        }
        let change = next_value - value;
        v = next;
        value = next_value;
        if change <= tol * value.abs().max(f64::MIN_POSITIVE) {
            stalled += 1;
            if stalled >= 2 {
                converged = true;
                break;
            }
        } else {
            stalled = 0;
        }
    }
    Ascent {
        coeffs: v,
        value,
        trace,
        iterations,
        converged,
    }
}

fn start_for(d: &BipartiteOperator, restart: usize, config: &SeeSawConfig) -> CMatrix {
    let (dh, dj) = (d.shape().dh(), d.shape().dj());
    if restart == 0 {
        let e = linalg::eigh(d.matrix());
        let top = BipartiteVector::new(d.shape(), e.vectors.column(0).into_owned())
            .expect("shape is consistent");
        let p = polar_factor(&top.coefficient_matrix(), SCHMIDT_CUTOFF);
        if linalg::frobenius(&p) > 0.0 {
            return p;
        }
    }
    let mut rng = config.restart_rng(restart);
    let g = crate::bipartite::random_unit_vector(dh * dj, &mut rng);
    let gm = CMatrix::from_fn(dh, dj, |i, k| g[i * dj + k]);
    polar_factor(&gm, SCHMIDT_CUTOFF)
}

/// Objective trace of a single ascent from restart `restart`, for tests of
/// monotonicity.
pub fn witness_ascent_trace(
    d: &BipartiteOperator,
    config: &SeeSawConfig,
    restart: usize,
) -> Vec<f64> {
    ascend(d, start_for(d, restart, config), config.max_iters, config.tol).trace
}

pub fn lower_bound_witness(d: &BipartiteOperator, config: &SeeSawConfig) -> Result<WitnessBound> {
    config.validate()?;
    d.ensure_psd()?;
    let runs: Vec<Ascent> = (0..config.restarts)
        .into_par_iter()
        .map(|r| ascend(d, start_for(d, r, config), config.max_iters, config.tol))
        .collect();
    let (best_idx, best) = runs
        .iter()
        .enumerate()
        .fold(None::<(usize, &Ascent)>, |acc, (i, r)| match acc {
            Some((_, b)) if b.value >= r.value => acc,
            _ => Some((i, r)),
        })
        .expect("at least one restart");

    let mut coeffs = best.coeffs.clone();
    if linalg::frobenius(&coeffs) == 0.0 {
        coeffs[(0, 0)] = linalg::c(1.0, 0.0);
    }
    let c = BipartiteVector::from_coefficient_matrix(&coeffs)?;
    let a1 = schmidt_decompose(&c)?.leading();
    let c = BipartiteVector::new(d.shape(), c.data().unscale(a1))?;
    let value = witness_value(d, &c)?;
    Ok(WitnessBound {
        value,
        certificate: c,
        restart: best_idx,
        iterations: best.iterations,
        converged: best.converged,
    })
}
