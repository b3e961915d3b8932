//! Finite truncations of block families whose projective norm grows without
//! bound, evaluated block by block so that no large matrix is formed.
//!
//! Level `l` of a family is a maximally entangled state of Schmidt rank `m_l`
//! carried by the first `m_l` basis vectors of `H` and its own range of `J`
//! basis vectors; the truncation `D_N = Σ_{l≤N} w_l D_l` is block diagonal in
//! `J`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bipartite::linalg::c;
use crate::bipartite::{
    schmidt_decompose, BipartiteOperator, BipartiteVector, CMatrix, CVector, Shape,
};
use crate::cross_norm::{lower_bound_realignment, lower_bound_witness, witness_value};
use crate::error::{Error, Result};
use crate::injective::SeeSawConfig;
use crate::tol::{DENSE_LIMIT, EPS_NORM};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub weight: f64,
    pub block_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockFamily {
    levels: Vec<Level>,
}

impl BlockFamily {
    pub fn new(levels: Vec<Level>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidParameter("a family needs at least one level".into()));
        }
        if levels.iter().any(|l| !(l.weight > 0.0) || l.block_dim == 0) {
            return Err(Error::InvalidParameter(
                "weights and block dimensions must be positive".into(),
            ));
        }
        let total: f64 = levels.iter().map(|l| l.weight).sum();
        if total > 1.0 + EPS_NORM {
            return Err(Error::InvalidParameter(format!(
                "weights sum to {total}, more than 1"
            )));
        }
        Ok(Self { levels })
    }

    /// `w_l = 2^{-l}`, `m_l = 4^l` for `l = 1..=n`.
    pub fn dyadic_preset(n: usize) -> Self {
        let levels = (1..=n)
            .map(|l| Level {
                weight: 0.5f64.powi(l as i32),
                block_dim: 1 << (2 * l),
            })
            .collect();
        Self { levels }
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    fn check(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.len() {
            return Err(Error::OutOfRange {
                what: "N",
                value: n.to_string(),
                range: format!("[1, {}]", self.len()),
            });
        }
        Ok(())
    }

    /// `max_{l≤n} m_l`.
    pub fn h_dim(&self, n: usize) -> usize {
        self.levels[..n].iter().map(|l| l.block_dim).max().unwrap_or(0)
    }

    /// `Σ_{l≤n} m_l`.
    pub fn j_dim(&self, n: usize) -> usize {
        self.levels[..n].iter().map(|l| l.block_dim).sum()
    }

    /// First `J` index of level `l` (0-based level index).
    pub fn j_offset(&self, l: usize) -> usize {
        self.levels[..l].iter().map(|x| x.block_dim).sum()
    }

    pub fn shape(&self, n: usize) -> Result<Shape> {
        self.check(n)?;
        Shape::new(self.h_dim(n), self.j_dim(n))
    }

    /// Unnormalized flat vector `Σ_{i<m_l} e_i ⊗ f_{offset_l + i}` of level `l`.
    pub fn block_vector(&self, n: usize, l: usize) -> Result<BipartiteVector> {
        let shape = self.shape(n)?;
        let (m, off) = (self.levels[l].block_dim, self.j_offset(l));
        Ok(BipartiteVector::from_fn(shape, |i, k| {
            c(if i < m && k == off + i { 1.0 } else { 0.0 }, 0.0)
        }))
    }

    /// The truncation `D_N` as a dense matrix, refused above the size limit.
    pub fn dense(&self, n: usize) -> Result<BipartiteOperator> {
        let shape = self.shape(n)?;
        if shape.dim() > DENSE_LIMIT {
            return Err(Error::InvalidParameter(format!(
                "dense truncation of dimension {} exceeds {}",
                shape.dim(),
                DENSE_LIMIT
            )));
        }
        let mut m = CMatrix::zeros(shape.dim(), shape.dim());
        for l in 0..n {
            let lv = self.levels[l];
            let v = self.block_vector(n, l)?;
            m += v.projector().matrix().scale(lv.weight / lv.block_dim as f64);
        }
        BipartiteOperator::new(shape, m)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DivergenceBound {
    pub n: usize,
    /// `(1/N) Σ_{l≤N} w_l m_l`.
    pub lemosd: f64,
    /// `max_{l≤N} w_l m_l`, attained by a single block witness.
    pub witness: f64,
    /// 0-based level whose flat vector attains `witness`.
    pub witness_level: usize,
}

impl DivergenceBound {
    pub fn value(&self) -> f64 {
        self.lemosd.max(self.witness)
    }
}

/// Certified lower bounds on `‖D_N‖_π` from the block structure alone.
///
/// Each block contributes `‖w_l D_l‖_π = w_l m_l`; orthogonal blocks in `J`
/// give the averaged bound, and the flat vector of a single block, which has
/// leading Schmidt coefficient 1, witnesses `w_l m_l` directly because it is
/// orthogonal to every other block.
pub fn divergent_lower_bound(family: &BlockFamily, n: usize) -> Result<DivergenceBound> {
    family.check(n)?;
    let per_block: Vec<f64> = family.levels[..n]
        .par_iter()
        .map(|l| l.weight * l.block_dim as f64)
        .collect();
    let lemosd = per_block.iter().sum::<f64>() / n as f64;
    let (witness_level, witness) = per_block
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, v)| {
            if v > bv {
                (i, v)
            } else {
                (bi, bv)
            }
        });
    Ok(DivergenceBound {
        n,
        lemosd,
        witness,
        witness_level,
    })
}

/// Dense cross-check at small `N`: the block witness evaluated on the full
/// matrix, and the best dense lower bound (witness search and realignment).
#[derive(Debug, Clone, Serialize)]
pub struct DenseCheck {
    pub block_witness_value: f64,
    pub pi_lower: f64,
    pub trace_norm: f64,
}

pub fn dense_check(family: &BlockFamily, n: usize, seesaw: &SeeSawConfig) -> Result<DenseCheck> {
    let d = family.dense(n)?;
    let bound = divergent_lower_bound(family, n)?;
    let c = family.block_vector(n, bound.witness_level)?;
    let block_witness_value = witness_value(&d, &c)?;
    let search = lower_bound_witness(&d, seesaw)?.value;
    let trace_norm = d.trace_norm();
    let pi_lower = search
        .max(block_witness_value)
        .max(lower_bound_realignment(&d))
        .max(trace_norm);
    Ok(DenseCheck {
        block_witness_value,
        pi_lower,
        trace_norm,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub lemosd_bound: f64,
    pub witness_bound: f64,
    pub dense_pi_lower: Option<f64>,
}

pub fn divergence_sweep(
    family: &BlockFamily,
    ns: &[usize],
    seesaw: &SeeSawConfig,
) -> Result<Vec<SweepRow>> {
    ns.iter()
        .map(|&n| {
            let b = divergent_lower_bound(family, n)?;
            let dense_pi_lower = if family.shape(n)?.dim() <= DENSE_LIMIT {
                Some(dense_check(family, n, seesaw)?.pi_lower)
            } else {
                None
            };
            Ok(SweepRow {
                n,
                lemosd_bound: b.lemosd,
                witness_bound: b.witness,
                dense_pi_lower,
            })
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("N,lemosd_bound,witness_bound,dense_pi_lower\n");
    for r in rows {
        let dense = r.dense_pi_lower.map(|v| v.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.n, r.lemosd_bound, r.witness_bound, dense
        ));
    }
    out
}

/// Unit vector `Σ_l a_l e_l ⊗ f_l` on the square shape of side `coeffs.len()`,
/// after normalizing the coefficients in `ℓ²`.
pub fn truncated_pure(coeffs: &[f64]) -> Result<BipartiteVector> {
    if coeffs.is_empty() || coeffs.iter().any(|&a| !(a > 0.0) || !a.is_finite()) {
        return Err(Error::InvalidParameter(
            "coefficients must be positive and finite".into(),
        ));
    }
    let norm = coeffs.iter().map(|a| a * a).sum::<f64>().sqrt();
    let shape = Shape::square(coeffs.len())?;
    Ok(BipartiteVector::from_fn(shape, |i, k| {
        c(if i == k { coeffs[i] / norm } else { 0.0 }, 0.0)
    }))
}

/// The `N`-term truncation of `a_l ∝ 1/l` and its certified lower bound
/// `(Σ_{l≤N} a_l)²` on the projective norm.
pub fn truncated_l2_not_l1(n: usize) -> Result<(BipartiteVector, f64)> {
    let raw: Vec<f64> = (1..=n).map(|l| 1.0 / l as f64).collect();
    let v = truncated_pure(&raw)?;
    let bound = schmidt_decompose(&v)?.coefficient_sum().powi(2);
    Ok((v, bound))
}

/// Second component `D₀` of a mixture `p |v⟩⟨v| + (1 - p) D₀`.
#[derive(Debug, Clone)]
pub enum Background {
    /// `I / dim`.
    MaximallyMixed,
    Product(CMatrix, CMatrix),
    Dense(BipartiteOperator),
}

#[derive(Debug, Clone, Serialize)]
pub struct MixingBound {
    /// `tr(D E_N)` for the mixture.
    pub value: f64,
    /// `p (Σ_{l≤N} a_l)²`, the part guaranteed for any background.
    pub pure_part: f64,
    pub background_part: f64,
}

/// Lower bound `tr(D E_N) ≥ p (Σ_{l≤N} a_l)²` on the projective norm of
/// `D = p |v⟩⟨v| + (1 - p) D₀`, with `E_N` built from the Schmidt basis of `v`.
/// Only the Schmidt pairs of `v` and the background are touched.
pub fn mixing_lower_bound(
    p: f64,
    v: &BipartiteVector,
    background: &Background,
    n: usize,
) -> Result<MixingBound> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::OutOfRange {
            what: "p",
            value: p.to_string(),
            range: "(0, 1]".into(),
        });
    }
    if !v.is_normalized() {
        return Err(Error::NotNormalized { norm: v.norm() });
    }
    let f = schmidt_decompose(v)?;
    if n == 0 || n > f.rank() {
        return Err(Error::OutOfRange {
            what: "N",
            value: n.to_string(),
            range: format!("[1, {}]", f.rank()),
        });
    }
    let s: f64 = f.coefficients[..n].iter().sum();
    let pure_part = p * s * s;
    let shape = v.shape();
    let overlap = match background {
        Background::MaximallyMixed => n as f64 / shape.dim() as f64,
        Background::Product(rho, sigma) => {
            if rho.nrows() != shape.dh() || sigma.nrows() != shape.dj() {
                return Err(Error::DimensionMismatch {
                    expected: shape.to_string(),
                    got: format!("{}x{}", rho.nrows(), sigma.nrows()),
                });
            }
            let phis: Vec<CVector> = (0..n).map(|l| f.left_vector(l)).collect();
            let psis: Vec<CVector> = (0..n).map(|l| f.right_vector(l)).collect();
            let mut acc = c(0.0, 0.0);
            for l in 0..n {
                let rl = rho * &phis[l];
                let sl = sigma * &psis[l];
                for k in 0..n {
                    acc += phis[k].dotc(&rl) * psis[k].dotc(&sl);
                }
            }
            acc.re
        }
        Background::Dense(d0) => {
            if d0.shape() != shape {
                return Err(Error::DimensionMismatch {
                    expected: shape.to_string(),
                    got: d0.shape().to_string(),
                });
            }
            let cn = f.flat_sum(n);
            cn.inner(&d0.apply(&cn)?).re
        }
    };
    let background_part = (1.0 - p) * overlap;
    Ok(MixingBound {
        value: pure_part + background_part,
        pure_part,
        background_part,
    })
}
