//! Upper bounds from the spectral decomposition: every eigenprojector
//! `|v⟩⟨v|` expands as `Σ_{k,l} a_k a_l |φ_k⟩⟨φ_l| ⊗ |ψ_k⟩⟨ψ_l|`, which is an
//! optimal standard decomposition of the pure state.

use crate::bipartite::linalg::{self, c, outer};
use crate::bipartite::{
    schmidt_decompose, BipartiteOperator, BipartiteVector, CMatrix, CVector, SchmidtForm,
};
use crate::error::{Error, Result};
use crate::tol::{DEGENERACY_TOL, EPS_NORM};

use super::decomposition::StandardDecomposition;

/// Greedy rotations tried per degenerate eigenspace.
const MAX_BLOCK_ROTATIONS: usize = 50;
/// Eigenvalues below this fraction of the spectral radius are dropped.
const NEGLIGIBLE_EIGENVALUE: f64 = 1e-14;

/// `(Σ a_l)²` for a unit vector: the projective norm of `|v⟩⟨v|`.
pub fn pure_pi_norm(v: &BipartiteVector) -> Result<f64> {
    if (v.norm() - 1.0).abs() > EPS_NORM {
        return Err(Error::NotNormalized { norm: v.norm() });
    }
    Ok(schmidt_decompose(v)?.coefficient_sum().powi(2))
}

/// An eigenpair together with the Schmidt form of its eigenvector.
#[derive(Debug, Clone)]
pub(crate) struct SpectralTerm {
    pub eigenvalue: f64,
    pub schmidt: SchmidtForm,
}

impl SpectralTerm {
    pub fn cost(&self) -> f64 {
        self.eigenvalue.abs() * self.schmidt.coefficient_sum().powi(2)
    }
}

fn schmidt_sum_sq(shape: crate::bipartite::Shape, v: &CVector) -> f64 {
    let bv = BipartiteVector::new(shape, v.clone()).expect("shape is consistent");
    schmidt_decompose(&bv).map_or(0.0, |f| f.coefficient_sum().powi(2))
}

/// Rotates orthonormal columns of `block` in pairs to lower `Σ (Σa)²`.
/// Sweep order is fixed, so the result is deterministic.
fn optimize_block(shape: crate::bipartite::Shape, block: &mut [CVector]) {
    let n = block.len();
    if n < 2 {
        return;
    }
    let mut costs: Vec<f64> = block.iter().map(|v| schmidt_sum_sq(shape, v)).collect();
    // A block that is already all product vectors cannot improve.
    if costs.iter().all(|&x| x <= 1.0 + 1e-12) {
        return;
    }
    const THETAS: usize = 12;
    const PHASES: usize = 8;
    let mut attempts = 0;
    'outer: loop {
        let mut improved_any = false;
        for i in 0..n {
            for j in (i + 1)..n {
                if attempts >= MAX_BLOCK_ROTATIONS {
                    break 'outer;
                }
                attempts += 1;
                let base = costs[i] + costs[j];
                let mut best = (base, None);
                for t in 1..=THETAS {
                    let theta = std::f64::consts::FRAC_PI_2 * t as f64 / (THETAS + 1) as f64;
                    let (s, co) = theta.sin_cos();
                    for p in 0..PHASES {
                        let ph = std::f64::consts::TAU * p as f64 / PHASES as f64;
                        let e = c(ph.cos(), ph.sin());
                        let vi = block[i].scale(co) + &block[j] * (e * s);
                        let vj = &block[j].scale(co) - &block[i] * (e.conj() * s);
                        let (ci, cj) = (schmidt_sum_sq(shape, &vi), schmidt_sum_sq(shape, &vj));
                        if ci + cj < best.0 - 1e-12 {
                            best = (ci + cj, Some((vi, vj, ci, cj)));
                        }
                    }
                }
                if let (_, Some((vi, vj, ci, cj))) = best {
                    block[i] = vi;
                    block[j] = vj;
                    costs[i] = ci;
                    costs[j] = cj;
                    improved_any = true;
                }
            }
        }
        if !improved_any {
            break;
        }
    }
}

/// Eigendecomposition of Hermitian `d` with Schmidt forms, after optimizing
/// the eigenbasis inside each degenerate eigenspace.
pub(crate) fn spectral_terms(d: &BipartiteOperator) -> Result<Vec<SpectralTerm>> {
    d.ensure_hermitian()?;
    linalg::ensure_finite(d.matrix())?;
    let shape = d.shape();
    let e = linalg::eigh(d.matrix());
    let radius = e.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if radius == 0.0 {
        return Ok(vec![]);
    }
    let mut out = Vec::new();
    let mut start = 0;
    while start < e.values.len() {
        let mut end = start + 1;
        while end < e.values.len()
            && (e.values[start] - e.values[end]).abs() <= DEGENERACY_TOL * radius
        {
            end += 1;
        }
        let lam_block = e.values[start..end].iter().sum::<f64>() / (end - start) as f64;
        if lam_block.abs() > NEGLIGIBLE_EIGENVALUE * radius {
            let mut block: Vec<CVector> = (start..end)
                .map(|j| e.vectors.column(j).into_owned())
                .collect();
            optimize_block(shape, &mut block);
            for (k, v) in block.into_iter().enumerate() {
                let bv = BipartiteVector::new(shape, v).expect("shape is consistent");
                out.push(SpectralTerm {
                    eigenvalue: e.values[start + k],
                    schmidt: schmidt_decompose(&bv)?,
                });
            }
        }
        start = end;
    }
    Ok(out)
}

/// `Σ_j |λ_j| (Σ_l a_l^{(j)})²` with the explicit rank-one expansion.
pub fn upper_bound_spectral(d: &BipartiteOperator) -> Result<(f64, StandardDecomposition)> {
    let terms = spectral_terms(d)?;
    let mut dec = StandardDecomposition::new(d.shape());
    let mut value = 0.0;
    for t in &terms {
        let f = &t.schmidt;
        let sign = if t.eigenvalue < 0.0 { -1.0 } else { 1.0 };
        value += t.cost();
        for k in 0..f.rank() {
            for l in 0..f.rank() {
                let x: CMatrix = outer(&f.left_vector(k), &f.left_vector(l)).scale(sign);
                let y = outer(&f.right_vector(k), &f.right_vector(l));
                dec.push(
                    t.eigenvalue.abs() * f.coefficients[k] * f.coefficients[l],
                    x,
                    y,
                );
            }
        }
    }
    Ok((value, dec))
}
