//! Deterministic generator states.

use crate::bipartite::linalg::{self, c};
use crate::bipartite::{
    random_local_density, rng_from_seed, BipartiteOperator, BipartiteVector, CMatrix, Shape,
};
use crate::cross_norm::SignedDecomposition;
use crate::error::{Error, Result};
use crate::tol::EPS_NORM;

/// `Σ_l e_l ⊗ f_l / √d`.
pub fn max_entangled_vector(d: usize) -> Result<BipartiteVector> {
    let shape = Shape::square(d)?;
    let x = 1.0 / (d as f64).sqrt();
    Ok(BipartiteVector::from_fn(shape, |i, k| c(if i == k { x } else { 0.0 }, 0.0)))
}

pub fn max_entangled(d: usize) -> Result<BipartiteOperator> {
    Ok(max_entangled_vector(d)?.projector())
}

pub fn product_state(rho: &CMatrix, sigma: &CMatrix) -> Result<BipartiteOperator> {
    for m in [rho, sigma] {
        if !crate::bipartite::is_density_matrix(m) {
            return Err(Error::InvalidParameter(
                "product factors must be density matrices".into(),
            ));
        }
    }
    crate::bipartite::kron(rho, sigma)
}

/// `Σ_l a_l e_l ⊗ f_l` on the square shape of side `coeffs.len()`.
pub fn pure_with_schmidt(coeffs: &[f64]) -> Result<BipartiteVector> {
    if coeffs.is_empty() {
        return Err(Error::InvalidParameter("no Schmidt coefficients".into()));
    }
    if coeffs.iter().any(|&a| !(a > 0.0) || !a.is_finite()) {
        return Err(Error::InvalidParameter(
            "Schmidt coefficients must be positive".into(),
        ));
    }
    let norm = coeffs.iter().map(|a| a * a).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > EPS_NORM {
        return Err(Error::NotNormalized { norm });
    }
    let shape = Shape::square(coeffs.len())?;
    Ok(BipartiteVector::from_fn(shape, |i, k| {
        c(if i == k { coeffs[i] } else { 0.0 }, 0.0)
    }))
}

/// Uniform mixture of `k` random product densities, returned with the mixture
/// itself as a positive decomposition.
pub fn random_separable(
    shape: Shape,
    k: usize,
    seed: u64,
) -> Result<(BipartiteOperator, SignedDecomposition)> {
    if k == 0 {
        return Err(Error::InvalidParameter("need at least one atom".into()));
    }
    let mut rng = rng_from_seed(seed);
    let mut dec = SignedDecomposition::new(shape);
    for _ in 0..k {
        let rho = random_local_density(shape.dh(), &mut rng);
        let sigma = random_local_density(shape.dj(), &mut rng);
        dec.push(1.0 / k as f64, rho, sigma);
    }
    let op = BipartiteOperator::new(shape, dec.reconstruct())?;
    Ok((op, dec))
}

/// `p |Φ_d⟩⟨Φ_d| + (1 - p) I / d²`.
pub fn isotropic(p: f64, d: usize) -> Result<BipartiteOperator> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange {
            what: "p",
            value: p.to_string(),
            range: "[0, 1]".into(),
        });
    }
    let phi = max_entangled(d)?;
    let mixed = BipartiteOperator::maximally_mixed(phi.shape());
    phi.scale(p).add(&mixed.scale(1.0 - p))
}

/// `|0⟩⟨0|` on dimension `d`, a convenient pure local density.
pub fn ground_density(d: usize) -> CMatrix {
    linalg::projector(&crate::injective::unit(d, 0))
}
