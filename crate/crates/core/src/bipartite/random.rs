//! Seeded random states. ChaCha8 is the fixed generator; outputs are
//! deterministic for a given seed within this implementation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::linalg::c;
use super::{BipartiteOperator, BipartiteVector, CMatrix, CVector, Shape, C64};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im)
}

pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVector {
    loop {
        let v = CVector::from_fn(n, |_, _| gaussian(rng));
        let norm = v.norm();
        if norm > 1e-300 {
            return v.unscale(norm);
        }
    }
}

fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// `G G^* / tr(G G^*)` for a square Ginibre matrix `G`.
pub fn random_local_density<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let g = ginibre(n, n, rng);
    let p = &g * g.adjoint();
    let tr = p.trace().re;
    let p = p.unscale(tr);
    super::linalg::hermitian_part(&p)
}

pub fn random_density_with<R: Rng + ?Sized>(shape: Shape, rng: &mut R) -> BipartiteOperator {
    let m = random_local_density(shape.dim(), rng);
    BipartiteOperator::new(shape, m).expect("shape is consistent")
}

pub fn random_density(shape: Shape, seed: u64) -> BipartiteOperator {
    random_density_with(shape, &mut rng_from_seed(seed))
}

pub fn random_pure_with<R: Rng + ?Sized>(shape: Shape, rng: &mut R) -> BipartiteVector {
    BipartiteVector::new(shape, random_unit_vector(shape.dim(), rng))
        .expect("shape is consistent")
}

pub fn random_pure(shape: Shape, seed: u64) -> BipartiteVector {
    random_pure_with(shape, &mut rng_from_seed(seed))
}

/// Haar-distributed unitary from the QR decomposition of a Ginibre matrix,
/// with the phases of `R`'s diagonal absorbed.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let g = ginibre(n, n, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= ph;
        }
    }
    q
}
