//! Independent oracles and random constructions shared by the integration
//! tests. Nothing here calls the library's own decompositions.
#![allow(dead_code)]

pub mod props;

use crossnorm::bipartite::{haar_unitary, BipartiteOperator, BipartiteVector, CMatrix, CVector, Shape, C64};
use crossnorm::cross_norm::BoundsConfig;
use nalgebra::{Complex, DMatrix};
use rand::Rng;

pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// Eigenvalues of a Hermitian matrix, descending. The matrix is shifted by
/// its Frobenius norm first, which keeps the QL iteration away from exact
/// zeros.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let h = (m + m.adjoint()).unscale(2.0);
    let n = h.nrows();
    let shift = h.norm() + 1.0;
    let shifted = &h + CMatrix::identity(n, n).scale(shift);
    let mut ev: Vec<f64> = shifted.symmetric_eigen().eigenvalues.iter().map(|x| x - shift).collect();
    ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
    ev
}

/// `Σ |λ|` for Hermitian input, `Σ √λ(M† M)` otherwise.
pub fn trace_norm_oracle(m: &CMatrix) -> f64 {
    if (m - m.adjoint()).norm() <= 1e-13 * (1.0 + m.norm()) {
        return hermitian_eigenvalues(m).into_iter().map(f64::abs).sum();
    }
    hermitian_eigenvalues(&(m.adjoint() * m))
        .into_iter()
        .map(|x| x.max(0.0).sqrt())
        .sum()
}

/// Schmidt coefficients as square roots of the reduced density spectrum.
pub fn schmidt_oracle(v: &BipartiteVector) -> Vec<f64> {
    let (dh, dj) = (v.shape().dh(), v.shape().dj());
    let m = DMatrix::from_fn(dh, dj, |i, k| v.data()[i * dj + k]);
    let a: Vec<f64> = hermitian_eigenvalues(&(&m * m.adjoint()))
        .into_iter()
        .map(|x| x.max(0.0).sqrt())
        .collect();
    let top = a[0];
    a.into_iter().filter(|x| *x > 1e-6 * top).collect()
}

pub fn pure_value_oracle(v: &BipartiteVector) -> f64 {
    schmidt_oracle(v).iter().sum::<f64>().powi(2)
}

/// Partial transpose on `J`, indexed by hand.
pub fn partial_transpose_oracle(d: &BipartiteOperator) -> CMatrix {
    let (dh, dj) = (d.shape().dh(), d.shape().dj());
    let n = dh * dj;
    let m = d.matrix();
    CMatrix::from_fn(n, n, |r, col| {
        let (i, k) = (r / dj, r % dj);
        let (j, l) = (col / dj, col % dj);
        m[(i * dj + l, j * dj + k)]
    })
}

pub fn min_pt_eigenvalue(d: &BipartiteOperator) -> f64 {
    *hermitian_eigenvalues(&partial_transpose_oracle(d)).last().unwrap()
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn random_matrix<R: Rng>(n: usize, m: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(n, m, |_, _| c(rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0))
}

pub fn random_hermitian<R: Rng>(n: usize, rng: &mut R) -> CMatrix {
    let a = random_matrix(n, n, rng);
    (&a + a.adjoint()).unscale(2.0)
}

pub fn spectral_norm_oracle(m: &CMatrix) -> f64 {
    hermitian_eigenvalues(&(m.adjoint() * m))[0].max(0.0).sqrt()
}

/// Random matrix rescaled to operator norm at most 1.
pub fn random_contraction<R: Rng>(n: usize, rng: &mut R) -> CMatrix {
    let a = random_matrix(n, n, rng);
    let s = spectral_norm_oracle(&a);
    a.unscale(s * (1.0 + rng.random::<f64>()))
}

/// Orthogonal projection onto `rank` random directions.
pub fn random_projection<R: Rng>(n: usize, rank: usize, rng: &mut R) -> CMatrix {
    let u = haar_unitary(n, rng);
    let cols = u.columns(0, rank);
    &cols * cols.adjoint()
}

/// Kraus operators of a random channel on dimension `d`, cut from a Haar
/// isometry.
pub fn random_kraus<R: Rng>(d: usize, k: usize, rng: &mut R) -> Vec<CMatrix> {
    let u = haar_unitary(d * k, rng);
    (0..k)
        .map(|i| u.view((i * d, 0), (d, d)).into_owned())
        .collect()
}

pub fn apply_local_channels(d: &BipartiteOperator, ka: &[CMatrix], kb: &[CMatrix]) -> BipartiteOperator {
    let n = d.shape().dim();
    let mut out = CMatrix::zeros(n, n);
    for a in ka {
        for b in kb {
            let k = kron(a, b);
            out += &k * d.matrix() * k.adjoint();
        }
    }
    BipartiteOperator::new(d.shape(), out).unwrap()
}

pub fn operator(shape: Shape, m: CMatrix) -> BipartiteOperator {
    BipartiteOperator::new(shape, m).unwrap()
}

/// Bounds from every strategy except the decomposition search, with fewer
/// see-saw restarts.
pub fn fast_config(seed: u64) -> BoundsConfig {
    let mut cfg = BoundsConfig::with_seed(seed);
    cfg.seesaw.restarts = 8;
    cfg.strategies = Some(
        ["trace-norm", "realignment", "witness", "spectral", "hermitian"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
    );
    cfg
}

fn qubit(theta: f64, phi: f64) -> CVector {
    CVector::from_vec(vec![
        c((theta / 2.0).cos(), 0.0),
        Complex::from_polar((theta / 2.0).sin(), phi),
    ])
}

/// Largest `|⟨φ⊗ψ, L(η⊗χ)⟩|` for a 2×2 operator: `φ, ψ` run over a grid of
/// `n` points per Bloch angle and the inner maximum over `η⊗χ` is the
/// leading singular value of `L†(φ⊗ψ)` reshaped to 2×2.
pub fn grid_g_norm_2x2(l: &CMatrix, n: usize) -> f64 {
    let angles: Vec<(f64, f64)> = (0..n)
        .flat_map(|a| {
            (0..n).map(move |b| {
                (
                    std::f64::consts::PI * a as f64 / (n - 1) as f64,
                    2.0 * std::f64::consts::PI * b as f64 / n as f64,
                )
            })
        })
        .collect();
    let la = l.adjoint();
    let mut best = 0.0f64;
    for &(t1, p1) in &angles {
        let phi = qubit(t1, p1);
        for &(t2, p2) in &angles {
            let x = phi.kronecker(&qubit(t2, p2));
            let w = &la * x;
            let m = DMatrix::from_fn(2, 2, |i, k| w[i * 2 + k]);
            best = best.max(spectral_norm_oracle(&m));
        }
    }
    best
}

pub fn bell() -> CMatrix {
    let s = 0.5;
    let mut m = CMatrix::zeros(4, 4);
    for (r, col) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
        m[(r, col)] = c(s, 0.0);
    }
    m
}

/// Smallest `α` on a grid for which `Bell = α D₁ − (α−1) D₂` with `D₂` a
/// diagonal (hence separable) density and `D₁` PPT (hence separable at 2×2).
/// Returns the Hermitian-norm value `2α − 1`.
pub fn bell_two_term_oracle(alpha_steps: usize, weight_steps: usize) -> Option<f64> {
    let b = bell();
    let shape = Shape::square(2).unwrap();
    for ai in 0..=alpha_steps {
        let alpha = 1.0 + 2.0 * ai as f64 / alpha_steps as f64;
        for w1 in 0..=weight_steps {
            for w2 in 0..=(weight_steps - w1) {
                for w3 in 0..=(weight_steps - w1 - w2) {
                    let w4 = weight_steps - w1 - w2 - w3;
                    let diag: Vec<f64> = [w1, w2, w3, w4]
                        .iter()
                        .map(|&w| w as f64 / weight_steps as f64)
                        .collect();
                    let d2 = CMatrix::from_diagonal(&nalgebra::DVector::from_fn(4, |i, _| c(diag[i], 0.0)));
                    let d1 = (&b + d2.scale(alpha - 1.0)).unscale(alpha);
                    let d1 = operator(shape, d1);
                    let psd = *hermitian_eigenvalues(d1.matrix()).last().unwrap() >= -1e-12;
                    if psd && min_pt_eigenvalue(&d1) >= -1e-12 {
                        return Some(2.0 * alpha - 1.0);
                    }
                }
            }
        }
    }
    None
}
