//! Hermitian projective norm upper bound from the spectral expansion.
//!
//! Diagonal Schmidt terms `a_k² |φ_k⟩⟨φ_k| ⊗ |ψ_k⟩⟨ψ_k|` are already product
//! states. Each off-diagonal pair `X ⊗ Y + X* ⊗ Y*` equals
//! `2 (X_R ⊗ Y_R − X_I ⊗ Y_I)` with Hermitian real and imaginary parts, and
//! every Hermitian factor splits into a positive and a negative density
//! part. The resulting signed decomposition weighs `2 (Σ a)² − 1` per unit
//! eigenvector.

use nalgebra::Complex;

use crate::bipartite::linalg::outer;
use crate::bipartite::{split_hermitian, BipartiteOperator, CMatrix};
use crate::error::Result;

use super::decomposition::SignedDecomposition;
use super::spectral::spectral_terms;

const SPLIT_TOL: f64 = 1e-13;

/// Adds `coeff · x ⊗ y` for Hermitian `x`, `y` as product-density terms.
fn push_product(dec: &mut SignedDecomposition, coeff: f64, x: &CMatrix, y: &CMatrix) {
    let xs = split_hermitian(x, SPLIT_TOL);
    let ys = split_hermitian(y, SPLIT_TOL);
    for (xw, rho) in &xs {
        for (yw, sigma) in &ys {
            let t = coeff * xw * yw;
            if t != 0.0 {
                dec.push(t, rho.clone(), sigma.clone());
            }
        }
    }
}

pub fn hermitian_upper(d: &BipartiteOperator) -> Result<(f64, SignedDecomposition)> {
    let terms = spectral_terms(d)?;
    let mut dec = SignedDecomposition::new(d.shape());
    for t in &terms {
        let f = &t.schmidt;
        let lam = t.eigenvalue;
        for k in 0..f.rank() {
            let pk = outer(&f.left_vector(k), &f.left_vector(k));
            let qk = outer(&f.right_vector(k), &f.right_vector(k));
            dec.push(lam * f.coefficients[k].powi(2), pk, qk);
            for l in (k + 1)..f.rank() {
                let x = outer(&f.left_vector(k), &f.left_vector(l));
                let y = outer(&f.right_vector(k), &f.right_vector(l));
                let x_re = (&x + x.adjoint()).scale(0.5);
                let x_im = (&x - x.adjoint()) * Complex::new(0.0, -0.5);
                let y_re = (&y + y.adjoint()).scale(0.5);
                let y_im = (&y - y.adjoint()) * Complex::new(0.0, -0.5);
                let w = 2.0 * lam * f.coefficients[k] * f.coefficients[l];
                push_product(&mut dec, w, &x_re, &y_re);
                push_product(&mut dec, -w, &x_im, &y_im);
            }
        }
    }
    Ok((dec.hermitian_weight(), dec))
}
