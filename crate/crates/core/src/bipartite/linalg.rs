//! Dense complex linear algebra helpers with deterministic ordering and
//! phase conventions.

use nalgebra::{Complex, DMatrix, DVector};

use super::{CMatrix, CVector, C64};
use crate::error::{Error, Result};
use crate::tol::EPS_HERM;

/// Thin singular value decomposition `m = u * diag(s) * v_t`, singular
/// values in descending order.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMatrix,
    pub s: Vec<f64>,
    pub v_t: CMatrix,
}

/// Hermitian eigendecomposition, eigenvalues in descending order, columns
/// of `vectors` phase-normalized.
#[derive(Debug, Clone)]
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

pub fn ensure_square(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(())
}

pub fn ensure_finite(m: &CMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Largest absolute entry, used as the scale for relative tolerances.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Max-entry deviation of `m` from `m^*`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

pub fn is_hermitian(m: &CMatrix) -> bool {
    m.nrows() == m.ncols() && hermitian_deviation(m) <= EPS_HERM * max_abs(m).max(1.0)
}

pub fn ensure_hermitian(m: &CMatrix) -> Result<()> {
    ensure_square(m)?;
    let deviation = hermitian_deviation(m);
    if deviation > EPS_HERM * max_abs(m).max(1.0) {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Rotates `v` so that its largest-magnitude entry (the first one, among
/// entries equal up to 1e-12) is real and positive. Returns the phase that
/// was removed.
pub fn normalize_phase(v: &mut CVector) -> C64 {
    let mut best = 0usize;
    let mut best_abs = -1.0;
    for (i, z) in v.iter().enumerate() {
        let a = z.norm();
        if a > best_abs + 1e-12 {
            best = i;
            best_abs = a;
        }
    }
    if best_abs <= 0.0 {
        return c(1.0, 0.0);
    }
    let phase = v[best] / best_abs;
    let inv = phase.conj();
    for z in v.iter_mut() {
        *z *= inv;
    }
    phase
}

pub fn svd(m: &CMatrix) -> Svd {
    let (rows, cols) = m.shape();
    let k = rows.min(cols);
    if k == 0 {
        return Svd {
            u: CMatrix::zeros(rows, 0),
            s: vec![],
            v_t: CMatrix::zeros(0, cols),
        };
    }
    let dec = m.clone().svd(true, true);
    let u = dec.u.expect("u requested");
    let v_t = dec.v_t.expect("v_t requested");
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| dec.singular_values[b].total_cmp(&dec.singular_values[a]));
    let mut su = CMatrix::zeros(rows, k);
    let mut sv = CMatrix::zeros(k, cols);
    let mut s = Vec::with_capacity(k);
    for (dst, &src) in order.iter().enumerate() {
        s.push(dec.singular_values[src]);
        su.set_column(dst, &u.column(src));
        sv.set_row(dst, &v_t.row(src));
    }
    // Put the phase freedom of each singular pair on the left vector.
    for j in 0..k {
        let mut col: CVector = su.column(j).into_owned();
        let phase = normalize_phase(&mut col);
        su.set_column(j, &col);
        let row = sv.row(j).map(|z| z * phase);
        sv.set_row(j, &row);
    }
    Svd { u: su, s, v_t: sv }
}

pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.is_empty() {
        return vec![];
    }
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// The QL iteration can break down on large, highly degenerate inputs with
/// exact zeros; a diagonal shift leaves the eigenvectors unchanged and
/// usually avoids that.
fn finite_symmetric_eigen(h: &CMatrix) -> nalgebra::SymmetricEigen<C64, nalgebra::Dyn> {
    let finite = |d: &nalgebra::SymmetricEigen<C64, nalgebra::Dyn>| {
        d.eigenvalues.iter().all(|x| x.is_finite())
            && d.eigenvectors.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    };
    let dec = h.clone().symmetric_eigen();
    if finite(&dec) {
        return dec;
    }
    let n = h.nrows();
    let scale = max_abs(h).max(f64::MIN_POSITIVE);
    for k in 1..=4 {
        let shift = scale * 0.618_033_988_749_895 * k as f64;
        let mut dec = (h + CMatrix::identity(n, n).scale(shift)).symmetric_eigen();
        if finite(&dec) {
            dec.eigenvalues.iter_mut().for_each(|x| *x -= shift);
            return dec;
        }
    }
    panic!("Hermitian eigendecomposition did not converge");
}

/// Eigendecomposition of the Hermitian part of `m`.
pub fn eigh(m: &CMatrix) -> Eigh {
    let n = m.nrows();
    if n == 0 {
        return Eigh {
            values: vec![],
            vectors: CMatrix::zeros(0, 0),
        };
    }
    let h = hermitian_part(m);
    let dec = finite_symmetric_eigen(&h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| dec.eigenvalues[b].total_cmp(&dec.eigenvalues[a]).then(a.cmp(&b)));
    let mut vectors = CMatrix::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        values.push(dec.eigenvalues[src]);
        let mut col: CVector = dec.eigenvectors.column(src).into_owned();
        normalize_phase(&mut col);
        vectors.set_column(dst, &col);
    }
    Eigh { values, vectors }
}

pub fn trace_norm(m: &CMatrix) -> Result<f64> {
    ensure_square(m)?;
    Ok(singular_values(m).iter().sum())
}

/// Sum of singular values of a possibly rectangular matrix.
pub fn nuclear_norm(m: &CMatrix) -> f64 {
    singular_values(m).iter().sum()
}

pub fn operator_norm(m: &CMatrix) -> Result<f64> {
    ensure_square(m)?;
    Ok(spectral_norm(m))
}

/// Largest singular value of a possibly rectangular matrix.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn trace(m: &CMatrix) -> C64 {
    m.trace()
}

/// `|h|` for Hermitian `h`, via the spectral decomposition.
pub fn hermitian_abs(h: &CMatrix) -> CMatrix {
    let e = eigh(h);
    let n = h.nrows();
    let mut out = CMatrix::zeros(n, n);
    for (j, &lam) in e.values.iter().enumerate() {
        let v = e.vectors.column(j);
        out += (&v * v.adjoint()).scale(lam.abs());
    }
    out
}

pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    eigh(m).values.last().copied().unwrap_or(0.0)
}

/// Kronecker product `a ⊗ b` under the row-major composite convention.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    a.kronecker(b)
}

/// Partial isometry `U V^*` built from the singular pairs of `m` above the
/// relative cutoff; the maximizer of `Re tr(m^* W)` over contractions `W`.
pub fn polar_factor(m: &CMatrix, rel_cutoff: f64) -> CMatrix {
    let dec = svd(m);
    let (rows, cols) = m.shape();
    let mut out = CMatrix::zeros(rows, cols);
    let top = dec.s.first().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return out;
    }
    for (j, &s) in dec.s.iter().enumerate() {
        if s <= rel_cutoff * top {
            break;
        }
        out += dec.u.column(j) * dec.v_t.row(j);
    }
    out
}

pub fn outer(a: &CVector, b: &CVector) -> CMatrix {
    a * b.adjoint()
}

pub fn projector(v: &CVector) -> CMatrix {
    outer(v, v)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn diag_real(values: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&DVector::from_iterator(
        values.len(),
        values.iter().map(|&x| c(x, 0.0)),
    ))
}

pub fn from_real_rows(rows: &[&[f64]]) -> CMatrix {
    let r = rows.len();
    let cdim = rows.first().map_or(0, |x| x.len());
    DMatrix::from_fn(r, cdim, |i, j| c(rows[i][j], 0.0))
}

pub fn basis_vector(n: usize, i: usize) -> CVector {
    let mut v = CVector::zeros(n);
    v[i] = c(1.0, 0.0);
    v
}

/// Trace norm of `a - b`.
pub fn trace_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    nuclear_norm(&(a - b))
}

/// Real inner product `Re tr(a^* b)`.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}
