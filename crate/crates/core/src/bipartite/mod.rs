//! Bipartite shapes, vectors and operators on `H ⊗ J`, and the
//! factorizations everything else is built on.

pub mod linalg;
mod random;
mod schmidt;

use nalgebra::{Complex, DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol::{EPS_NORM, EPS_PSD, EPS_TRACE};

pub use random::{
    haar_unitary, random_density, random_density_with, random_local_density, random_pure,
    random_pure_with, random_unit_vector, rng_from_seed,
};
pub use schmidt::{
    operator_schmidt, realign, schmidt_decompose, OperatorSchmidtForm, SchmidtForm,
};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Local dimensions `(dh, dj)` of `H ⊗ J`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Shape {
    dh: usize,
    dj: usize,
}

impl Shape {
    pub fn new(dh: usize, dj: usize) -> Result<Self> {
        if dh == 0 || dj == 0 {
            return Err(Error::InvalidParameter(format!(
                "local dimensions must be positive, got {dh}x{dj}"
            )));
        }
        Ok(Self { dh, dj })
    }

    pub fn square(d: usize) -> Result<Self> {
        Self::new(d, d)
    }

    pub fn dh(&self) -> usize {
        self.dh
    }

    pub fn dj(&self) -> usize {
        self.dj
    }

    /// Composite dimension `dh * dj`.
    pub fn dim(&self) -> usize {
        self.dh * self.dj
    }

    /// `m = min(dh, dj)`, the maximal Schmidt rank.
    pub fn min_dim(&self) -> usize {
        self.dh.min(self.dj)
    }

    pub fn index(&self, i: usize, k: usize) -> usize {
        i * self.dj + k
    }

    fn mismatch(&self, got: String) -> Error {
        Error::DimensionMismatch {
            expected: format!("{}x{} (composite {})", self.dh, self.dj, self.dim()),
            got,
        }
    }
}

impl std::fmt::Display for Shape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}", self.dh, self.dj)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteVector {
    shape: Shape,
    data: CVector,
}

impl BipartiteVector {
    pub fn new(shape: Shape, data: CVector) -> Result<Self> {
        if data.len() != shape.dim() {
            return Err(shape.mismatch(format!("vector of length {}", data.len())));
        }
        Ok(Self { shape, data })
    }

    pub fn from_fn(shape: Shape, f: impl Fn(usize, usize) -> C64) -> Self {
        let data = CVector::from_fn(shape.dim(), |r, _| f(r / shape.dj, r % shape.dj));
        Self { shape, data }
    }

    /// `a ⊗ b`.
    pub fn product(a: &CVector, b: &CVector) -> Result<Self> {
        let shape = Shape::new(a.len(), b.len())?;
        Ok(Self {
            shape,
            data: linalg::kron_vec(a, b),
        })
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn data(&self) -> &CVector {
        &self.data
    }

    pub fn into_data(self) -> CVector {
        self.data
    }

    pub fn norm(&self) -> f64 {
        self.data.norm()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(Self {
            shape: self.shape,
            data: self.data.unscale(n),
        })
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= EPS_NORM
    }

    /// Coefficient matrix `M[i][k] = ⟨e_i ⊗ f_k, v⟩` of shape `dh × dj`.
    pub fn coefficient_matrix(&self) -> CMatrix {
        let s = self.shape;
        CMatrix::from_fn(s.dh, s.dj, |i, k| self.data[s.index(i, k)])
    }

    pub fn from_coefficient_matrix(m: &CMatrix) -> Result<Self> {
        let shape = Shape::new(m.nrows(), m.ncols())?;
        Ok(Self::from_fn(shape, |i, k| m[(i, k)]))
    }

    /// `|v⟩⟨v|`.
    pub fn projector(&self) -> BipartiteOperator {
        BipartiteOperator {
            shape: self.shape,
            matrix: linalg::projector(&self.data),
        }
    }

    pub fn inner(&self, other: &Self) -> C64 {
        self.data.dotc(&other.data)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteOperator {
    shape: Shape,
    matrix: CMatrix,
}

/// Which tensor factor an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    H,
    J,
}

impl BipartiteOperator {
    pub fn new(shape: Shape, matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != shape.dim() || matrix.ncols() != shape.dim() {
            return Err(shape.mismatch(format!("{}x{} matrix", matrix.nrows(), matrix.ncols())));
        }
        Ok(Self { shape, matrix })
    }

    pub fn zeros(shape: Shape) -> Self {
        Self {
            shape,
            matrix: CMatrix::zeros(shape.dim(), shape.dim()),
        }
    }

    pub fn identity(shape: Shape) -> Self {
        Self {
            shape,
            matrix: CMatrix::identity(shape.dim(), shape.dim()),
        }
    }

    pub fn maximally_mixed(shape: Shape) -> Self {
        let d = shape.dim() as f64;
        Self {
            shape,
            matrix: CMatrix::identity(shape.dim(), shape.dim()).unscale(d),
        }
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn map(&self, f: impl FnOnce(&CMatrix) -> CMatrix) -> Result<Self> {
        Self::new(self.shape, f(&self.matrix))
    }

    pub fn adjoint(&self) -> Self {
        Self {
            shape: self.shape,
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            shape: self.shape,
            matrix: self.matrix.scale(s),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self {
            shape: self.shape,
            matrix: &self.matrix + &other.matrix,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self {
            shape: self.shape,
            matrix: &self.matrix * &other.matrix,
        })
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.shape != other.shape {
            return Err(self.shape.mismatch(format!("shape {}", other.shape)));
        }
        Ok(())
    }

    pub fn apply(&self, v: &BipartiteVector) -> Result<BipartiteVector> {
        if v.shape != self.shape {
            return Err(self.shape.mismatch(format!("vector of shape {}", v.shape)));
        }
        Ok(BipartiteVector {
            shape: self.shape,
            data: &self.matrix * &v.data,
        })
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn trace_norm(&self) -> f64 {
        linalg::nuclear_norm(&self.matrix)
    }

    pub fn operator_norm(&self) -> f64 {
        linalg::spectral_norm(&self.matrix)
    }

    pub fn is_hermitian(&self) -> bool {
        linalg::is_hermitian(&self.matrix)
    }

    pub fn ensure_hermitian(&self) -> Result<()> {
        linalg::ensure_hermitian(&self.matrix)
    }

    /// Hermitian, PSD within `EPS_PSD` and unit trace within `EPS_TRACE`.
    pub fn ensure_density(&self) -> Result<()> {
        self.ensure_psd()?;
        let tr = self.trace();
        if (tr.re - 1.0).abs() > EPS_TRACE || tr.im.abs() > EPS_TRACE {
            return Err(Error::InvalidParameter(format!(
                "density must have unit trace, got {:.12}",
                tr.re
            )));
        }
        Ok(())
    }

    pub fn ensure_psd(&self) -> Result<()> {
        linalg::ensure_finite(&self.matrix)?;
        self.ensure_hermitian()?;
        let min = linalg::min_eigenvalue(&self.matrix);
        if min < -EPS_PSD * self.operator_norm().max(1.0) {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
        Ok(())
    }

    pub fn hermitian_part(&self) -> Self {
        Self {
            shape: self.shape,
            matrix: linalg::hermitian_part(&self.matrix),
        }
    }

    /// `(C - C^*) / 2i`, so that `C = re + i * im` with both parts Hermitian.
    pub fn anti_hermitian_part(&self) -> Self {
        let m = (&self.matrix - self.matrix.adjoint()) * Complex::new(0.0, -0.5);
        Self {
            shape: self.shape,
            matrix: m,
        }
    }

    /// `(a ⊗ 1) X (b ⊗ 1)`-style local conjugation helper: `(a ⊗ b) X (c ⊗ d)`.
    pub fn sandwich(
        &self,
        left: (&CMatrix, &CMatrix),
        right: (&CMatrix, &CMatrix),
    ) -> Result<Self> {
        let l = kron(left.0, left.1)?;
        let r = kron(right.0, right.1)?;
        self.same_shape(&l)?;
        self.same_shape(&r)?;
        Ok(Self {
            shape: self.shape,
            matrix: &l.matrix * &self.matrix * &r.matrix,
        })
    }

    pub fn partial_trace(&self, side: Side) -> CMatrix {
        partial_trace(self, side)
    }

    pub fn realign(&self) -> CMatrix {
        realign(self)
    }
}

/// `a ⊗ b` as an operator on `H ⊗ J` with `dim H = a.nrows()`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> Result<BipartiteOperator> {
    linalg::ensure_square(a)?;
    linalg::ensure_square(b)?;
    let shape = Shape::new(a.nrows(), b.nrows())?;
    Ok(BipartiteOperator {
        shape,
        matrix: linalg::kron(a, b),
    })
}

/// Traces out `side`, returning the reduced operator on the other factor.
pub fn partial_trace(op: &BipartiteOperator, side: Side) -> CMatrix {
    let s = op.shape;
    let m = &op.matrix;
    match side {
        Side::J => CMatrix::from_fn(s.dh, s.dh, |i, j| {
            (0..s.dj).map(|k| m[(s.index(i, k), s.index(j, k))]).sum()
        }),
        Side::H => CMatrix::from_fn(s.dj, s.dj, |k, l| {
            (0..s.dh).map(|i| m[(s.index(i, k), s.index(i, l))]).sum()
        }),
    }
}

/// Partial transpose on the J factor.
pub fn partial_transpose(op: &BipartiteOperator) -> BipartiteOperator {
    let s = op.shape;
    let m = &op.matrix;
    let out = CMatrix::from_fn(s.dim(), s.dim(), |r, c| {
        let (i, k) = (r / s.dj, r % s.dj);
        let (j, l) = (c / s.dj, c % s.dj);
        m[(s.index(i, l), s.index(j, k))]
    });
    BipartiteOperator {
        shape: s,
        matrix: out,
    }
}

/// Splits `s = s1 - s2 + i (s3 - s4)` into four positive parts with
/// `s1 s2 = 0 = s3 s4`, using `|s + s^*|` and `|s - s^*|`.
pub fn jordan_split4(s: &CMatrix) -> Result<[CMatrix; 4]> {
    linalg::ensure_square(s)?;
    let a = s + s.adjoint();
    // -i (s - s^*) is Hermitian and has the same modulus as s - s^*.
    let b = (s - s.adjoint()) * Complex::new(0.0, -1.0);
    let abs_a = linalg::hermitian_abs(&a);
    let abs_b = linalg::hermitian_abs(&b);
    Ok([
        (&abs_a + &a).scale(0.25),
        (&abs_a - &a).scale(0.25),
        (&abs_b + &b).scale(0.25),
        (&abs_b - &b).scale(0.25),
    ])
}

/// Splits Hermitian `x` as `x_plus * rho_plus + x_minus * rho_minus` with
/// densities `rho_±`, `x_plus ≥ 0 ≥ x_minus`. Vanishing parts are omitted.
pub fn split_hermitian(x: &CMatrix, rel_tol: f64) -> Vec<(f64, CMatrix)> {
    let e = linalg::eigh(x);
    let scale = e.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let n = x.nrows();
    let mut pos = CMatrix::zeros(n, n);
    let mut neg = CMatrix::zeros(n, n);
    let (mut tp, mut tn) = (0.0, 0.0);
    for (j, &lam) in e.values.iter().enumerate() {
        if lam.abs() <= rel_tol * scale {
            continue;
        }
        let v = e.vectors.column(j);
        let p = &v * v.adjoint();
        if lam > 0.0 {
            pos += p.scale(lam);
            tp += lam;
        } else {
            neg += p.scale(-lam);
            tn += lam;
        }
    }
    let mut out = Vec::with_capacity(2);
    if tp > 0.0 {
        out.push((tp, pos.unscale(tp)));
    }
    if tn < 0.0 {
        out.push((tn, neg.unscale(-tn)));
    }
    out
}

/// True if `m` is Hermitian PSD with unit trace under the crate tolerances.
pub fn is_density_matrix(m: &CMatrix) -> bool {
    if !linalg::is_hermitian(m) {
        return false;
    }
    let tr = m.trace();
    (tr.re - 1.0).abs() <= EPS_TRACE
        && tr.im.abs() <= EPS_TRACE
        && linalg::min_eigenvalue(m) >= -EPS_PSD
}
