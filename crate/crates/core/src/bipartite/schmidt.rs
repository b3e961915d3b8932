use super::linalg::{self, svd};
use super::{BipartiteOperator, BipartiteVector, CMatrix, CVector, Shape};
use crate::error::{Error, Result};
use crate::tol::SCHMIDT_CUTOFF;

/// `v = Σ_l a_l (φ_l ⊗ ψ_l)` with orthonormal `φ_l`, `ψ_l` and strictly
/// positive, descending `a_l`.
///
/// Phase convention: the largest-magnitude entry of each `φ_l` is real
/// positive; the phase sits on `ψ_l`.
#[derive(Debug, Clone)]
pub struct SchmidtForm {
    pub shape: Shape,
    pub coefficients: Vec<f64>,
    /// Columns are `φ_l`.
    pub left: CMatrix,
    /// Columns are `ψ_l`.
    pub right: CMatrix,
}

impl SchmidtForm {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    pub fn leading(&self) -> f64 {
        self.coefficients[0]
    }

    pub fn coefficient_sum(&self) -> f64 {
        self.coefficients.iter().sum()
    }

    pub fn left_vector(&self, l: usize) -> CVector {
        self.left.column(l).into_owned()
    }

    pub fn right_vector(&self, l: usize) -> CVector {
        self.right.column(l).into_owned()
    }

    /// `Σ_{l<n} φ_l ⊗ ψ_l`, the unweighted sum over the first `n` pairs.
    pub fn flat_sum(&self, n: usize) -> BipartiteVector {
        let mut data = CVector::zeros(self.shape.dim());
        for l in 0..n.min(self.rank()) {
            data += linalg::kron_vec(&self.left_vector(l), &self.right_vector(l));
        }
        BipartiteVector::new(self.shape, data).expect("shape is consistent")
    }

    pub fn reconstruct(&self) -> BipartiteVector {
        let mut data = CVector::zeros(self.shape.dim());
        for (l, &a) in self.coefficients.iter().enumerate() {
            data += linalg::kron_vec(&self.left_vector(l), &self.right_vector(l)).scale(a);
        }
        BipartiteVector::new(self.shape, data).expect("shape is consistent")
    }
}

pub fn schmidt_decompose(v: &BipartiteVector) -> Result<SchmidtForm> {
    let shape = v.shape();
    if v.data().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    if v.norm() == 0.0 {
        return Err(Error::ZeroVector);
    }
    // M = U S V^*  =>  v = Σ s_l u_l ⊗ conj(v_l), and conj(v_l) is row l of V^*.
    let dec = svd(&v.coefficient_matrix());
    let top = dec.s[0];
    let rank = dec
        .s
        .iter()
        .take_while(|&&s| s > SCHMIDT_CUTOFF * top)
        .count();
    let left = dec.u.columns(0, rank).into_owned();
    let right = dec.v_t.rows(0, rank).transpose();
    Ok(SchmidtForm {
        shape,
        coefficients: dec.s[..rank].to_vec(),
        left,
        right,
    })
}

/// Realignment: entry `(i*dh + j, k*dj + l)` is `⟨e_i⊗f_k| op |e_j⊗f_l⟩`.
/// Maps `a ⊗ b` to the outer product of the row-vectorizations of `a`, `b`.
pub fn realign(op: &BipartiteOperator) -> CMatrix {
    let s = op.shape();
    let (dh, dj) = (s.dh(), s.dj());
    let m = op.matrix();
    CMatrix::from_fn(dh * dh, dj * dj, |r, c| {
        let (i, j) = (r / dh, r % dh);
        let (k, l) = (c / dj, c % dj);
        m[(s.index(i, k), s.index(j, l))]
    })
}

/// Operator Schmidt decomposition `op = Σ σ_k G_k ⊗ H_k` with
/// Hilbert–Schmidt orthonormal `G_k`, `H_k`.
#[derive(Debug, Clone)]
pub struct OperatorSchmidtForm {
    pub shape: Shape,
    pub singular_values: Vec<f64>,
    pub left_ops: Vec<CMatrix>,
    pub right_ops: Vec<CMatrix>,
}

impl OperatorSchmidtForm {
    pub fn len(&self) -> usize {
        self.singular_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.singular_values.is_empty()
    }

    pub fn reconstruct(&self) -> BipartiteOperator {
        let mut m = CMatrix::zeros(self.shape.dim(), self.shape.dim());
        for ((s, g), h) in self
            .singular_values
            .iter()
            .zip(&self.left_ops)
            .zip(&self.right_ops)
        {
            m += linalg::kron(g, h).scale(*s);
        }
        BipartiteOperator::new(self.shape, m).expect("shape is consistent")
    }
}

pub fn operator_schmidt(op: &BipartiteOperator) -> OperatorSchmidtForm {
    let s = op.shape();
    let (dh, dj) = (s.dh(), s.dj());
    let dec = svd(&realign(op));
    let top = dec.s.first().copied().unwrap_or(0.0);
    let mut out = OperatorSchmidtForm {
        shape: s,
        singular_values: vec![],
        left_ops: vec![],
        right_ops: vec![],
    };
    if top == 0.0 {
        return out;
    }
    for (k, &sv) in dec.s.iter().enumerate() {
        if sv <= SCHMIDT_CUTOFF * top {
            break;
        }
        let g = CMatrix::from_fn(dh, dh, |i, j| dec.u[(i * dh + j, k)]);
        let h = CMatrix::from_fn(dj, dj, |a, b| dec.v_t[(k, a * dj + b)]);
        out.singular_values.push(sv);
        out.left_ops.push(g);
        out.right_ops.push(h);
    }
    out
}
