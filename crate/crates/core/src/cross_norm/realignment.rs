use crate::bipartite::linalg::nuclear_norm;
use crate::bipartite::{operator_schmidt, realign, BipartiteOperator};

use super::decomposition::StandardDecomposition;

/// `‖R(D)‖₁`, which never exceeds `‖D‖_π`.
pub fn lower_bound_realignment(d: &BipartiteOperator) -> f64 {
    nuclear_norm(&realign(d))
}

/// `Σ σ_k ‖G_k‖₁ ‖H_k‖₁` from the operator Schmidt decomposition, with the
/// renormalized decomposition as certificate.
pub fn upper_bound_realignment(d: &BipartiteOperator) -> (f64, StandardDecomposition) {
    let f = operator_schmidt(d);
    let mut dec = StandardDecomposition::new(d.shape());
    for ((s, g), h) in f.singular_values.iter().zip(&f.left_ops).zip(&f.right_ops) {
        let (ng, nh) = (nuclear_norm(g), nuclear_norm(h));
        dec.push(s * ng * nh, g.unscale(ng), h.unscale(nh));
    }
    (dec.weight(), dec)
}
