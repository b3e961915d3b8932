use serde::Serialize;

use crate::bipartite::linalg::min_eigenvalue;
use crate::bipartite::{partial_transpose, BipartiteOperator};
use crate::error::Result;
use crate::tol::EPS_PSD;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PptReport {
    /// Smallest eigenvalue of the partial transpose on the J factor.
    pub min_eigenvalue: f64,
    pub ppt: bool,
    /// Whether PPT is equivalent to separability at this shape (2×2, 2×3).
    pub exact: bool,
}

impl PptReport {
    /// `Some(true)` separable, `Some(false)` entangled, `None` unknown.
    pub fn separable(&self) -> Option<bool> {
        match (self.ppt, self.exact) {
            (false, _) => Some(false),
            (true, true) => Some(true),
            (true, false) => None,
        }
    }
}

pub fn ppt_oracle(d: &BipartiteOperator) -> Result<PptReport> {
    d.ensure_density()?;
    let min_eigenvalue = min_eigenvalue(partial_transpose(d).matrix());
    let (dh, dj) = (d.shape().dh(), d.shape().dj());
    Ok(PptReport {
        min_eigenvalue,
        ppt: min_eigenvalue >= -EPS_PSD,
        exact: dh * dj <= 6,
    })
}
