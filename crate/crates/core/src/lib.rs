//! Certified bounds on the projective (greatest cross) norm, the Hermitian
//! projective norm and the injective norm of finite-dimensional bipartite
//! operators, with cross-norm based separability classification.
//!
//! Composite indices are row-major throughout: basis vector `e_i ⊗ f_k` of
//! `H ⊗ J` sits at position `i * dj + k`.

pub mod bipartite;
pub mod cross_norm;
mod error;
pub mod injective;
pub mod json;
pub mod separability;
pub mod tol;
pub mod truncation;

pub use bipartite::{BipartiteOperator, BipartiteVector, Shape, C64, CMatrix, CVector};
pub use cross_norm::{
    pi_bounds, Bound, BoundsConfig, Certificate, NormBounds, SignedDecomposition,
    StandardDecomposition, StrategyRegistry,
};
pub use error::{Error, Result};
pub use injective::{GNormEstimate, SeeSawConfig};
pub use separability::{classify, Classification, Verdict, Witness};
