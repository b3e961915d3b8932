//! Numerical tolerances shared by every module.
//!
//! All values are relative to the scale of the input they are applied to
//! (largest absolute entry, trace norm or norm, depending on the check).

/// Vector norms and Schmidt coefficient sums.
pub const EPS_NORM: f64 = 1e-10;
/// Unit-trace checks.
pub const EPS_TRACE: f64 = 1e-10;
/// Smallest eigenvalue accepted as "nonnegative".
pub const EPS_PSD: f64 = 1e-9;
/// Orthonormality of factor bases.
pub const EPS_ORTHO: f64 = 1e-9;
/// Hermiticity, max-entry deviation of `A - A^*`.
pub const EPS_HERM: f64 = 1e-10;
/// Reconstruction of factorizations.
pub const EPS_RECON: f64 = 1e-9;

/// Schmidt / singular values below this fraction of the largest are dropped.
pub const SCHMIDT_CUTOFF: f64 = 1e-12;
/// Eigenvalues closer than this (relative) form one degenerate block.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Trace-norm reconstruction tolerance for certificates.
pub const VALIDATE_TOL: f64 = 1e-8;
/// Separates "equals 1" from "greater than 1" in verdicts; also the width
/// below which a bound pair is reported as a single value.
pub const PINCH_TOL: f64 = 1e-6;

/// Largest composite dimension that is ever materialized densely by the
/// truncation lab.
pub const DENSE_LIMIT: usize = 512;
