//! Bounds on the projective norm `‖·‖_π` and the Hermitian projective norm
//! `‖·‖_H`, together with the decompositions and witnesses certifying them.

mod bounds;
pub mod decomposition;
pub mod hermitian;
pub mod realignment;
pub mod robustness;
pub mod spectral;
pub mod strategy;
pub mod witness;

pub use bounds::{ent, pi_bounds, pi_bounds_with, Bound, BoundsConfig, Certificate, NormBounds};
pub use decomposition::{
    validate_signed, validate_standard, DecompositionKind, ProductTerm, SignedDecomposition,
    SimpleTerm, StandardDecomposition, ValidationReport,
};
pub use hermitian::hermitian_upper;
pub use realignment::{lower_bound_realignment, upper_bound_realignment};
pub use robustness::{robustness_upper, RobustnessCertificate, RobustnessConfig, RobustnessOutcome};
pub use spectral::{pure_pi_norm, upper_bound_spectral};
pub use strategy::{BoundStrategy, Estimate, NormKind, Side, StrategyRegistry};
pub use witness::{lower_bound_witness, witness_value, WitnessBound};
