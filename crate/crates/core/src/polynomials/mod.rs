//! Homogeneous polynomials in the coordinate functionals, their sup norms
//! over the compact sets `A_λ`, the seminorms `p_λ(f) = Σ_n ‖P_n‖_A` and the
//! randomized estimators for basis constants.
//!
//! Sup norms of single monomials are exact on block sets and come from a
//! convex solver on Lorentz sets. Everything else is measured on a
//! [`SampleCloud`], so sampled values are lower bounds.

mod basis;
mod cloud;
mod error;
mod poly;
mod seminorm;
mod sup;

pub use basis::{
    basis_constant_estimate, estimate_p0, length_graded_monotonicity_check, BasisConstantReport,
    CutComparison, EstimatorSettings, MonotonicityReport, P0Estimate, DEGENERATE_DENOMINATOR,
};
pub use cloud::{poly_sup_estimate, sup_on_cloud, SampleCloud};
pub use error::PolyError;
pub use poly::{eval, Evaluate, HomogeneousPolynomial, TaylorTruncation};
pub use seminorm::{
    exp_functional_taylor, ordered_terms, partial_sum, seminorm_cloud, seminorm_on_cloud,
    seminorm_p_lambda, split_at, tail_seminorms, tail_seminorms_on_cloud,
};
pub use sup::{monomial_sup, monomial_sup_block, monomial_sup_lorentz, SupEstimate, SupMode};
