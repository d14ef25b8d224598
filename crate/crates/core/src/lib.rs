//! Monomial bases for holomorphic functions on two sequence spaces.
//!
//! The crate covers the block space `c0(⊕ ℓp^i)` (blocks of sizes 1, 2, 3, …
//! each carrying an ℓp norm, sup over blocks) and the predual `d*(w,1)` of
//! the Lorentz sequence space, together with:
//!
//! * norms, membership and ε-nets for the compact sets `A_λ` of both spaces
//!   ([`sequence_spaces`]);
//! * multi-indices, the square ordering of monomials and a compatible global
//!   ordering across degrees ([`multiindex`]);
//! * homogeneous polynomials, sup norms over `A_λ`, the seminorms `p_λ`,
//!   partial sums and basis-constant estimators ([`polynomials`]);
//! * a JSON-configured batch driver ([`cli`]) and the invariant suites it
//!   runs ([`invariants`]).

pub mod cli;
pub mod invariants;
pub mod multiindex;
pub mod polynomials;
pub mod rng;
pub mod sequence_spaces;

pub use multiindex::{square_cmp, MultiIndex, OrderedMonomialBasis};
pub use polynomials::{HomogeneousPolynomial, SupEstimate, TaylorTruncation};
pub use sequence_spaces::{CompactSetSpec, LorentzWeights, PExponent, Point};
