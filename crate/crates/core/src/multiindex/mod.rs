//! Multi-indices and the square ordering of monomials.
//!
//! Within a degree, monomials are ordered first by length `l(m)` and then by
//! the highest coordinate at which the exponents differ. That is the same as
//! comparing exponent vectors from the top coordinate down, so the ordered
//! list of degree-`n` monomials of length at most `k` is the co-lexicographic
//! list of weak compositions of `n` into `k` parts, and a monomial's position
//! does not depend on `k`.

mod enumerate;
mod error;
mod index;
mod order;

pub use enumerate::{
    basis_size, enumerate_monomials, monomials, rank, recursive_extend, strata_by_length, unrank,
    MonomialIter, OrderedMonomialBasis,
};
pub use error::MultiIndexError;
pub use index::{degree_and_length, square_cmp, MultiIndex};
pub use order::{compatible_rank, compatible_unrank};
