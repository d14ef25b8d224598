//! The spaces `c0(⊕ ℓp^i)` and `d*(w,1)`, their norms, and the compact sets
//! `A_λ` that generate the compact-open topology on holomorphic functions.
//!
//! Vectors are finitely supported complex sequences ([`Point`]) with 1-based
//! coordinates. `λ` and `w` are stored as finite prefixes; see
//! [`CompactSetSpec`] for how each variant treats coordinates beyond them.

mod compact;
mod error;
pub mod layout;
mod net;
mod norms;
mod point;
mod sample;

pub use compact::{in_compact_set, CompactSetSpec, Constraint, MEMBERSHIP_TOL};
pub use error::SpaceError;
pub use layout::{block_layout, block_of_index, block_range, triangular};
pub use net::{epsilon_net, epsilon_net_capped, EpsilonNet, DEFAULT_NET_CAP};
pub use norms::{
    block_norms, block_space_norm, decreasing_rearrangement, lorentz_norm, lorentz_predual_argmax,
    lorentz_predual_norm, LorentzWeights, PExponent,
};
pub use point::Point;
pub use sample::{sample_point, sample_point_with, SamplerOptions};
