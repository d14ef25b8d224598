use serde::{Deserialize, Serialize};

use super::layout::triangular;
use super::norms::{block_norms, decreasing_rearrangement};
use super::{block_space_norm, lorentz_predual_norm, LorentzWeights, PExponent, Point, SpaceError};

/// Slack allowed when testing `value ≤ λ` so that boundary points computed
/// in floating point still count as members.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

/// One of the compact sets `A_λ`, `λ ∈ c0⁺` stored as a finite prefix.
///
/// * `Block`: `(Σ_{i∈I(m)} |z_i|^p)^{1/p} ≤ λ_m` for every block `m`. The
///   tail of `λ` is zero, so coordinates in blocks past the prefix vanish.
/// * `Lorentz`: `(Σ_{i≤k} [z]_i) / W_k ≤ λ_k` for `k = 1..=L` (`L` the prefix
///   length), and coordinates past `L` vanish. This is the truncated slice
///   `{z ∈ A_λ̃ : z_i = 0, i > L}` for the `c0` extension
///   `λ̃_k = λ_L W_L / W_k`, `k > L`; a literal zero tail would collapse the
///   set to `{0}` because the ratio constraint at `k > L` forces `‖z‖₁ = 0`.
///
/// JSON: `{"variant": "block", "lambda": [..], "p": 2}` or
/// `{"variant": "lorentz", "lambda": [..], "weights": [..]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub enum CompactSetSpec {
    Block {
        lambda: Vec<f64>,
        p: PExponent,
    },
    Lorentz {
        lambda: Vec<f64>,
        weights: LorentzWeights,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "lowercase", deny_unknown_fields)]
enum RawSpec {
    Block {
        lambda: Vec<f64>,
        p: PExponent,
    },
    Lorentz {
        lambda: Vec<f64>,
        weights: LorentzWeights,
    },
}

impl TryFrom<RawSpec> for CompactSetSpec {
    type Error = SpaceError;

    fn try_from(raw: RawSpec) -> Result<Self, SpaceError> {
        match raw {
            RawSpec::Block { lambda, p } => CompactSetSpec::block(lambda, p),
            RawSpec::Lorentz { lambda, weights } => CompactSetSpec::lorentz(lambda, weights),
        }
    }
}

impl From<CompactSetSpec> for RawSpec {
    fn from(spec: CompactSetSpec) -> RawSpec {
        match spec {
            CompactSetSpec::Block { lambda, p } => RawSpec::Block { lambda, p },
            CompactSetSpec::Lorentz { lambda, weights } => RawSpec::Lorentz { lambda, weights },
        }
    }
}

/// A single defining inequality `value ≤ bound` evaluated at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constraint {
    /// Block number (block variant) or `k` (Lorentz variant); 0 stands for
    /// "coordinates past the prefix must vanish".
    pub index: usize,
    pub value: f64,
    pub bound: f64,
}

fn check_lambda(lambda: &[f64]) -> Result<(), SpaceError> {
    match lambda.iter().position(|l| !l.is_finite() || *l < 0.0) {
        Some(i) => Err(SpaceError::InvalidLambda(format!(
            "lambda_{} = {} is not a finite nonnegative number",
            i + 1,
            lambda[i]
        ))),
        None => Ok(()),
    }
}

impl CompactSetSpec {
    pub fn block(lambda: Vec<f64>, p: PExponent) -> Result<Self, SpaceError> {
        check_lambda(&lambda)?;
        Ok(CompactSetSpec::Block { lambda, p })
    }

    pub fn lorentz(lambda: Vec<f64>, weights: LorentzWeights) -> Result<Self, SpaceError> {
        check_lambda(&lambda)?;
        if weights.len() < lambda.len() {
            return Err(SpaceError::InsufficientWeights {
                needed: lambda.len(),
                available: weights.len(),
            });
        }
        Ok(CompactSetSpec::Lorentz { lambda, weights })
    }

    pub fn lambda_prefix(&self) -> &[f64] {
        match self {
            CompactSetSpec::Block { lambda, .. } | CompactSetSpec::Lorentz { lambda, .. } => lambda,
        }
    }

    /// `λ_m`, 1-based, zero past the prefix.
    pub fn lambda(&self, m: usize) -> f64 {
        self.lambda_prefix()
            .get(m.wrapping_sub(1))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn is_block(&self) -> bool {
        matches!(self, CompactSetSpec::Block { .. })
    }

    /// Number of leading coordinates that members may use.
    pub fn coordinate_limit(&self) -> usize {
        match self {
            CompactSetSpec::Block { lambda, .. } => triangular(lambda.len()),
            CompactSetSpec::Lorentz { lambda, .. } => lambda.len(),
        }
    }

    /// Norm of the ambient space (`c0(⊕ℓp)` or `d*(w,1)`).
    pub fn ambient_norm(&self, z: &Point) -> Result<f64, SpaceError> {
        match self {
            CompactSetSpec::Block { p, .. } => Ok(block_space_norm(z, *p)),
            CompactSetSpec::Lorentz { weights, .. } => lorentz_predual_norm(z, weights),
        }
    }

    /// Every defining inequality that is not trivially `0 ≤ bound`.
    pub fn constraints(&self, z: &Point) -> Vec<Constraint> {
        match self {
            CompactSetSpec::Block { lambda, p } => {
                let norms = block_norms(z, *p);
                let mut out: Vec<Constraint> = (1..=lambda.len())
                    .map(|m| Constraint {
                        index: m,
                        value: norms.get(&m).copied().unwrap_or(0.0),
                        bound: lambda[m - 1],
                    })
                    .collect();
                let beyond = norms
                    .range(lambda.len() + 1..)
                    .map(|(_, v)| *v)
                    .fold(0.0, f64::max);
                if beyond > 0.0 {
                    out.push(Constraint {
                        index: 0,
                        value: beyond,
                        bound: 0.0,
                    });
                }
                out
            }
            CompactSetSpec::Lorentz { lambda, weights } => {
                let beyond = z
                    .iter()
                    .filter(|(i, _)| *i > lambda.len())
                    .map(|(_, v)| v.norm())
                    .fold(0.0, f64::max);
                let r = decreasing_rearrangement(z);
                let mut out = Vec::with_capacity(lambda.len() + 1);
                let mut acc = 0.0;
                for k in 1..=lambda.len() {
                    if let Some(a) = r.get(k - 1) {
                        acc += a;
                    }
                    out.push(Constraint {
                        index: k,
                        value: acc / weights.partial_sum(k),
                        bound: lambda[k - 1],
                    });
                }
                if beyond > 0.0 {
                    out.push(Constraint {
                        index: 0,
                        value: beyond,
                        bound: 0.0,
                    });
                }
                out
            }
        }
    }

    /// Membership in `A_λ`, with [`MEMBERSHIP_TOL`] slack.
    pub fn contains(&self, z: &Point) -> bool {
        self.constraints(z)
            .iter()
            .all(|c| c.value <= c.bound + MEMBERSHIP_TOL)
    }

    /// Whether some nontrivial constraint (`bound > 0`) holds with equality
    /// up to `tol`.
    pub fn is_tight(&self, z: &Point, tol: f64) -> bool {
        self.constraints(z)
            .iter()
            .any(|c| c.bound > 0.0 && (c.value - c.bound).abs() <= tol)
    }
}

/// Membership test `z ∈ A_λ`.
pub fn in_compact_set(z: &Point, spec: &CompactSetSpec) -> bool {
    spec.contains(z)
}
