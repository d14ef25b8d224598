use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::layout::block_of_index;
use super::{Point, SpaceError};

/// The exponent `p ∈ [1, ∞)` of the block space.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct PExponent(f64);

impl PExponent {
    pub fn new(p: f64) -> Result<Self, SpaceError> {
        if p.is_finite() && p >= 1.0 {
            Ok(PExponent(p))
        } else {
            Err(SpaceError::InvalidExponent(p))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for PExponent {
    type Error = SpaceError;

    fn try_from(p: f64) -> Result<Self, SpaceError> {
        PExponent::new(p)
    }
}

impl From<PExponent> for f64 {
    fn from(p: PExponent) -> f64 {
        p.0
    }
}

/// A finite prefix `w_1 = 1 ≥ w_2 ≥ … ≥ w_L > 0` of a Lorentz weight
/// sequence, with the partial sums `W_k = w_1 + … + w_k` cached.
///
/// Whether the full sequence lies in `c0 ∖ ℓ1` cannot be read off a prefix
/// and is left to the caller; [`LorentzWeights::harmonic`] is the default
/// family that does.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct LorentzWeights {
    prefix: Vec<f64>,
    partial_sums: Vec<f64>,
}

impl LorentzWeights {
    pub fn new(prefix: Vec<f64>) -> Result<Self, SpaceError> {
        let first = *prefix
            .first()
            .ok_or_else(|| SpaceError::InvalidWeights("empty prefix".into()))?;
        if (first - 1.0).abs() > 1e-12 {
            return Err(SpaceError::InvalidWeights(format!(
                "w_1 must be 1, got {first}"
            )));
        }
        for (i, &w) in prefix.iter().enumerate() {
            if !w.is_finite() || w <= 0.0 {
                return Err(SpaceError::InvalidWeights(format!(
                    "w_{} = {w} is not a positive finite number",
                    i + 1
                )));
            }
            if i > 0 && w > prefix[i - 1] {
                return Err(SpaceError::InvalidWeights(format!(
                    "weights must be non-increasing, w_{} = {w} > w_{} = {}",
                    i + 1,
                    i,
                    prefix[i - 1]
                )));
            }
        }
        let partial_sums = prefix
            .iter()
            .scan(0.0, |acc, &w| {
                *acc += w;
                Some(*acc)
            })
            .collect();
        Ok(LorentzWeights {
            prefix,
            partial_sums,
        })
    }

    /// `w_i = 1/i` for `i = 1..=len`.
    pub fn harmonic(len: usize) -> Self {
        assert!(len >= 1);
        LorentzWeights::new((1..=len).map(|i| 1.0 / i as f64).collect())
            .expect("harmonic weights are valid")
    }

    pub fn len(&self) -> usize {
        self.prefix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prefix.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.prefix
    }

    /// `w_i`, 1-based.
    pub fn weight(&self, i: usize) -> f64 {
        self.prefix[i - 1]
    }

    /// `W_k = Σ_{i≤k} w_i`, 1-based.
    pub fn partial_sum(&self, k: usize) -> f64 {
        self.partial_sums[k - 1]
    }

    fn check_covers(&self, nnz: usize) -> Result<(), SpaceError> {
        if nnz > self.len() {
            Err(SpaceError::InsufficientWeights {
                needed: nnz,
                available: self.len(),
            })
        } else {
            Ok(())
        }
    }
}

impl TryFrom<Vec<f64>> for LorentzWeights {
    type Error = SpaceError;

    fn try_from(v: Vec<f64>) -> Result<Self, SpaceError> {
        LorentzWeights::new(v)
    }
}

impl From<LorentzWeights> for Vec<f64> {
    fn from(w: LorentzWeights) -> Vec<f64> {
        w.prefix
    }
}

fn lp_sum(values: impl Iterator<Item = f64>, p: f64) -> f64 {
    if p == 1.0 {
        values.sum()
    } else {
        values.map(|v| v.powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// `(Σ_{i∈I(n)} |z_i|^p)^{1/p}` for every block `n` meeting the support.
pub fn block_norms(z: &Point, p: PExponent) -> BTreeMap<usize, f64> {
    let mut blocks: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for (i, v) in z.iter() {
        let n = block_of_index(i).expect("points are 1-based");
        blocks.entry(n).or_default().push(v.norm());
    }
    blocks
        .into_iter()
        .map(|(n, mods)| (n, lp_sum(mods.into_iter(), p.get())))
        .collect()
}

/// Norm of `c0(⊕ ℓp^i)`: the largest block ℓp norm.
pub fn block_space_norm(z: &Point, p: PExponent) -> f64 {
    block_norms(z, p).into_values().fold(0.0, f64::max)
}

/// `([z]_1, [z]_2, …)`: moduli of the nonzero coordinates, non-increasing.
/// Ties keep increasing coordinate order.
pub fn decreasing_rearrangement(z: &Point) -> Vec<f64> {
    let mut mods: Vec<(usize, f64)> = z.iter().map(|(i, v)| (i, v.norm())).collect();
    mods.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap_or(Ordering::Equal)
            .then(a.0.cmp(&b.0))
    });
    mods.into_iter().map(|(_, m)| m).collect()
}

/// Norm of `d(w,1)`: `Σ [z]_i w_i`.
pub fn lorentz_norm(z: &Point, w: &LorentzWeights) -> Result<f64, SpaceError> {
    let r = decreasing_rearrangement(z);
    w.check_covers(r.len())?;
    Ok(r.iter().zip(w.as_slice()).map(|(a, b)| a * b).sum())
}

/// Norm of `d*(w,1)`: `max_k (Σ_{i≤k} [z]_i) / W_k`.
pub fn lorentz_predual_norm(z: &Point, w: &LorentzWeights) -> Result<f64, SpaceError> {
    lorentz_predual_argmax(z, w).map(|(v, _)| v)
}

/// The predual norm together with the smallest maximizing `k` (0 for the
/// zero vector). Beyond the support the numerator is constant and `W_k`
/// grows, so only `k = 1..=nnz(z)` is scanned.
pub fn lorentz_predual_argmax(z: &Point, w: &LorentzWeights) -> Result<(f64, usize), SpaceError> {
    let r = decreasing_rearrangement(z);
    w.check_covers(r.len())?;
    let mut best = (0.0, 0);
    let mut acc = 0.0;
    for (k, a) in r.iter().enumerate() {
        acc += a;
        let ratio = acc / w.partial_sum(k + 1);
        if ratio > best.0 {
            best = (ratio, k + 1);
        }
    }
    Ok(best)
}
