use std::collections::HashSet;

use num_complex::Complex64;
use rayon::prelude::*;

use super::poly::TermTable;
use super::{HomogeneousPolynomial, SupEstimate, SupMode};
use crate::rng::derive_seed;
use crate::sequence_spaces::{sample_point_with, CompactSetSpec, Point, SamplerOptions};

/// A finite set of members of `A_λ`, restricted to the first `dim`
/// coordinates, on which sup norms are estimated.
///
/// Base point `i` is drawn with seed `derive_seed(seed, i)`, so a cloud with
/// a larger budget contains every point of a smaller one. Each base point is
/// followed by its truncations at the requested cut lengths; by solidity
/// those are members too.
#[derive(Clone, Debug)]
pub struct SampleCloud {
    dim: usize,
    budget: usize,
    cuts: Vec<usize>,
    points: Vec<Vec<Complex64>>,
}

impl SampleCloud {
    pub fn new(
        spec: &CompactSetSpec,
        dim: usize,
        budget: usize,
        seed: u64,
        cuts: &[usize],
    ) -> Self {
        Self::with_options(spec, dim, budget, seed, cuts, &SamplerOptions::default())
    }

    pub fn with_options(
        spec: &CompactSetSpec,
        dim: usize,
        budget: usize,
        seed: u64,
        cuts: &[usize],
        opts: &SamplerOptions,
    ) -> Self {
        let mut cuts: Vec<usize> = cuts.iter().copied().filter(|c| *c < dim).collect();
        cuts.sort_unstable();
        cuts.dedup();
        let points = (0..budget)
            .into_par_iter()
            .flat_map_iter(|i| {
                let z = sample_point_with(spec, derive_seed(seed, i as u64), opts).to_dense(dim);
                let truncations: Vec<Vec<Complex64>> =
                    cuts.iter().map(|&c| truncate(&z, c)).collect();
                std::iter::once(z).chain(truncations)
            })
            .collect();
        SampleCloud {
            dim,
            budget,
            cuts,
            points,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of base samples.
    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn cuts(&self) -> &[usize] {
        &self.cuts
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<Complex64>] {
        &self.points
    }

    pub fn point(&self, idx: usize) -> Point {
        Point::from_dense(&self.points[idx])
    }

    /// Whether every point truncated at `cut` is, bit for bit, a point of
    /// the cloud.
    pub fn is_truncation_closed(&self, cut: usize) -> bool {
        let key = |z: &[Complex64]| -> Vec<(u64, u64)> {
            z.iter().map(|v| (v.re.to_bits(), v.im.to_bits())).collect()
        };
        let present: HashSet<Vec<(u64, u64)>> = self.points.iter().map(|z| key(z)).collect();
        self.points
            .iter()
            .all(|z| present.contains(&key(&truncate(z, cut))))
    }

    /// `max |P|` over the cloud with the first maximizing point.
    pub fn sup(&self, p: &HomogeneousPolynomial) -> (f64, Option<usize>) {
        let table = TermTable::new(p);
        self.sup_by(|z| table.eval_dense(z))
    }

    /// `max |f|` over the cloud for any evaluation routine.
    pub fn sup_by<F>(&self, f: F) -> (f64, Option<usize>)
    where
        F: Fn(&[Complex64]) -> Complex64 + Sync,
    {
        let values: Vec<f64> = self.points.par_iter().map(|z| f(z).norm()).collect();
        argmax(&values)
    }
}

pub(crate) fn truncate(z: &[Complex64], cut: usize) -> Vec<Complex64> {
    z.iter()
        .enumerate()
        .map(|(j, v)| {
            if j < cut {
                *v
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect()
}

/// Largest value and its first position; `(0, None)` for an empty slice.
pub(crate) fn argmax(values: &[f64]) -> (f64, Option<usize>) {
    let mut best = (0.0, None);
    for (i, &v) in values.iter().enumerate() {
        if best.1.is_none() || v > best.0 {
            best = (v, Some(i));
        }
    }
    best
}

/// Sampled lower bound for `sup_{A_λ} |P|` on a cloud of `budget` base
/// points, closed under truncation at every length in `cut_lengths`.
pub fn poly_sup_estimate(
    p: &HomogeneousPolynomial,
    spec: &CompactSetSpec,
    budget: usize,
    cut_lengths: &[usize],
    seed: u64,
) -> SupEstimate {
    let dim = cut_lengths.iter().copied().fold(p.max_length(), usize::max);
    let cloud = SampleCloud::new(spec, dim, budget, seed, cut_lengths);
    sup_on_cloud(p, &cloud)
}

pub fn sup_on_cloud(p: &HomogeneousPolynomial, cloud: &SampleCloud) -> SupEstimate {
    let (value, idx) = cloud.sup(p);
    SupEstimate {
        value,
        mode: SupMode::SampledLowerBound,
        witness: idx.map_or_else(Point::zero, |i| cloud.point(i)),
        budget: cloud.budget(),
    }
}
