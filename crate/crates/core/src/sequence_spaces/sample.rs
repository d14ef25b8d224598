use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;

use super::layout::block_range;
use super::{CompactSetSpec, Point};
use crate::rng::seeded_rng;

/// Knobs for [`sample_point_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplerOptions {
    /// Probability that a block (block variant) or the whole profile
    /// (Lorentz variant) is scaled onto its constraint.
    pub boundary_probability: f64,
    /// Probability that a block / profile keeps only a random subset of its
    /// coordinates (each kept with probability 1/2).
    pub sparsity_probability: f64,
    /// Uniform random phases; when false every coordinate is real and >= 0.
    pub random_phases: bool,
}

impl Default for SamplerOptions {
    fn default() -> Self {
        SamplerOptions {
            boundary_probability: 0.5,
            sparsity_probability: 0.5,
            random_phases: true,
        }
    }
}

/// A member of `A_λ`, deterministic in `seed`, with boundary mode on.
pub fn sample_point(spec: &CompactSetSpec, seed: u64) -> Point {
    sample_point_with(spec, seed, &SamplerOptions::default())
}

pub fn sample_point_with(spec: &CompactSetSpec, seed: u64, opts: &SamplerOptions) -> Point {
    let mut rng = seeded_rng(seed);
    let dense = match spec {
        CompactSetSpec::Block { lambda, p } => sample_block(&mut rng, lambda, p.get(), opts),
        CompactSetSpec::Lorentz { lambda, weights } => {
            let caps: Vec<f64> = (1..=lambda.len())
                .map(|k| lambda[k - 1] * weights.partial_sum(k))
                .collect();
            sample_lorentz(&mut rng, &caps, opts)
        }
    };
    let mut z = Point::from_dense(&dense);
    if !opts.random_phases {
        return z;
    }
    let phased: Vec<(usize, Complex64)> = z
        .iter()
        .map(|(i, v)| (i, Complex64::from_polar(v.re, rng.random::<f64>() * TAU)))
        .collect();
    z = Point::from_entries(phased).expect("finite sample");
    z
}

fn keep_mask<R: Rng>(rng: &mut R, len: usize, opts: &SamplerOptions) -> Vec<bool> {
    if rng.random::<f64>() < opts.sparsity_probability {
        (0..len).map(|_| rng.random::<bool>()).collect()
    } else {
        vec![true; len]
    }
}

fn exp1<R: Rng>(rng: &mut R) -> f64 {
    // 1 - U lies in (0, 1]
    -(1.0 - rng.random::<f64>()).ln()
}

/// Nonnegative magnitudes, block by block.
fn sample_block<R: Rng>(
    rng: &mut R,
    lambda: &[f64],
    p: f64,
    opts: &SamplerOptions,
) -> Vec<Complex64> {
    let dim = super::layout::triangular(lambda.len());
    let mut out = vec![Complex64::new(0.0, 0.0); dim];
    for (m, &lam) in lambda.iter().enumerate() {
        let block = block_range(m + 1).expect("m >= 1");
        let width = block.clone().count();
        let mask = keep_mask(rng, width, opts);
        let boundary = rng.random::<f64>() < opts.boundary_probability;
        let radius_draw = rng.random::<f64>();
        let weights: Vec<f64> = mask
            .iter()
            .map(|&k| if k { exp1(rng) } else { 0.0 })
            .collect();
        let kept = mask.iter().filter(|k| **k).count();
        let total: f64 = weights.iter().sum();
        if lam == 0.0 || kept == 0 || total == 0.0 {
            continue;
        }
        // u on the simplex, magnitudes u^{1/p} on the unit ℓp sphere
        let mut mags: Vec<f64> = weights.iter().map(|w| (w / total).powf(1.0 / p)).collect();
        let norm = if p == 1.0 {
            mags.iter().sum::<f64>()
        } else {
            mags.iter().map(|a| a.powf(p)).sum::<f64>().powf(1.0 / p)
        };
        let radius = if boundary {
            lam
        } else {
            lam * radius_draw.powf(1.0 / (2 * kept) as f64)
        };
        for a in mags.iter_mut() {
            *a *= radius / norm;
        }
        for (offset, i) in block.enumerate() {
            out[i - 1] = Complex64::new(mags[offset], 0.0);
        }
    }
    out
}

/// Random magnitude profile on the first `caps.len()` coordinates, scaled so
/// that every partial sum of the rearrangement stays under `caps[k-1]`.
fn sample_lorentz<R: Rng>(rng: &mut R, caps: &[f64], opts: &SamplerOptions) -> Vec<Complex64> {
    let len = caps.len();
    let mask = keep_mask(rng, len, opts);
    let boundary = rng.random::<f64>() < opts.boundary_probability;
    let radius_draw = rng.random::<f64>();
    let mags: Vec<f64> = mask
        .iter()
        .map(|&k| if k { exp1(rng) } else { 0.0 })
        .collect();
    let kept = mags.iter().filter(|m| **m > 0.0).count();
    if kept == 0 {
        return vec![Complex64::new(0.0, 0.0); len];
    }
    let mut sorted = mags.clone();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut acc = 0.0;
    let mut scale = f64::INFINITY;
    for (k, cap) in caps.iter().enumerate() {
        acc += sorted[k];
        scale = scale.min(cap / acc);
    }
    if !boundary {
        scale *= radius_draw.powf(1.0 / (2 * kept) as f64);
    }
    mags.iter()
        .map(|m| Complex64::new(m * scale, 0.0))
        .collect()
}
