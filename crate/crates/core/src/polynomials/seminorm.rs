use num_complex::Complex64;
use rayon::prelude::*;

use super::cloud::SampleCloud;
use super::poly::TermTable;
use super::{HomogeneousPolynomial, TaylorTruncation};
use crate::multiindex::{compatible_rank, monomials, rank, MultiIndex};
use crate::sequence_spaces::{CompactSetSpec, SamplerOptions};

/// Taylor polynomial of `exp(Σ φ_i z_i)` up to degree `n_max`: the
/// coefficient of `z^m` is `Π φ_i^{m_i} / Π m_i!`.
pub fn exp_functional_taylor(phi: &[Complex64], n_max: u32) -> TaylorTruncation {
    let parts = (0..=n_max)
        .map(|n| {
            let terms = monomials(n, phi.len()).map(|m| {
                let c = m.iter().fold(Complex64::new(1.0, 0.0), |acc, (i, e)| {
                    let fact: f64 = (1..=e).map(f64::from).product();
                    acc * phi[i - 1].powu(e) / fact
                });
                (m, c)
            });
            HomogeneousPolynomial::from_terms(n, terms).expect("finite coefficients")
        })
        .collect();
    TaylorTruncation::new(parts).expect("slot d has degree d")
}

/// `(position, degree, monomial, coefficient)` for every term of `f`, sorted
/// by the compatible position `φ(|m|, rank(m))`.
pub fn ordered_terms(f: &TaylorTruncation) -> Vec<(u128, u32, MultiIndex, Complex64)> {
    let mut out: Vec<_> = f
        .parts()
        .iter()
        .flat_map(|p| {
            p.iter().map(move |(m, c)| {
                let r = rank(m, m.length()).expect("length fits");
                (compatible_rank(p.degree(), r), p.degree(), m.clone(), *c)
            })
        })
        .collect();
    out.sort_by_key(|t| t.0);
    out
}

/// `(S_N f, f − S_N f)`: the first `n_terms` terms of `f` in the compatible
/// order and the rest.
pub fn split_at(f: &TaylorTruncation, n_terms: usize) -> (TaylorTruncation, TaylorTruncation) {
    let top = f.max_degree().unwrap_or(0);
    let mut head = TaylorTruncation::zero(top);
    let mut tail = TaylorTruncation::zero(top);
    if f.parts().is_empty() {
        return (
            TaylorTruncation::new(vec![]).unwrap(),
            TaylorTruncation::new(vec![]).unwrap(),
        );
    }
    for (j, (_, n, m, c)) in ordered_terms(f).into_iter().enumerate() {
        let target = if j < n_terms { &mut head } else { &mut tail };
        target.parts_mut()[n as usize]
            .add_term(m, c)
            .expect("degree matches slot");
    }
    (head, tail)
}

/// `S_N f`.
pub fn partial_sum(f: &TaylorTruncation, n_terms: usize) -> TaylorTruncation {
    split_at(f, n_terms).0
}

/// `p_λ(f) = Σ_n ‖P_n‖_A`, every part measured on the same cloud.
pub fn seminorm_on_cloud(f: &TaylorTruncation, cloud: &SampleCloud) -> f64 {
    f.parts()
        .iter()
        .map(|p| cloud.sup(p).0)
        .fold(0.0, |acc, v| acc + v)
}

/// The cloud [`seminorm_p_lambda`] uses for `f`.
pub fn seminorm_cloud(
    f: &TaylorTruncation,
    spec: &CompactSetSpec,
    budget: usize,
    seed: u64,
) -> SampleCloud {
    let dim = f
        .parts()
        .iter()
        .map(HomogeneousPolynomial::max_length)
        .max()
        .unwrap_or(0);
    SampleCloud::new(spec, dim, budget, seed, &[])
}

/// Sampled `p_λ(f)`.
pub fn seminorm_p_lambda(
    f: &TaylorTruncation,
    spec: &CompactSetSpec,
    budget: usize,
    seed: u64,
) -> f64 {
    seminorm_on_cloud(f, &seminorm_cloud(f, spec, budget, seed))
}

fn nonnegative(f: &TaylorTruncation) -> bool {
    f.parts()
        .iter()
        .all(|p| p.iter().all(|(_, c)| c.im == 0.0 && c.re >= 0.0))
}

/// `p_λ(f − S_N f)` for `N = 0, 1, …, term_count(f)` on one cloud.
///
/// When every coefficient is real and nonnegative the cloud is drawn without
/// phases; then each tail is a sum of nonnegative terms at every point and
/// the curve is non-increasing exactly. The last entry is exactly 0.
pub fn tail_seminorms(
    f: &TaylorTruncation,
    spec: &CompactSetSpec,
    budget: usize,
    seed: u64,
) -> Vec<f64> {
    let dim = f
        .parts()
        .iter()
        .map(HomogeneousPolynomial::max_length)
        .max()
        .unwrap_or(0);
    let opts = SamplerOptions {
        random_phases: !nonnegative(f),
        ..SamplerOptions::default()
    };
    let cloud = SampleCloud::with_options(spec, dim, budget, seed, &[], &opts);
    tail_seminorms_on_cloud(f, &cloud)
}

pub fn tail_seminorms_on_cloud(f: &TaylorTruncation, cloud: &SampleCloud) -> Vec<f64> {
    // suffix_sups[n][j] = max over the cloud of |Σ_{i≥j} t_i| over the
    // square-ordered terms t_i of P_n
    let suffix_sups: Vec<Vec<f64>> = f.parts().iter().map(|p| suffix_sups(p, cloud)).collect();
    let total = f.term_count();
    let mut kept = vec![0usize; suffix_sups.len()];
    let tail = |kept: &[usize]| -> f64 {
        suffix_sups
            .iter()
            .zip(kept)
            .map(|(s, &k)| s[k])
            .fold(0.0, |acc, v| acc + v)
    };
    let mut out = Vec::with_capacity(total + 1);
    out.push(tail(&kept));
    for (_, n, _, _) in ordered_terms(f) {
        // terms of one degree appear in square order, so S_N keeps a prefix
        kept[n as usize] += 1;
        out.push(tail(&kept));
    }
    out
}

fn suffix_sups(p: &HomogeneousPolynomial, cloud: &SampleCloud) -> Vec<f64> {
    let table = TermTable::new(p);
    let len = table.len();
    let chunk = (cloud.len() / rayon::current_num_threads().max(1)).max(64);
    let partial: Vec<Vec<f64>> = cloud
        .points()
        .par_chunks(chunk)
        .map(|points| {
            let mut best = vec![0.0; len + 1];
            let mut values = vec![Complex64::new(0.0, 0.0); len];
            for z in points {
                let powers = table.powers(z);
                for (slot, v) in values.iter_mut().zip(table.term_values(&powers)) {
                    *slot = v;
                }
                let mut acc = Complex64::new(0.0, 0.0);
                for j in (0..len).rev() {
                    acc += values[j];
                    best[j] = f64::max(best[j], acc.norm());
                }
            }
            best
        })
        .collect();
    partial.into_iter().fold(vec![0.0; len + 1], |mut acc, b| {
        for (a, v) in acc.iter_mut().zip(b) {
            *a = a.max(v);
        }
        acc
    })
}
