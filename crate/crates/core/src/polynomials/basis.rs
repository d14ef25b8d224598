use num_complex::Complex64;
use rand::Rng as _;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use super::cloud::{argmax, SampleCloud};
use super::poly::TermTable;
use super::{HomogeneousPolynomial, PolyError};
use crate::multiindex::{enumerate_monomials, MultiIndex};
use crate::rng::{derive_seed, seeded_rng};
use crate::sequence_spaces::{CompactSetSpec, Point};

/// Denominators below this are treated as a vanishing polynomial.
pub const DEGENERATE_DENOMINATOR: f64 = 1e-14;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// One comparison `‖Σ_{u≤s} Q_u‖ ≤ ‖Σ_{u≤t} Q_u‖` on a cloud.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CutComparison {
    pub s: usize,
    pub t: usize,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub comparisons: Vec<CutComparison>,
    pub holds: bool,
    /// Largest `lhs / rhs` over comparisons with `rhs > 0`.
    pub worst_ratio: f64,
}

/// Checks `‖Σ_{u≤s} Q_u‖ ≤ ‖Σ_{u≤t} Q_u‖` for all `s < t` on a cloud,
/// where `strata[u-1] = Q_u` uses only monomials of length exactly `u`.
///
/// `Σ_{u≤s} Q_u` reads only the first `s` coordinates and the cloud holds the
/// `s`-truncation of each of its points, at which both partial sums agree
/// bit for bit. So the comparison holds exactly, without tolerance.
pub fn length_graded_monotonicity_check(
    strata: &[HomogeneousPolynomial],
    cloud: &SampleCloud,
) -> Result<MonotonicityReport, PolyError> {
    let k = strata.len();
    for (u, q) in strata.iter().enumerate() {
        if let Some((m, _)) = q.iter().find(|(m, _)| m.length() != u + 1) {
            return Err(PolyError::InvalidArgument(format!(
                "{m} sits in the length-{} stratum",
                u + 1
            )));
        }
    }
    if k > cloud.dim() && strata[cloud.dim()..].iter().any(|q| !q.is_empty()) {
        return Err(PolyError::InvalidArgument(format!(
            "cloud of dimension {} is too short for {k} strata",
            cloud.dim()
        )));
    }
    for s in 1..k.min(cloud.dim()) {
        if !cloud.is_truncation_closed(s) {
            return Err(PolyError::NotTruncationClosed(s));
        }
    }
    let tables: Vec<TermTable> = strata.iter().map(TermTable::new).collect();
    // sups[s-1] = max over the cloud of |Σ_{u≤s} Q_u|
    let per_point: Vec<Vec<f64>> = cloud
        .points()
        .par_iter()
        .map(|z| {
            let mut acc = ZERO;
            tables
                .iter()
                .map(|t| {
                    acc += t.eval_dense(z);
                    acc.norm()
                })
                .collect()
        })
        .collect();
    let sups: Vec<f64> = (0..k)
        .map(|u| per_point.iter().map(|v| v[u]).fold(0.0, f64::max))
        .collect();
    let mut comparisons = Vec::new();
    let mut holds = true;
    let mut worst_ratio: f64 = 0.0;
    for s in 1..=k {
        for t in s + 1..=k {
            let (lhs, rhs) = (sups[s - 1], sups[t - 1]);
            holds &= lhs <= rhs;
            if rhs > 0.0 {
                worst_ratio = worst_ratio.max(lhs / rhs);
            }
            comparisons.push(CutComparison { s, t, lhs, rhs });
        }
    }
    Ok(MonotonicityReport {
        comparisons,
        holds,
        worst_ratio,
    })
}

fn complex_normal(rng: &mut crate::rng::Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Outcome of one coefficient vector on one cloud.
struct CutTrial {
    ratio: f64,
    cut: usize,
    numerator_point: usize,
    denominator_point: usize,
}

/// `max_s sup|Σ_{j≤s} α_j z^{m_j}| / sup|Σ_j α_j z^{m_j}|` over cuts
/// `s = 1..len-1`; `None` when the full sum vanishes on the cloud.
fn worst_cut(basis: &[MultiIndex], alpha: &[Complex64], cloud: &SampleCloud) -> Option<CutTrial> {
    let table = TermTable::from_terms(basis.iter().zip(alpha.iter().copied()));
    let len = basis.len();
    let prefix_moduli: Vec<Vec<f64>> = cloud
        .points()
        .par_iter()
        .map(|z| {
            let powers = table.powers(z);
            let mut acc = ZERO;
            table
                .term_values(&powers)
                .map(|v| {
                    acc += v;
                    acc.norm()
                })
                .collect()
        })
        .collect();
    let column = |j: usize| -> Vec<f64> { prefix_moduli.iter().map(|v| v[j]).collect() };
    let (den, den_idx) = argmax(&column(len - 1));
    if den < DEGENERATE_DENOMINATOR {
        return None;
    }
    let mut best: Option<CutTrial> = None;
    for s in 1..len {
        let (num, num_idx) = argmax(&column(s - 1));
        let ratio = num / den;
        if best.as_ref().is_none_or(|b| ratio > b.ratio) {
            best = Some(CutTrial {
                ratio,
                cut: s,
                numerator_point: num_idx.expect("nonempty cloud"),
                denominator_point: den_idx.expect("nonempty cloud"),
            });
        }
    }
    best
}

/// Estimated basis constant of the square-ordered degree-`n` monomials of
/// length at most `k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BasisConstantReport {
    pub degree: u32,
    pub truncation: usize,
    pub basis_size: usize,
    pub trials: usize,
    pub skipped_trials: usize,
    /// `ĉ_n`, a lower bound for the basis constant, at least 1.
    pub estimate: f64,
    /// `ĉ_n^{1/n}`.
    pub root: f64,
    /// `(s, t)`: the first `s` of `t` monomials; `None` when `t = 1`.
    pub worst_cut: Option<(usize, usize)>,
    pub worst_coefficients: Vec<Complex64>,
    pub numerator_witness: Option<Point>,
    pub denominator_witness: Option<Point>,
    /// Largest [`estimate_p0`] over the degree `n - 1` steps `j = 1..k-1`
    /// that lead into this basis (1 when there are none).
    pub p0_estimate: f64,
    /// `a = 1 + 2·p0_estimate`.
    pub envelope: f64,
}

/// Knobs shared by the randomized estimators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EstimatorSettings {
    /// Random coefficient vectors.
    pub trials: usize,
    /// Base points per cloud.
    pub budget: usize,
    pub seed: u64,
}

/// Randomized lower bound for `c_n` relative to the first `k` coordinates.
///
/// Each trial draws complex normal coefficients `α` and a fresh cloud closed
/// under truncation at lengths `1..k-1`, and takes the largest ratio over all
/// cuts. A probe with `α = e_1` and cut `s = 1` gives ratio exactly 1.
pub fn basis_constant_estimate(
    n: u32,
    k: usize,
    spec: &CompactSetSpec,
    settings: EstimatorSettings,
) -> Result<BasisConstantReport, PolyError> {
    if n == 0 || k == 0 {
        return Err(PolyError::InvalidArgument(
            "basis constants need n ≥ 1 and k ≥ 1".into(),
        ));
    }
    let basis = enumerate_monomials(n, k).into_vec();
    let cuts: Vec<usize> = (1..k).collect();
    let cloud_for = |stream: u64| {
        SampleCloud::new(
            spec,
            k,
            settings.budget.max(1),
            derive_seed(settings.seed, stream),
            &cuts,
        )
    };

    let mut report = BasisConstantReport {
        degree: n,
        truncation: k,
        basis_size: basis.len(),
        trials: settings.trials,
        skipped_trials: 0,
        estimate: 1.0,
        root: 1.0,
        worst_cut: None,
        worst_coefficients: Vec::new(),
        numerator_witness: None,
        denominator_witness: None,
        p0_estimate: 1.0,
        envelope: 3.0,
    };

    if basis.len() >= 2 {
        let probe_cloud = cloud_for(u64::MAX);
        let mut probe = vec![ZERO; basis.len()];
        probe[0] = Complex64::new(1.0, 0.0);
        let outcomes: Vec<(Vec<Complex64>, Option<CutTrial>, SampleCloud)> = std::iter::once((
            probe.clone(),
            worst_cut(&basis, &probe, &probe_cloud),
            probe_cloud,
        ))
        .chain(
            (0..settings.trials)
                .into_par_iter()
                .map(|trial| {
                    let mut rng = seeded_rng(derive_seed(settings.seed, 2 * trial as u64));
                    let alpha: Vec<Complex64> =
                        (0..basis.len()).map(|_| complex_normal(&mut rng)).collect();
                    let cloud = cloud_for(2 * trial as u64 + 1);
                    let outcome = worst_cut(&basis, &alpha, &cloud);
                    (alpha, outcome, cloud)
                })
                .collect::<Vec<_>>(),
        )
        .collect();

        let mut best_ratio = f64::NEG_INFINITY;
        for (j, (alpha, outcome, cloud)) in outcomes.into_iter().enumerate() {
            let Some(t) = outcome else {
                if j > 0 {
                    report.skipped_trials += 1;
                }
                continue;
            };
            if t.ratio > best_ratio {
                best_ratio = t.ratio;
                report.estimate = t.ratio.max(1.0);
                report.worst_cut = Some((t.cut, basis.len()));
                report.worst_coefficients = alpha;
                report.numerator_witness = Some(cloud.point(t.numerator_point));
                report.denominator_witness = Some(cloud.point(t.denominator_point));
            }
        }
    }
    report.root = report.estimate.powf(1.0 / n as f64);

    if n >= 2 {
        for j in 1..k {
            let step = EstimatorSettings {
                seed: derive_seed(settings.seed, (1 << 40) + j as u64),
                ..settings
            };
            let p0 = estimate_p0(spec, n - 1, j, step);
            report.p0_estimate = report.p0_estimate.max(p0.value);
        }
    }
    report.envelope = 1.0 + 2.0 * report.p0_estimate;
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct P0Estimate {
    /// Largest observed ratio, at least 1.
    pub value: f64,
    pub trials: usize,
    pub skipped_trials: usize,
}

/// Largest observed `‖z_{k+1}‖·‖S‖ / ‖z_{k+1}·S‖` over random degree-`n`
/// polynomials `S` on the monomials of length at most `k + 1` (the factor
/// that multiplies `z_{k+1}` in the length-`(k+1)` stratum of degree
/// `n + 1`), all sups taken on one shared cloud.
pub fn estimate_p0(
    spec: &CompactSetSpec,
    n: u32,
    k: usize,
    settings: EstimatorSettings,
) -> P0Estimate {
    let basis = enumerate_monomials(n, k + 1).into_vec();
    let cloud = SampleCloud::new(spec, k + 1, settings.budget.max(1), settings.seed, &[]);
    let coordinate_sup = cloud
        .points()
        .iter()
        .map(|z| z[k].norm())
        .fold(0.0, f64::max);
    let ratios: Vec<Option<f64>> = (0..settings.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = seeded_rng(derive_seed(settings.seed ^ 0x5EED, trial as u64));
            let alpha: Vec<Complex64> =
                (0..basis.len()).map(|_| complex_normal(&mut rng)).collect();
            let table = TermTable::from_terms(basis.iter().zip(alpha.iter().copied()));
            let (mut s_sup, mut prod_sup) = (0.0f64, 0.0f64);
            for z in cloud.points() {
                let v = table.eval_dense(z);
                s_sup = s_sup.max(v.norm());
                prod_sup = prod_sup.max((z[k] * v).norm());
            }
            (prod_sup >= DEGENERATE_DENOMINATOR).then(|| coordinate_sup * s_sup / prod_sup)
        })
        .collect();
    let skipped = ratios.iter().filter(|r| r.is_none()).count();
    let value = ratios.into_iter().flatten().fold(1.0, f64::max);
    P0Estimate {
        value,
        trials: settings.trials,
        skipped_trials: skipped,
    }
}
