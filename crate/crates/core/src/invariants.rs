//! Randomized invariant suites over all three library modules.
//!
//! Each row reports pass/fail and the worst residual seen. Residuals are
//! the amount by which the checked inequality or identity is violated (0 when
//! it holds exactly), so they are finite and nonnegative.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::Serialize;

use crate::multiindex::{
    basis_size, compatible_rank, compatible_unrank, enumerate_monomials, recursive_extend,
    square_cmp, strata_by_length, MultiIndex,
};
use crate::polynomials::{
    basis_constant_estimate, exp_functional_taylor, length_graded_monotonicity_check,
    monomial_sup_block, seminorm_cloud, seminorm_on_cloud, sup_on_cloud, tail_seminorms,
    EstimatorSettings, HomogeneousPolynomial, SampleCloud,
};
use crate::rng::{derive_seed, seeded_rng, Rng};
use crate::sequence_spaces::{
    block_layout, block_of_index, block_space_norm, epsilon_net, lorentz_norm,
    lorentz_predual_argmax, lorentz_predual_norm, sample_point, CompactSetSpec, LorentzWeights,
    PExponent, Point, MEMBERSHIP_TOL,
};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantRow {
    pub module: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InvariantSettings {
    pub seed: u64,
    /// Random instances per suite.
    pub samples: usize,
    /// Grows instead of shrinks coordinates in the solidity suite, which must
    /// then fail.
    pub perturb: bool,
}

fn row(module: &'static str, name: &'static str, residual: f64, tolerance: f64) -> InvariantRow {
    InvariantRow {
        module,
        name,
        passed: residual.is_finite() && residual <= tolerance,
        residual,
        tolerance,
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_point(rng: &mut Rng, max_support: usize, max_index: usize) -> Point {
    let nnz = rng.random_range(0..=max_support);
    Point::from_entries((0..nnz).map(|_| {
        let i = rng.random_range(1..=max_index);
        (
            i,
            c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)),
        )
    }))
    .expect("finite")
}

fn test_specs() -> Vec<CompactSetSpec> {
    vec![
        CompactSetSpec::block(vec![1.0, 0.8, 0.5], PExponent::new(1.5).unwrap()).unwrap(),
        CompactSetSpec::block(vec![0.6, 1.0, 0.3, 0.2], PExponent::new(1.0).unwrap()).unwrap(),
        CompactSetSpec::lorentz(vec![1.0, 0.7, 0.5, 0.4], LorentzWeights::harmonic(4)).unwrap(),
    ]
}

/// Largest `value − bound` over the constraints of `spec` at `z`.
fn excess(spec: &CompactSetSpec, z: &Point) -> f64 {
    spec.constraints(z)
        .iter()
        .map(|k| k.value - k.bound)
        .fold(f64::NEG_INFINITY, f64::max)
        .max(0.0)
}

pub fn run_all(settings: &InvariantSettings) -> Vec<InvariantRow> {
    let mut rows = sequence_space_suites(settings);
    rows.extend(multiindex_suites());
    rows.extend(polynomial_suites(settings));
    rows
}

pub fn sequence_space_suites(settings: &InvariantSettings) -> Vec<InvariantRow> {
    let mut rng = seeded_rng(derive_seed(settings.seed, 1));
    let samples = settings.samples;
    let weights = LorentzWeights::harmonic(64);
    let mut rows = Vec::new();

    let mut bad = 0.0;
    let mut next = 1;
    for n in 1..=100 {
        let (_, range) = block_layout(n).expect("n ≥ 1");
        bad += f64::from(*range.start() != next || range.clone().count() != n);
        bad += range
            .clone()
            .filter(|&i| block_of_index(i) != Ok(n))
            .count() as f64;
        next = range.end() + 1;
    }
    rows.push(row("sequence_spaces", "block partition", bad, 0.0));

    let (mut homog, mut triangle) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        let x = random_point(&mut rng, 20, 40);
        let y = random_point(&mut rng, 20, 40);
        let s = c(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let p = PExponent::new(rng.random_range(1.0..4.0)).unwrap();
        let block = |z: &Point| block_space_norm(z, p);
        let pred = |z: &Point| lorentz_predual_norm(z, &weights).expect("weights cover");
        let lor = |z: &Point| lorentz_norm(z, &weights).expect("weights cover");
        for norm in [&block as &dyn Fn(&Point) -> f64, &pred, &lor] {
            let scale = 1.0 + norm(&x) + norm(&y);
            homog = homog
                .max((norm(&x.scale(s)) - s.norm() * norm(&x)).abs() / (scale * (1.0 + s.norm())));
            triangle = triangle.max((norm(&(&x + &y)) - norm(&x) - norm(&y)) / scale);
        }
    }
    rows.push(row("sequence_spaces", "norm homogeneity", homog, 1e-12));
    rows.push(row(
        "sequence_spaces",
        "norm triangle inequality",
        triangle.max(0.0),
        1e-12,
    ));

    let mut rearr = 0.0f64;
    for _ in 0..samples {
        let x = random_point(&mut rng, 12, 12);
        let mut idx: Vec<usize> = (1..=12).collect();
        idx.shuffle(&mut rng);
        let y = Point::from_entries(x.iter().map(|(i, v)| {
            (
                idx[i - 1],
                v * Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU)),
            )
        }))
        .expect("finite");
        let scale = 1.0 + lorentz_norm(&x, &weights).unwrap();
        rearr = rearr.max(
            (lorentz_norm(&x, &weights).unwrap() - lorentz_norm(&y, &weights).unwrap()).abs()
                / scale,
        );
        rearr = rearr.max(
            (lorentz_predual_norm(&x, &weights).unwrap()
                - lorentz_predual_norm(&y, &weights).unwrap())
            .abs()
                / scale,
        );
    }
    rows.push(row(
        "sequence_spaces",
        "rearrangement invariance",
        rearr,
        1e-12,
    ));

    let (mut solid, mut balanced, mut closed) = (0.0f64, 0.0f64, 0.0f64);
    let mut tight_seen = 0usize;
    for (j, spec) in test_specs().iter().enumerate() {
        for s in 0..samples as u64 {
            let z = sample_point(spec, derive_seed(settings.seed, (j as u64) << 32 | s));
            let y = Point::from_entries(z.iter().map(|(i, v)| {
                let f = if settings.perturb {
                    rng.random_range(1.05..1.5)
                } else {
                    rng.random_range(0.0..=1.0)
                };
                (i, v * f)
            }))
            .expect("finite");
            solid = solid.max(excess(spec, &y));
            let phase = Complex64::from_polar(
                rng.random_range(0.0..=1.0),
                rng.random_range(0.0..std::f64::consts::TAU),
            );
            balanced = balanced.max(excess(spec, &z.scale(phase)));
            if spec.is_tight(&z, 1e-12) {
                tight_seen += 1;
                closed = closed.max(excess(spec, &z));
            }
        }
    }
    rows.push(row("sequence_spaces", "solidity", solid, MEMBERSHIP_TOL));
    rows.push(row(
        "sequence_spaces",
        "balancedness",
        balanced,
        MEMBERSHIP_TOL,
    ));
    rows.push(row(
        "sequence_spaces",
        "boundary points are members",
        if tight_seen == 0 {
            f64::INFINITY
        } else {
            closed
        },
        MEMBERSHIP_TOL,
    ));

    let mut cover = 0.0f64;
    let nets = [
        (
            CompactSetSpec::block(vec![1.0, 0.3], PExponent::new(2.0).unwrap()).unwrap(),
            0.5,
        ),
        (
            CompactSetSpec::lorentz(vec![1.0, 0.6], LorentzWeights::harmonic(2)).unwrap(),
            0.6,
        ),
    ];
    for (j, (spec, eps)) in nets.iter().enumerate() {
        let net = epsilon_net(spec, *eps).expect("small net");
        for s in 0..samples as u64 {
            let z = sample_point(
                spec,
                derive_seed(settings.seed ^ 0xC0FE, (j as u64) << 32 | s),
            );
            let (_, d) = net.nearest(spec, &z);
            cover = cover.max(d - eps);
        }
    }
    rows.push(row(
        "sequence_spaces",
        "epsilon-net covering",
        cover.max(0.0),
        0.0,
    ));

    let mut attain = 0.0f64;
    for _ in 0..samples {
        let x = random_point(&mut rng, 20, 60);
        let (_, k) = lorentz_predual_argmax(&x, &weights).unwrap();
        attain = attain.max(k.saturating_sub(x.nnz()) as f64);
    }
    rows.push(row(
        "sequence_spaces",
        "predual norm attained within the support",
        attain,
        0.0,
    ));
    rows
}

pub fn multiindex_suites() -> Vec<InvariantRow> {
    let mut rows = Vec::new();
    let mut bad = 0usize;
    for n in 0..=3 {
        let all = enumerate_monomials(n, 5).into_vec();
        for a in &all {
            for b in &all {
                bad += usize::from(square_cmp(a, b) != square_cmp(b, a).reverse());
                bad += usize::from(square_cmp(a, b).is_eq() != (a == b));
                for d in &all {
                    bad += usize::from(
                        square_cmp(a, b).is_lt()
                            && square_cmp(b, d).is_lt()
                            && !square_cmp(a, d).is_lt(),
                    );
                }
            }
        }
    }
    rows.push(row(
        "multiindex",
        "square order is a strict total order",
        bad as f64,
        0.0,
    ));

    let mut bad = 0usize;
    for n in 0..=4 {
        let all = enumerate_monomials(n, 6).into_vec();
        bad += all
            .windows(2)
            .filter(|w| w[0].length() > w[1].length())
            .count();
    }
    rows.push(row(
        "multiindex",
        "length is monotone in square order",
        bad as f64,
        0.0,
    ));

    let mut bad = 0usize;
    for n in 0..=6u32 {
        for k in 1..=7usize {
            // compositions by recursion on the first part
            fn count(n: u32, k: usize) -> u128 {
                if k == 1 {
                    1
                } else {
                    (0..=n).map(|e| count(n - e, k - 1)).sum()
                }
            }
            bad += usize::from(
                enumerate_monomials(n, k).len() as u128 != count(n, k)
                    || basis_size(n, k) != count(n, k),
            );
        }
    }
    rows.push(row("multiindex", "basis cardinalities", bad as f64, 0.0));

    let mut bad = 0usize;
    for n in 1..=4 {
        for k in 1..=6 {
            let built = recursive_extend(&strata_by_length(n, k), k).expect("well-formed strata");
            let expected: Vec<MultiIndex> = enumerate_monomials(n + 1, k)
                .into_iter()
                .filter(|m| m.length() == k)
                .collect();
            bad += usize::from(built != expected);
        }
    }
    rows.push(row(
        "multiindex",
        "recursive construction matches enumeration",
        bad as f64,
        0.0,
    ));

    let mut bad = 0usize;
    for n in 0..=6 {
        for r in 0..50u128 {
            bad += usize::from(compatible_rank(n, r) >= compatible_rank(n, r + 1));
            bad += usize::from(compatible_unrank(compatible_rank(n, r)) != (n, r));
        }
    }
    rows.push(row("multiindex", "compatible order", bad as f64, 0.0));
    rows
}

fn random_poly(rng: &mut Rng, n: u32, k: usize) -> HomogeneousPolynomial {
    let terms: Vec<_> = enumerate_monomials(n, k)
        .into_iter()
        .map(|m| {
            (
                m,
                c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            )
        })
        .collect();
    HomogeneousPolynomial::from_terms(n, terms).expect("degree n")
}

pub fn polynomial_suites(settings: &InvariantSettings) -> Vec<InvariantRow> {
    let mut rng = seeded_rng(derive_seed(settings.seed, 3));
    let samples = settings.samples;
    let mut rows = Vec::new();

    let (mut lin, mut hom) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        let n = rng.random_range(0..=4);
        let p = random_poly(&mut rng, n, 3);
        let q = random_poly(&mut rng, n, 3);
        let z = random_point(&mut rng, 3, 3).scale(c(0.5, 0.0));
        let (a, b) = (
            c(rng.random_range(-2.0..2.0), 0.5),
            c(0.3, rng.random_range(-2.0..2.0)),
        );
        let combo = p.combine(a, &q, b).expect("same degree").eval(&z);
        let direct = a * p.eval(&z) + b * q.eval(&z);
        lin = lin.max((combo - direct).norm() / (1.0 + direct.norm()));
        let s = c(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5));
        let scaled = p.eval(&z.scale(s));
        let expected = s.powu(n) * p.eval(&z);
        hom = hom.max((scaled - expected).norm() / (1.0 + expected.norm()));
    }
    rows.push(row("polynomials", "evaluation linearity", lin, 1e-12));
    rows.push(row("polynomials", "homogeneity", hom, 1e-10));

    // the per-block optimum on the ℓp sphere of a 2-coordinate block
    let mut closed_form = 0.0f64;
    for p in [1.0, 1.5, 2.0, 3.0] {
        let spec = CompactSetSpec::block(vec![1.0, 0.8], PExponent::new(p).unwrap()).unwrap();
        for (a, b) in [(1u32, 1u32), (2, 1), (1, 3), (4, 1)] {
            let m = MultiIndex::from_dense(&[0, a, b]);
            let exact = monomial_sup_block(&m, &spec).expect("block").value;
            let scan = (0..=20_000)
                .map(|i| {
                    let t = i as f64 / 20_000.0;
                    0.8f64.powi((a + b) as i32)
                        * t.powf(a as f64 / p)
                        * (1.0 - t).powf(b as f64 / p)
                })
                .fold(0.0, f64::max);
            closed_form = closed_form.max((scan - exact).abs() / exact);
        }
    }
    rows.push(row(
        "polynomials",
        "closed-form sup against a scan",
        closed_form,
        1e-6,
    ));

    let spec = CompactSetSpec::block(vec![1.0, 0.8, 0.5], PExponent::new(2.0).unwrap()).unwrap();
    let cloud = SampleCloud::new(&spec, 6, samples.max(1), settings.seed, &[]);
    let mut dominance = 0.0f64;
    for n in 1..=3 {
        for m in enumerate_monomials(n, 6) {
            let exact = monomial_sup_block(&m, &spec).expect("block").value;
            let sampled = sup_on_cloud(&HomogeneousPolynomial::monomial(m), &cloud).value;
            dominance = dominance.max((sampled - exact) / exact.max(1e-300));
        }
    }
    rows.push(row(
        "polynomials",
        "sampled sup below the exact sup",
        dominance.max(0.0),
        1e-12,
    ));

    let f = exp_functional_taylor(&[c(0.4, 0.1), c(-0.3, 0.2), c(0.2, 0.0)], 5);
    let fcloud = seminorm_cloud(&f, &spec, samples.max(1), settings.seed);
    let parts: f64 = f
        .parts()
        .iter()
        .map(|p| fcloud.sup(p).0)
        .fold(0.0, |acc, v| acc + v);
    rows.push(row(
        "polynomials",
        "seminorm additivity over degrees",
        (seminorm_on_cloud(&f, &fcloud) - parts).abs(),
        0.0,
    ));

    let mut violations = 0usize;
    for j in 0..samples.min(200) {
        let n = rng.random_range(1..=4);
        let k = rng.random_range(1..=6);
        let strata: Vec<HomogeneousPolynomial> = strata_by_length(n, k)
            .into_iter()
            .map(|ms| {
                let terms: Vec<_> = ms
                    .into_iter()
                    .map(|m| {
                        (
                            m,
                            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                        )
                    })
                    .collect();
                HomogeneousPolynomial::from_terms(n, terms).expect("degree n")
            })
            .collect();
        let spec = CompactSetSpec::lorentz(
            vec![1.0, 0.9, 0.7, 0.6, 0.5, 0.5],
            LorentzWeights::harmonic(6),
        )
        .unwrap();
        let cuts: Vec<usize> = (1..k).collect();
        let cloud = SampleCloud::new(&spec, k, 50, derive_seed(settings.seed, j as u64), &cuts);
        let report = length_graded_monotonicity_check(&strata, &cloud).expect("closed cloud");
        violations += usize::from(!report.holds);
    }
    rows.push(row(
        "polynomials",
        "length-graded monotonicity",
        violations as f64,
        0.0,
    ));

    let est = EstimatorSettings {
        trials: 10,
        budget: 200,
        seed: settings.seed,
    };
    let spec4 = CompactSetSpec::block(vec![1.0, 1.0, 1.0], PExponent::new(2.0).unwrap()).unwrap();
    let c1 = basis_constant_estimate(1, 4, &spec4, est)
        .expect("n, k ≥ 1")
        .estimate;
    rows.push(row(
        "polynomials",
        "degree-one basis constant is 1",
        (c1 - 1.0).abs(),
        1e-10,
    ));
    let mut below_one = 0.0f64;
    for n in 2..=3 {
        let r = basis_constant_estimate(n, 3, &spec4, est).expect("n, k ≥ 1");
        below_one = below_one.max(1.0 - r.estimate);
    }
    rows.push(row(
        "polynomials",
        "basis constant estimates are at least 1",
        below_one.max(0.0),
        0.0,
    ));

    let phi = [c(0.5, -0.3), c(0.2, 0.4), c(-0.3, 0.1)];
    let g = exp_functional_taylor(&phi, 20);
    let mut taylor = 0.0f64;
    for _ in 0..samples.min(100) {
        let z = random_point(&mut rng, 3, 3);
        let top = z.iter().map(|(_, v)| v.norm()).fold(0.0, f64::max);
        let z = if top > 0.0 {
            z.scale(c(1.4 / top, 0.0))
        } else {
            z
        };
        let arg: Complex64 = (1..=3).map(|i| phi[i - 1] * z.get(i)).sum();
        taylor = taylor.max((g.eval(&z) - arg.exp()).norm() / arg.exp().norm());
    }
    rows.push(row(
        "polynomials",
        "Taylor truncation approaches exp",
        taylor,
        1e-8,
    ));

    let f = exp_functional_taylor(
        &[
            c(0.3, 0.0),
            c(0.2, 0.0),
            c(0.2, 0.0),
            c(0.1, 0.0),
            c(0.1, 0.0),
            c(0.1, 0.0),
        ],
        10,
    );
    let tails = tail_seminorms(&f, &spec, samples.clamp(1, 500), settings.seed);
    let increase = tails.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    let below = tails
        .iter()
        .position(|t| *t < 1e-6)
        .map_or(f64::INFINITY, |_| 0.0);
    rows.push(row(
        "polynomials",
        "tail seminorm decays monotonically below 1e-6",
        increase.max(below),
        0.0,
    ));
    rows
}
