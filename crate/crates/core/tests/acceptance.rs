//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any failed. Built with `harness = false`.

use std::cmp::Ordering;
use std::fs;
use std::io::Write as _;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use monobasis::multiindex::{
    basis_size, enumerate_monomials, monomials, recursive_extend, strata_by_length, MultiIndex,
};
use monobasis::polynomials::{
    basis_constant_estimate, exp_functional_taylor, length_graded_monotonicity_check,
    monomial_sup_block, tail_seminorms, EstimatorSettings, HomogeneousPolynomial, SampleCloud,
};
use monobasis::rng::{derive_seed, seeded_rng};
use monobasis::sequence_spaces::{
    block_space_norm, epsilon_net, lorentz_norm, lorentz_predual_norm, sample_point,
    CompactSetSpec, LorentzWeights, PExponent, Point,
};
use num_complex::Complex64;
use rand::Rng as _;
use rayon::prelude::*;

const NORM_TOL: f64 = 1e-12;
const SUP_REL_TOL: f64 = 1e-6;
const C1_TOL: f64 = 1e-9;
const ROOT_BOUND: f64 = 10.0;
const TAIL_TARGET: f64 = 1e-6;

type Criterion = (&'static str, Duration, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn block(lambda: &[f64], p: f64) -> CompactSetSpec {
    CompactSetSpec::block(lambda.to_vec(), PExponent::new(p).unwrap()).unwrap()
}

fn lorentz(lambda: &[f64], weights: &[f64]) -> CompactSetSpec {
    CompactSetSpec::lorentz(
        lambda.to_vec(),
        LorentzWeights::new(weights.to_vec()).unwrap(),
    )
    .unwrap()
}

// 1. Ordering.

fn weak_compositions(n: u32, parts: usize) -> Vec<Vec<u32>> {
    fn go(rest: u32, slots: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 1 {
            prefix.push(rest);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in 0..=rest {
            prefix.push(e);
            go(rest - e, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, parts, &mut Vec::new(), &mut out);
    out
}

fn dense_length(v: &[u32]) -> usize {
    v.iter().rposition(|e| *e > 0).map_or(0, |i| i + 1)
}

/// Length first, then the highest coordinate where the exponents differ.
fn oracle_cmp(a: &[u32], b: &[u32]) -> Ordering {
    dense_length(a).cmp(&dense_length(b)).then_with(|| {
        for i in (0..a.len()).rev() {
            match a[i].cmp(&b[i]) {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        Ordering::Equal
    })
}

fn oracle_sorted(n: u32, k: usize) -> Vec<Vec<u32>> {
    let mut all = weak_compositions(n, k);
    all.sort_by(|a, b| oracle_cmp(a, b));
    all
}

fn padded(m: &MultiIndex, k: usize) -> Vec<u32> {
    (1..=k).map(|i| m.exponent(i)).collect()
}

fn criterion_ordering() -> Outcome {
    let mut checked = 0;
    for n in 1..=4u32 {
        for k in 1..=6usize {
            let oracle = oracle_sorted(n, k);
            let count = u128::try_from(oracle.len()).unwrap();
            let listed: Vec<Vec<u32>> = enumerate_monomials(n, k)
                .iter()
                .map(|m| padded(m, k))
                .collect();
            if listed != oracle || basis_size(n, k) != count {
                return outcome(
                    false,
                    format!("enumeration differs from brute force at n={n}, k={k}"),
                );
            }
            // Degree n + 1 from the degree-n strata, one length at a time.
            let mut built = Vec::new();
            for j in 1..=k {
                let stratum = match recursive_extend(&strata_by_length(n, j), j) {
                    Ok(s) => s,
                    Err(e) => return outcome(false, format!("recursive_extend({n}, {j}): {e}")),
                };
                built.extend(stratum.iter().map(|m| padded(m, k)));
            }
            if built != oracle_sorted(n + 1, k) {
                return outcome(
                    false,
                    format!("recursive construction differs at degree {}, k={k}", n + 1),
                );
            }
            checked += 1;
        }
    }
    outcome(true, format!("{checked} (n, k) pairs, exact"))
}

// 2. Norm oracles.

fn permutations(items: &[f64]) -> Vec<Vec<f64>> {
    // Heap's algorithm.
    fn heap(k: usize, a: &mut Vec<f64>, out: &mut Vec<Vec<f64>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        heap(k - 1, a, out);
        for i in 0..k - 1 {
            if k.is_multiple_of(2) {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
            heap(k - 1, a, out);
        }
    }
    let mut out = Vec::new();
    heap(items.len(), &mut items.to_vec(), &mut out);
    out
}

fn random_entries(rng: &mut monobasis::rng::Rng, max_support: usize, max_index: usize) -> Point {
    let nnz = rng.random_range(0..=max_support);
    let mut idx: Vec<usize> = (1..=max_index).collect();
    for i in 0..nnz {
        let j = rng.random_range(i..idx.len());
        idx.swap(i, j);
    }
    Point::from_entries(idx[..nnz].iter().map(|&i| {
        (
            i,
            c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)),
        )
    }))
    .unwrap()
}

fn criterion_norm_oracles() -> Outcome {
    let mut rng = seeded_rng(0xA11CE);
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let z = random_entries(&mut rng, 7, 40);
        let mut w = vec![1.0];
        for _ in 1..7 {
            let last = *w.last().unwrap();
            w.push(last * rng.random_range(0.3..=1.0));
        }
        let weights = LorentzWeights::new(w.clone()).unwrap();
        let moduli: Vec<f64> = z.iter().map(|(_, v)| v.norm()).collect();
        let mut best_sum: f64 = 0.0;
        let mut best_ratio: f64 = 0.0;
        for perm in permutations(&moduli) {
            let mut prefix = 0.0;
            let mut cumulative_weight = 0.0;
            let mut weighted = 0.0;
            for (i, a) in perm.iter().enumerate() {
                prefix += a;
                cumulative_weight += w[i];
                weighted += a * w[i];
                best_ratio = best_ratio.max(prefix / cumulative_weight);
            }
            best_sum = best_sum.max(weighted);
        }
        worst = worst.max((lorentz_norm(&z, &weights).unwrap() - best_sum).abs());
        worst = worst.max((lorentz_predual_norm(&z, &weights).unwrap() - best_ratio).abs());
    }
    let lorentz_worst = worst;

    let mut worst: f64 = 0.0;
    for t in 0..500 {
        let p = [1.0, 1.5, 2.0, 3.0][t % 4]
            + if t % 5 == 4 {
                rng.random_range(0.0..2.0)
            } else {
                0.0
            };
        let z = random_entries(&mut rng, 12, 30);
        let mut sums: Vec<f64> = Vec::new();
        for (i, v) in z.iter() {
            let (mut n, mut end) = (1, 1);
            while i > end {
                n += 1;
                end += n;
            }
            if sums.len() < n {
                sums.resize(n, 0.0);
            }
            sums[n - 1] += v.norm().powf(p);
        }
        let direct = sums.iter().map(|s| s.powf(1.0 / p)).fold(0.0, f64::max);
        worst = worst.max((block_space_norm(&z, PExponent::new(p).unwrap()) - direct).abs());
    }
    let passed = lorentz_worst <= NORM_TOL && worst <= NORM_TOL;
    outcome(
        passed,
        format!("max |error|: Lorentz {lorentz_worst:.2e}, block {worst:.2e} (tol {NORM_TOL:.0e})"),
    )
}

// 3. Compactness.

fn net_cases() -> Vec<(CompactSetSpec, f64)> {
    let harmonic2 = [1.0, 0.5];
    let mut cases = Vec::new();
    for eps in [0.5, 0.6, 0.8, 1.2] {
        cases.push((block(&[0.6, 0.2], 1.0), eps));
    }
    for eps in [0.6, 0.7, 0.9] {
        cases.push((block(&[0.5, 0.3, 0.1], 2.0), eps));
    }
    for eps in [0.15, 0.2, 0.3] {
        cases.push((block(&[0.4], 1.5), eps));
    }
    cases.push((block(&[0.3, 0.3], 3.0), 0.55));
    for eps in [0.2, 0.3, 0.5] {
        cases.push((lorentz(&[0.5, 0.3], &harmonic2), eps));
    }
    for eps in [0.15, 0.25, 0.35] {
        cases.push((lorentz(&[0.4, 0.2, 0.1], &[1.0, 0.6, 0.5]), eps));
    }
    for eps in [0.15, 0.3] {
        cases.push((lorentz(&[0.3], &[1.0]), eps));
    }
    cases.push((lorentz(&[0.8, 0.2], &harmonic2), 0.25));
    cases
}

fn criterion_compactness() -> Outcome {
    let samples = 10_000u64;
    let mut sizes = Vec::new();
    for (case, (spec, eps)) in net_cases().into_iter().enumerate() {
        let net = match epsilon_net(&spec, eps) {
            Ok(net) => net,
            Err(e) => return outcome(false, format!("case {case}: {e}")),
        };
        sizes.push(net.len());
        let failures: usize = (0..samples)
            .into_par_iter()
            .map(|i| {
                let z = sample_point(&spec, derive_seed(case as u64, i));
                let (j, _) = net.nearest(&spec, &z);
                // Recheck the distance with the ambient norm of the difference.
                let d = spec.ambient_norm(&(&z - &net.points()[j])).unwrap();
                usize::from(!spec.contains(&z) || d > eps)
            })
            .sum();
        if failures > 0 {
            return outcome(
                false,
                format!("case {case} (eps {eps}): {failures} of {samples} samples uncovered"),
            );
        }
    }
    outcome(
        true,
        format!(
            "{} pairs x {samples} samples, covered_fraction 1.0; net sizes {sizes:?}",
            sizes.len()
        ),
    )
}

// 4. Closed-form sup.

/// `max_{r∈[0,1]} (r^{1/p})^a ((1-r)^{1/p})^b` by a zooming grid.
fn two_coordinate_max(a: u32, b: u32, p: f64) -> f64 {
    let f = |r: f64| r.powf(a as f64 / p) * (1.0 - r).powf(b as f64 / p);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut best = 0.0f64;
    for _ in 0..12 {
        let steps = 2000;
        let h = (hi - lo) / steps as f64;
        let mut arg = lo;
        for s in 0..=steps {
            let r = lo + h * s as f64;
            let v = f(r);
            if v > best {
                best = v;
                arg = r;
            }
        }
        lo = (arg - 2.0 * h).max(0.0);
        hi = (arg + 2.0 * h).min(1.0);
    }
    best
}

fn criterion_closed_form_sup() -> Outcome {
    let lambda = [1.0, 0.8, 0.5];
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for p in [1.0, 1.5, 2.0, 3.0] {
        let spec = block(&lambda, p);
        for degree in 1..=5u32 {
            for m in monomials(degree, 4) {
                let e = |i| m.exponent(i);
                // Coordinate 1 is block 1, coordinates 2-3 block 2, coordinate 4 block 3.
                let block2 = if e(2) > 0 && e(3) > 0 {
                    lambda[1].powi((e(2) + e(3)) as i32) * two_coordinate_max(e(2), e(3), p)
                } else {
                    lambda[1].powi((e(2) + e(3)) as i32)
                };
                let oracle = lambda[0].powi(e(1) as i32) * block2 * lambda[2].powi(e(4) as i32);
                let exact = match monomial_sup_block(&m, &spec) {
                    Ok(s) => s,
                    Err(err) => return outcome(false, format!("{m}: {err}")),
                };
                if !spec.contains(&exact.witness) {
                    return outcome(false, format!("{m}: witness outside A_λ"));
                }
                worst = worst.max((exact.value - oracle).abs() / oracle);
                count += 1;
            }
        }
    }
    outcome(
        worst <= SUP_REL_TOL,
        format!("{count} monomials, max relative error {worst:.2e} (tol {SUP_REL_TOL:.0e})"),
    )
}

// 5. Length-graded monotonicity.

fn criterion_monotonicity() -> Outcome {
    let specs = [
        block(&[1.0, 0.8, 0.5], 1.5),
        block(&[0.7, 1.0, 0.4], 1.0),
        lorentz(
            &[1.0, 0.8, 0.6, 0.5, 0.4, 0.3],
            &[1.0, 0.5, 1.0 / 3.0, 0.25, 0.2, 1.0 / 6.0],
        ),
        lorentz(
            &[0.9, 0.9, 0.9, 0.9, 0.9, 0.9],
            &[1.0, 0.9, 0.8, 0.7, 0.6, 0.5],
        ),
    ];
    let mut rng = seeded_rng(0x4_2);
    let mut comparisons = 0;
    for instance in 0..1000u64 {
        let n = rng.random_range(1..=4u32);
        let k = rng.random_range(1..=6usize);
        let spec = &specs[instance as usize % specs.len()];
        let strata: Vec<HomogeneousPolynomial> = strata_by_length(n, k)
            .into_iter()
            .map(|stratum| {
                let silent = rng.random_bool(0.2);
                let terms: Vec<(MultiIndex, Complex64)> = stratum
                    .into_iter()
                    .map(|m| {
                        (
                            m,
                            if silent {
                                c(0.0, 0.0)
                            } else {
                                c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                            },
                        )
                    })
                    .collect();
                HomogeneousPolynomial::from_terms(n, terms).unwrap()
            })
            .collect();
        let cuts: Vec<usize> = (1..k).collect();
        let cloud = SampleCloud::new(spec, k, 20, derive_seed(0x4_2, instance), &cuts);
        match length_graded_monotonicity_check(&strata, &cloud) {
            Ok(report) if report.holds => comparisons += report.comparisons.len(),
            Ok(report) => {
                return outcome(
                    false,
                    format!(
                        "instance {instance} (n={n}, k={k}): worst ratio {}",
                        report.worst_ratio
                    ),
                )
            }
            Err(e) => return outcome(false, format!("instance {instance}: {e}")),
        }
    }
    outcome(
        true,
        format!("1000 instances, {comparisons} comparisons, all exact"),
    )
}

// 6. Base case.

fn criterion_base_case() -> Outcome {
    let specs = [
        block(&[1.0], 1.0),
        block(&[1.0, 0.8, 0.5], 1.5),
        block(&[0.5, 1.0, 0.25], 3.0),
        lorentz(&[1.0, 0.8, 0.6, 0.5], &[1.0, 0.5, 1.0 / 3.0, 0.25]),
        lorentz(&[0.7, 0.7, 0.7, 0.7, 0.7], &[1.0, 0.8, 0.8, 0.5, 0.5]),
    ];
    let mut values = Vec::new();
    for (s, spec) in specs.iter().enumerate() {
        for k in [1, 2, 3, 5] {
            let settings = EstimatorSettings {
                trials: 10,
                budget: 500,
                seed: derive_seed(6, (s * 10 + k) as u64),
            };
            match basis_constant_estimate(1, k, spec, settings) {
                Ok(r) => values.push(r.estimate),
                Err(e) => return outcome(false, format!("spec {s}, k={k}: {e}")),
            }
        }
    }
    let worst = values.iter().copied().fold(1.0, f64::max);
    let passed = values.iter().all(|v| (1.0..=1.0 + C1_TOL).contains(v));
    outcome(
        passed,
        format!("{} runs, max ĉ_1 = {worst:.17e}", values.len()),
    )
}

// 7. Growth envelope.

fn criterion_growth() -> Outcome {
    let specs = [
        ("block", block(&[1.0, 0.8, 0.5], 1.5)),
        (
            "lorentz",
            lorentz(&[1.0, 0.8, 0.6, 0.5], &[1.0, 0.5, 1.0 / 3.0, 0.25]),
        ),
    ];
    let mut lines = Vec::new();
    let mut max_root: f64 = 0.0;
    let mut sane = true;
    for (name, spec) in &specs {
        let mut roots = Vec::new();
        for n in 1..=4u32 {
            let settings = EstimatorSettings {
                trials: 20,
                budget: 1000,
                seed: derive_seed(7, n as u64),
            };
            let report = match basis_constant_estimate(n, 4, spec, settings) {
                Ok(r) => r,
                Err(e) => return outcome(false, format!("{name}, n={n}: {e}")),
            };
            sane &= report.estimate.is_finite() && report.estimate >= 1.0;
            max_root = max_root.max(report.root);
            roots.push(format!("{:.4}", report.root));
        }
        lines.push(format!("{name} roots [{}]", roots.join(", ")));
    }
    let passed = sane && max_root <= ROOT_BOUND;
    outcome(
        passed,
        format!(
            "{}; max {max_root:.6} (bound {ROOT_BOUND})",
            lines.join("; ")
        ),
    )
}

// 8. Convergence.

fn criterion_convergence() -> Outcome {
    let phi: Vec<Complex64> = [0.3, 0.2, 0.2, 0.1, 0.1, 0.1]
        .iter()
        .map(|x| c(*x, 0.0))
        .collect();
    let f = exp_functional_taylor(&phi, 12);
    let spec = block(&[1.0, 0.5, 0.25], 2.0);
    let tails = tail_seminorms(&f, &spec, 2000, 8);
    let total = f.term_count();
    let monotone = tails.windows(2).all(|w| w[1] <= w[0]);
    let first_below = tails.iter().position(|t| *t < TAIL_TARGET);
    let passed = monotone && tails[total] == 0.0 && first_below.is_some_and(|n| n < total);
    outcome(
        passed,
        format!(
            "{total} terms, tail(0) = {:.6}, first N with tail < {TAIL_TARGET:.0e}: {first_below:?}, non-increasing: {monotone}",
            tails[0]
        ),
    )
}

// 9. Determinism.

fn run_cli(args: &[&str], stdin: &str) -> (i32, Vec<u8>) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_monobasis"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn criterion_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let configs = [
        (
            "converge",
            r#"{"kind":"converge","space":{"variant":"block","lambda":[1.0,0.5],"p":2.0},"phi":[0.5,[0.2,0.1],0.2],"truncation_degree":6,"budget":300,"seed":1}"#,
        ),
        (
            "basis-constant",
            r#"{"kind":"basis-constant","space":{"variant":"lorentz","lambda":[1.0,0.8,0.6],"weights":[1.0,0.5,0.3]},"n_max":3,"k":3,"trials":5,"budget":200,"seed":2}"#,
        ),
        (
            "p0",
            r#"{"kind":"p0","space":{"variant":"block","lambda":[1.0,0.8],"p":1.5},"n":2,"k":3,"trials":5,"budget":200,"seed":3}"#,
        ),
        (
            "net",
            r#"{"kind":"net","space":{"variant":"block","lambda":[0.6,0.2],"p":1.0},"eps":[0.6,1.2],"samples":500,"seed":4}"#,
        ),
        (
            "invariants",
            r#"{"kind":"invariants","samples":40,"seed":5}"#,
        ),
        ("enumerate", r#"{"kind":"enumerate","n":3,"k":4}"#),
    ];
    let mut runs = 0;
    for (command, text) in configs {
        let path = dir.path().join(format!("{command}.json"));
        fs::write(&path, text).unwrap();
        let path = path.to_str().unwrap();
        let formats: &[&str] = if command == "enumerate" {
            &["csv"]
        } else {
            &["csv", "json"]
        };
        for format in formats {
            let mut outputs = Vec::new();
            for rep in 0..2 {
                let out_path = dir.path().join(format!("{command}-{format}-{rep}.out"));
                let out = out_path.to_str().unwrap();
                let mut args = vec![command, "--config", path, "--out", out];
                if command != "enumerate" {
                    args.extend(["--format", format]);
                }
                let (code, _) = run_cli(&args, "");
                if code != 0 {
                    return outcome(false, format!("{command} exited with {code}"));
                }
                outputs.push(read(Path::new(out)));
                runs += 1;
            }
            if outputs[0] != outputs[1] || outputs[0].is_empty() {
                return outcome(
                    false,
                    format!("{command} --format {format}: outputs differ"),
                );
            }
        }
    }
    let point = r#"{"1": [0.5, 0.5], "4": [-1.0, 0.0], "5": [0.0, 2.0]}"#;
    for args in [
        &["norm", "--space", "block", "--p", "1.5"][..],
        &["norm", "--space", "lorentz"][..],
    ] {
        let (a, b) = (run_cli(args, point), run_cli(args, point));
        runs += 2;
        if a.0 != 0 || a != b {
            return outcome(false, format!("{} differs between runs", args.join(" ")));
        }
    }
    outcome(
        true,
        format!("{runs} runs over 7 commands, byte-identical in pairs"),
    )
}

fn read(path: &Path) -> Vec<u8> {
    fs::read(path).unwrap_or_default()
}

fn main() {
    let criteria: [Criterion; 9] = [
        (
            "ordering correctness",
            Duration::from_secs(5),
            criterion_ordering,
        ),
        (
            "norm oracles",
            Duration::from_secs(10),
            criterion_norm_oracles,
        ),
        (
            "compactness shadow",
            Duration::from_secs(60),
            criterion_compactness,
        ),
        (
            "closed-form sup",
            Duration::from_secs(120),
            criterion_closed_form_sup,
        ),
        (
            "length-graded monotonicity",
            Duration::from_secs(600),
            criterion_monotonicity,
        ),
        (
            "base case c1 = 1",
            Duration::from_secs(600),
            criterion_base_case,
        ),
        (
            "growth envelope",
            Duration::from_secs(600),
            criterion_growth,
        ),
        (
            "basis convergence shadow",
            Duration::from_secs(120),
            criterion_convergence,
        ),
        (
            "CLI determinism",
            Duration::from_secs(600),
            criterion_determinism,
        ),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|_| outcome(false, "panicked"));
        let elapsed = start.elapsed();
        let in_time = elapsed <= limit;
        let passed = result.passed && in_time;
        failed += usize::from(!passed);
        let timing = if in_time {
            String::new()
        } else {
            format!(" [over the {}s limit]", limit.as_secs())
        };
        println!(
            "{} criterion {}: {name} ({:.2}s){timing}: {}",
            if passed { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64(),
            result.detail
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 9 acceptance criteria passed");
}
