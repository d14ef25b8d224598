use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use super::PolyError;
use crate::multiindex::MultiIndex;
use crate::sequence_spaces::{block_of_index, CompactSetSpec, Point};

/// How a [`SupEstimate`] was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SupMode {
    ExactClosedForm,
    /// A feasible point from a convex solver; equal to the sup up to the
    /// solver tolerance and never above it.
    OptimizedLowerBound,
    SampledLowerBound,
}

/// `sup_{z∈A_λ} |P(z)|` or a lower bound for it, with a member of `A_λ`
/// attaining `value`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SupEstimate {
    pub value: f64,
    pub mode: SupMode,
    pub witness: Point,
    /// Number of sampled points behind the estimate (0 when not sampled).
    pub budget: usize,
}

fn real_point(entries: impl IntoIterator<Item = (usize, f64)>) -> Point {
    Point::from_entries(
        entries
            .into_iter()
            .map(|(i, v)| (i, Complex64::new(v, 0.0))),
    )
    .expect("finite witness")
    .normalized()
}

fn zero_sup(mode: SupMode) -> SupEstimate {
    SupEstimate {
        value: 0.0,
        mode,
        witness: Point::zero(),
        budget: 0,
    }
}

/// Exact `sup |z^m|` over a block-type `A_λ`.
///
/// Blocks decouple. In block `n` with block degree `M = Σ_{i∈I(n)} m_i > 0`
/// the maximum of `Π |z_i|^{m_i}` subject to `Σ |z_i|^p ≤ λ_n^p` is
/// `λ_n^M Π (m_i/M)^{m_i/p}`, attained at `|z_i| = λ_n (m_i/M)^{1/p}`.
pub fn monomial_sup_block(m: &MultiIndex, spec: &CompactSetSpec) -> Result<SupEstimate, PolyError> {
    let CompactSetSpec::Block { p, .. } = spec else {
        return Err(PolyError::WrongVariant("monomial_sup_block", "block"));
    };
    let p = p.get();
    let mut by_block: Vec<(usize, Vec<(usize, u32)>)> = Vec::new();
    for (i, e) in m.iter() {
        let n = block_of_index(i).expect("1-based");
        match by_block.last_mut() {
            Some((last, members)) if *last == n => members.push((i, e)),
            _ => by_block.push((n, vec![(i, e)])),
        }
    }
    let mut value = 1.0;
    let mut witness = Vec::new();
    for (n, members) in by_block {
        let lam = spec.lambda(n);
        if lam == 0.0 {
            return Ok(zero_sup(SupMode::ExactClosedForm));
        }
        let total: u32 = members.iter().map(|(_, e)| e).sum();
        value *= lam.powi(total as i32);
        for (i, e) in members {
            let share = e as f64 / total as f64;
            value *= share.powf(e as f64 / p);
            witness.push((i, lam * share.powf(1.0 / p)));
        }
    }
    Ok(SupEstimate {
        value,
        mode: SupMode::ExactClosedForm,
        witness: real_point(witness),
        budget: 0,
    })
}

/// `sup |z^m|` over a Lorentz-type `A_λ`, by a log-barrier Newton method.
///
/// Pairing the largest moduli with the largest exponents is optimal, so with
/// `a_1 ≥ … ≥ a_d` the sorted exponents the problem is
/// `max Σ a_j log y_j` over `y_1 ≥ … ≥ y_d > 0` with
/// `Σ_{i≤k} y_i ≤ min_{j≥k} λ_j W_j`: a concave objective under linear
/// constraints. The returned witness is strictly feasible.
pub fn monomial_sup_lorentz(
    m: &MultiIndex,
    spec: &CompactSetSpec,
) -> Result<SupEstimate, PolyError> {
    let CompactSetSpec::Lorentz { lambda, weights } = spec else {
        return Err(PolyError::WrongVariant("monomial_sup_lorentz", "lorentz"));
    };
    if m.length() == 0 {
        return Ok(SupEstimate {
            value: 1.0,
            mode: SupMode::ExactClosedForm,
            witness: Point::zero(),
            budget: 0,
        });
    }
    if m.length() > lambda.len() {
        return Ok(zero_sup(SupMode::ExactClosedForm));
    }
    let mut order: Vec<(usize, u32)> = m.iter().collect();
    order.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let d = order.len();
    let caps: Vec<f64> = (1..=lambda.len())
        .map(|k| lambda[k - 1] * weights.partial_sum(k))
        .collect();
    // effective cap on the k-th prefix sum of the support profile
    let eff: Vec<f64> = (1..=d)
        .map(|k| caps[k - 1..].iter().copied().fold(f64::INFINITY, f64::min))
        .collect();
    if eff[0] <= 0.0 {
        return Ok(zero_sup(SupMode::ExactClosedForm));
    }
    let exps: Vec<f64> = order.iter().map(|(_, e)| *e as f64).collect();
    let (y, mode) = if d == 1 {
        (vec![eff[0]], SupMode::ExactClosedForm)
    } else {
        (barrier_maximize(&exps, &eff), SupMode::OptimizedLowerBound)
    };
    let value = y.iter().zip(&exps).map(|(v, a)| v.powf(*a)).product();
    let witness = real_point(order.iter().zip(&y).map(|((i, _), v)| (*i, *v)));
    Ok(SupEstimate {
        value,
        mode,
        witness,
        budget: 0,
    })
}

/// Maximizes `Σ a_j log y_j` subject to `y_j ≥ y_{j+1}` and
/// `Σ_{i≤k} y_i ≤ caps[k-1]`; `caps` is non-decreasing and positive.
fn barrier_maximize(a: &[f64], caps: &[f64]) -> Vec<f64> {
    let d = a.len();
    let slack = |y: &[f64]| -> Option<Vec<f64>> {
        let mut s = Vec::with_capacity(2 * d);
        let mut acc = 0.0;
        for k in 0..d {
            acc += y[k];
            s.push(caps[k] - acc);
        }
        for k in 0..d - 1 {
            s.push(y[k] - y[k + 1]);
        }
        s.push(y[d - 1]);
        s.iter().all(|v| *v > 0.0).then_some(s)
    };
    let objective = |y: &[f64], s: &[f64], mu: f64| -> f64 {
        -y.iter().zip(a).map(|(v, e)| e * v.ln()).sum::<f64>()
            - mu * s.iter().map(|v| v.ln()).sum::<f64>()
    };

    // strictly decreasing start well inside every prefix cap
    let scale = (0..d)
        .map(|k| caps[k] / (k + 1) as f64)
        .fold(f64::INFINITY, f64::min)
        * 0.5;
    let mut y: Vec<f64> = (0..d)
        .map(|i| scale * (2 * d - i) as f64 / (2 * d) as f64)
        .collect();

    let mut mu = 1.0;
    while mu > 1e-14 {
        for _ in 0..100 {
            let s = slack(&y).expect("iterate stays feasible");
            let mut grad: DVector<f64> = DVector::zeros(d);
            let mut hess: DMatrix<f64> = DMatrix::zeros(d, d);
            for j in 0..d {
                grad[j] -= a[j] / y[j];
                hess[(j, j)] += a[j] / (y[j] * y[j]);
            }
            // prefix caps: gradient of the slack is -1 on the first k+1 entries
            for (k, &g) in s.iter().enumerate().take(d) {
                for j in 0..=k {
                    grad[j] += mu / g;
                    for l in 0..=k {
                        hess[(j, l)] += mu / (g * g);
                    }
                }
            }
            // ordering y_k - y_{k+1}
            for k in 0..d - 1 {
                let g = s[d + k];
                grad[k] -= mu / g;
                grad[k + 1] += mu / g;
                let h = mu / (g * g);
                hess[(k, k)] += h;
                hess[(k + 1, k + 1)] += h;
                hess[(k, k + 1)] -= h;
                hess[(k + 1, k)] -= h;
            }
            let g = s[2 * d - 1];
            grad[d - 1] -= mu / g;
            hess[(d - 1, d - 1)] += mu / (g * g);

            let Some(chol) = hess.cholesky() else { break };
            let step = -chol.solve(&grad);
            let decrement = -grad.dot(&step);
            if decrement.is_nan() || decrement <= 1e-18 {
                break;
            }
            let f0 = objective(&y, &s, mu);
            let mut t = 1.0;
            let mut moved = false;
            while t > 1e-12 {
                let trial: Vec<f64> = y
                    .iter()
                    .zip(step.iter())
                    .map(|(v, dv)| v + t * dv)
                    .collect();
                if let Some(ts) = slack(&trial) {
                    if objective(&trial, &ts, mu) <= f0 - 0.25 * t * decrement {
                        y = trial;
                        moved = true;
                        break;
                    }
                }
                t *= 0.5;
            }
            if !moved || decrement < 1e-14 {
                break;
            }
        }
        mu *= 0.1;
    }
    y
}

/// Dispatches on the variant.
pub fn monomial_sup(m: &MultiIndex, spec: &CompactSetSpec) -> Result<SupEstimate, PolyError> {
    if spec.is_block() {
        monomial_sup_block(m, spec)
    } else {
        monomial_sup_lorentz(m, spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence_spaces::{LorentzWeights, PExponent};

    fn mi(e: &[u32]) -> MultiIndex {
        MultiIndex::from_dense(e)
    }

    fn block(lambda: &[f64], p: f64) -> CompactSetSpec {
        CompactSetSpec::block(lambda.to_vec(), PExponent::new(p).unwrap()).unwrap()
    }

    fn lorentz(lambda: &[f64], len: usize) -> CompactSetSpec {
        CompactSetSpec::lorentz(lambda.to_vec(), LorentzWeights::harmonic(len)).unwrap()
    }

    fn witness_value(m: &MultiIndex, s: &SupEstimate) -> f64 {
        m.iter()
            .map(|(i, e)| s.witness.get(i).norm().powi(e as i32))
            .product()
    }

    #[test]
    fn block_examples() {
        for p in [1.0, 2.0, 3.7] {
            assert_eq!(
                monomial_sup_block(&mi(&[2]), &block(&[1.0], p))
                    .unwrap()
                    .value,
                1.0
            );
        }
        let s = monomial_sup_block(&mi(&[0, 1, 1]), &block(&[1.0, 1.0], 2.0)).unwrap();
        assert!((s.value - 0.5).abs() < 1e-15);
        let spec = block(&[0.7, 0.9], 1.5);
        let joint = monomial_sup_block(&mi(&[2, 1, 0]), &spec).unwrap().value;
        let split = monomial_sup_block(&mi(&[2]), &spec).unwrap().value
            * monomial_sup_block(&mi(&[0, 1]), &spec).unwrap().value;
        assert!((joint - split).abs() < 1e-15);
        assert_eq!(
            monomial_sup_block(&mi(&[0, 0, 0, 1]), &spec).unwrap().value,
            0.0
        );
        assert!(monomial_sup_block(&mi(&[1]), &lorentz(&[1.0], 1)).is_err());
    }

    #[test]
    fn block_witnesses_attain_the_value() {
        let spec = block(&[1.0, 0.8, 0.5], 1.5);
        for m in crate::multiindex::monomials(4, 5) {
            let s = monomial_sup_block(&m, &spec).unwrap();
            assert!(spec.contains(&s.witness));
            assert!((witness_value(&m, &s) - s.value).abs() <= 1e-12 * s.value);
        }
    }

    #[test]
    fn lorentz_examples() {
        let s = monomial_sup_lorentz(&mi(&[1]), &lorentz(&[1.0, 1.0, 1.0], 3)).unwrap();
        assert_eq!(s.value, 1.0);
        let s = monomial_sup_lorentz(&mi(&[1, 2]), &lorentz(&[0.0, 0.0], 2)).unwrap();
        assert_eq!(s.value, 0.0);
        let s = monomial_sup_lorentz(&mi(&[0, 0, 1]), &lorentz(&[1.0, 1.0], 3)).unwrap();
        assert_eq!(s.value, 0.0);
        let s = monomial_sup_lorentz(&MultiIndex::empty(), &lorentz(&[1.0], 1)).unwrap();
        assert_eq!(s.value, 1.0);
    }

    /// Grid search over moduli in `[0, top]^d`, refined around the best
    /// feasible node.
    fn lorentz_grid_oracle(m: &MultiIndex, spec: &CompactSetSpec) -> f64 {
        let d = m.length();
        let top = spec.lambda(1);
        let mut lo = vec![0.0; d];
        let mut hi = vec![top; d];
        let steps = if d == 3 { 24 } else { 200 };
        let (lambda, weights) = match spec {
            CompactSetSpec::Lorentz { lambda, weights } => (lambda.clone(), weights.clone()),
            _ => unreachable!(),
        };
        let feasible = |y: &[f64]| {
            let mut sorted = y.to_vec();
            sorted.sort_by(|a, b| b.total_cmp(a));
            let mut acc = 0.0;
            (1..=lambda.len()).all(|k| {
                acc += sorted.get(k - 1).copied().unwrap_or(0.0);
                acc / weights.partial_sum(k) <= lambda[k - 1] + 1e-12
            })
        };
        let mut best = (0.0, vec![0.0; d]);
        for _ in 0..30 {
            let mut idx = vec![0usize; d];
            loop {
                let y: Vec<f64> = (0..d)
                    .map(|j| lo[j] + (hi[j] - lo[j]) * idx[j] as f64 / steps as f64)
                    .collect();
                if feasible(&y) {
                    let v: f64 = m.iter().map(|(i, e)| y[i - 1].powi(e as i32)).product();
                    if v > best.0 {
                        best = (v, y);
                    }
                }
                let mut j = 0;
                while j < d {
                    idx[j] += 1;
                    if idx[j] <= steps {
                        break;
                    }
                    idx[j] = 0;
                    j += 1;
                }
                if j == d {
                    break;
                }
            }
            for j in 0..d {
                let w = (hi[j] - lo[j]) / steps as f64 * 4.0;
                lo[j] = (best.1[j] - w).max(0.0);
                hi[j] = (best.1[j] + w).min(top);
            }
        }
        best.0
    }

    #[test]
    fn lorentz_matches_grid_search_in_low_dimension() {
        let specs = [
            lorentz(&[1.0, 1.0, 1.0], 3),
            lorentz(&[1.0, 0.6, 0.5], 3),
            lorentz(&[0.9, 0.9, 0.2], 4),
        ];
        for spec in &specs {
            for n in 1..=4 {
                for m in crate::multiindex::monomials(n, 3) {
                    let s = monomial_sup_lorentz(&m, spec).unwrap();
                    assert!(spec.contains(&s.witness), "{m} {spec:?}");
                    assert!((witness_value(&m, &s) - s.value).abs() <= 1e-10 * s.value);
                    let oracle = lorentz_grid_oracle(&m, spec);
                    assert!(
                        s.value >= oracle * (1.0 - 1e-9),
                        "{m}: {} < oracle {oracle}",
                        s.value
                    );
                    assert!(
                        (s.value - oracle).abs() <= 1e-4 * oracle,
                        "{m}: {} vs {oracle}",
                        s.value
                    );
                }
            }
        }
    }
}
