use std::f64::consts::SQRT_2;

use num_complex::Complex64;

use super::layout::{block_range, triangular};
use super::{CompactSetSpec, Point, SpaceError, MEMBERSHIP_TOL};

/// Upper bound on the number of points [`epsilon_net`] will materialize.
pub const DEFAULT_NET_CAP: usize = 2_000_000;

/// A finite subset of `A_λ` such that every member of `A_λ` lies within
/// `eps` of one of its points (ambient norm).
#[derive(Clone, Debug)]
pub struct EpsilonNet {
    eps: f64,
    /// Number of leading blocks (block variant) or coordinates (Lorentz)
    /// that were gridded; 0 when the net is `{0}`.
    truncation: usize,
    step: f64,
    dim: usize,
    points: Vec<Point>,
    dense: Vec<Vec<Complex64>>,
}

impl EpsilonNet {
    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Grid step used for real and imaginary parts (0 for the zero net).
    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index of and distance to the nearest net point (exhaustive scan).
    pub fn nearest(&self, spec: &CompactSetSpec, z: &Point) -> (usize, f64) {
        let (zd, tail) = self.densify(spec, z);
        let mut best = (0, f64::INFINITY);
        for (j, y) in self.dense.iter().enumerate() {
            let d = dense_distance(spec, &zd, y, &tail);
            if d < best.1 {
                best = (j, d);
            }
        }
        best
    }

    /// Whether some net point lies within `eps` of `z`; stops at the first.
    pub fn covers(&self, spec: &CompactSetSpec, z: &Point) -> bool {
        let (zd, tail) = self.densify(spec, z);
        self.dense
            .iter()
            .any(|y| dense_distance(spec, &zd, y, &tail) <= self.eps)
    }

    /// Dense copy of `z` on the gridded coordinates plus the contribution of
    /// everything past them (block norm of the tail, or the tail moduli).
    fn densify(&self, spec: &CompactSetSpec, z: &Point) -> (Vec<Complex64>, TailPart) {
        let head = z.to_dense(self.dim);
        let rest =
            Point::from_entries(z.iter().filter(|(i, _)| *i > self.dim)).expect("valid point");
        let tail = match spec {
            CompactSetSpec::Block { p, .. } => {
                TailPart::BlockNorm(super::block_space_norm(&rest, *p))
            }
            CompactSetSpec::Lorentz { .. } => {
                TailPart::Moduli(rest.iter().map(|(_, v)| v.norm()).collect())
            }
        };
        (head, tail)
    }
}

enum TailPart {
    BlockNorm(f64),
    Moduli(Vec<f64>),
}

fn dense_distance(spec: &CompactSetSpec, z: &[Complex64], y: &[Complex64], tail: &TailPart) -> f64 {
    match (spec, tail) {
        (CompactSetSpec::Block { p, .. }, TailPart::BlockNorm(t)) => {
            let p = p.get();
            let mut best = *t;
            let mut n = 1;
            loop {
                let range = block_range(n).expect("n >= 1");
                if *range.start() > z.len() {
                    break;
                }
                let s: f64 = range
                    .filter(|i| *i <= z.len())
                    .map(|i| (z[i - 1] - y[i - 1]).norm().powf(p))
                    .sum();
                best = best.max(s.powf(1.0 / p));
                n += 1;
            }
            best
        }
        (CompactSetSpec::Lorentz { weights, .. }, TailPart::Moduli(rest)) => {
            let mut mods: Vec<f64> = z.iter().zip(y).map(|(a, b)| (a - b).norm()).collect();
            mods.extend_from_slice(rest);
            mods.retain(|m| *m > 0.0);
            mods.sort_by(|a, b| b.total_cmp(a));
            let mut acc = 0.0;
            let mut best: f64 = 0.0;
            for (k, m) in mods.iter().enumerate() {
                acc += m;
                // beyond the weight prefix W_k only grows, so the last known W bounds the ratio
                let wk = weights.partial_sum((k + 1).min(weights.len()));
                best = best.max(acc / wk);
            }
            best
        }
        _ => unreachable!("tail kind matches the spec variant"),
    }
}

/// Builds an `eps`-net of `A_λ`.
///
/// Block variant: with `m0` the last block where `λ_m > eps/2`, the tail
/// blocks contribute at most `eps/2`; the first `m0` blocks are gridded with
/// step `h = eps / (2√2 · m0^{1/p})` in real and imaginary parts. Rounding a
/// member toward zero on that grid keeps it in `A_λ` (solidity) and moves it
/// by less than `eps/2`, so every member is within `eps` of a net point.
///
/// Lorentz variant: all coordinates of the slice are gridded with step
/// `h = eps / (√2 · max_k k/W_k)`, again rounding toward zero; the net is
/// `{0}` when every `λ_k ≤ eps/2`.
pub fn epsilon_net(spec: &CompactSetSpec, eps: f64) -> Result<EpsilonNet, SpaceError> {
    epsilon_net_capped(spec, eps, DEFAULT_NET_CAP)
}

pub fn epsilon_net_capped(
    spec: &CompactSetSpec,
    eps: f64,
    cap: usize,
) -> Result<EpsilonNet, SpaceError> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(SpaceError::Domain(format!(
            "eps must be positive, got {eps}"
        )));
    }
    let lambda = spec.lambda_prefix();
    let (truncation, step, dense) = match spec {
        CompactSetSpec::Block { p, .. } => {
            let m0 = lambda
                .iter()
                .rposition(|l| *l > eps / 2.0)
                .map_or(0, |j| j + 1);
            if m0 == 0 {
                (0, 0.0, vec![Vec::new()])
            } else {
                let p = p.get();
                let h = eps / (2.0 * SQRT_2 * (m0 as f64).powf(1.0 / p));
                let mut factors: Vec<Vec<Vec<Complex64>>> = Vec::with_capacity(m0);
                let mut size: u128 = 1;
                for n in 1..=m0 {
                    let limit = cap / size as usize;
                    let f = block_candidates(n, lambda[n - 1], p, h, limit).ok_or(
                        SpaceError::NetTooLarge {
                            size: size * (limit as u128 + 1),
                            cap,
                        },
                    )?;
                    size *= f.len() as u128;
                    factors.push(f);
                }
                (m0, h, cartesian(&factors))
            }
        }
        CompactSetSpec::Lorentz { weights, .. } => {
            if lambda.iter().all(|l| *l <= eps / 2.0) {
                (0, 0.0, vec![Vec::new()])
            } else {
                let len = lambda.len();
                let spread = (1..=len)
                    .map(|k| k as f64 / weights.partial_sum(k))
                    .fold(0.0, f64::max);
                let h = eps / (SQRT_2 * spread);
                let caps: Vec<f64> = (1..=len)
                    .map(|k| lambda[k - 1] * weights.partial_sum(k))
                    .collect();
                let radius = caps.iter().copied().fold(f64::INFINITY, f64::min);
                let per_coord = disc_grid(radius, h);
                let raw = (per_coord.len() as u128).saturating_pow(len as u32);
                if raw > 64 * cap as u128 {
                    return Err(SpaceError::NetTooLarge { size: raw, cap });
                }
                let wsums: Vec<f64> = (1..=len).map(|k| weights.partial_sum(k)).collect();
                let mut out = Vec::new();
                let mut current = Vec::with_capacity(len);
                lorentz_grid(&per_coord, &caps, &wsums, &mut current, &mut out, cap)?;
                (len, h, out)
            }
        }
    };
    let dim = match spec {
        CompactSetSpec::Block { .. } => triangular(truncation),
        CompactSetSpec::Lorentz { .. } => truncation,
    };
    let points = dense.iter().map(|v| Point::from_dense(v)).collect();
    debug_assert!(dense.iter().all(|v| v.len() == dim));
    Ok(EpsilonNet {
        eps,
        truncation,
        step,
        dim,
        points,
        dense,
    })
}

/// Grid points `(a h, b h)` of modulus at most `radius` (with tolerance).
fn disc_grid(radius: f64, h: f64) -> Vec<Complex64> {
    let a_max = ((radius + MEMBERSHIP_TOL) / h).floor() as i64;
    let mut out = Vec::new();
    for a in -a_max..=a_max {
        for b in -a_max..=a_max {
            let v = Complex64::new(a as f64 * h, b as f64 * h);
            if v.norm() <= radius + MEMBERSHIP_TOL {
                out.push(v);
            }
        }
    }
    out
}

/// All grid vectors of block `n` whose ℓp norm is at most `lambda`, or
/// `None` once more than `limit` have been found.
fn block_candidates(
    n: usize,
    lambda: f64,
    p: f64,
    h: f64,
    limit: usize,
) -> Option<Vec<Vec<Complex64>>> {
    struct Search<'a> {
        n: usize,
        disc: &'a [Complex64],
        p: f64,
        lambda: f64,
        budget: f64,
        limit: usize,
        out: Vec<Vec<Complex64>>,
    }

    impl Search<'_> {
        // every prefix within budget extends by zeros, so the tree visited is
        // at most `limit * n * disc.len()` nodes
        fn rec(&mut self, used: f64, current: &mut Vec<Complex64>) -> bool {
            if current.len() == self.n {
                let norm = if self.p == 1.0 {
                    current.iter().map(|v| v.norm()).sum::<f64>()
                } else {
                    current
                        .iter()
                        .map(|v| v.norm().powf(self.p))
                        .sum::<f64>()
                        .powf(1.0 / self.p)
                };
                if norm <= self.lambda + MEMBERSHIP_TOL {
                    if self.out.len() == self.limit {
                        return false;
                    }
                    self.out.push(current.clone());
                }
                return true;
            }
            for v in self.disc {
                let u = used + v.norm().powf(self.p);
                if u > self.budget * (1.0 + 1e-12) {
                    continue;
                }
                current.push(*v);
                let ok = self.rec(u, current);
                current.pop();
                if !ok {
                    return false;
                }
            }
            true
        }
    }

    let disc = disc_grid(lambda, h);
    let mut search = Search {
        n,
        disc: &disc,
        p,
        lambda,
        budget: (lambda + MEMBERSHIP_TOL).powf(p),
        limit,
        out: Vec::new(),
    };
    let mut current = Vec::with_capacity(n);
    search.rec(0.0, &mut current).then_some(search.out)
}

fn cartesian(factors: &[Vec<Vec<Complex64>>]) -> Vec<Vec<Complex64>> {
    let mut acc: Vec<Vec<Complex64>> = vec![Vec::new()];
    for f in factors {
        let mut next = Vec::with_capacity(acc.len() * f.len());
        for head in &acc {
            for block in f {
                let mut v = head.clone();
                v.extend_from_slice(block);
                next.push(v);
            }
        }
        acc = next;
    }
    acc
}

/// Depth-first over coordinates; a partial vector whose rearranged partial
/// sums already exceed the caps cannot be completed.
fn lorentz_grid(
    per_coord: &[Complex64],
    caps: &[f64],
    wsums: &[f64],
    current: &mut Vec<Complex64>,
    out: &mut Vec<Vec<Complex64>>,
    cap: usize,
) -> Result<(), SpaceError> {
    let mut mods: Vec<f64> = current.iter().map(|v| v.norm()).collect();
    mods.sort_by(|a, b| b.total_cmp(a));
    let mut acc = 0.0;
    for (k, c) in caps.iter().enumerate() {
        acc += mods.get(k).copied().unwrap_or(0.0);
        // caps are λ_k W_k; the membership tolerance is on the ratio
        if acc / wsums[k] > c / wsums[k] + MEMBERSHIP_TOL {
            return Ok(());
        }
    }
    if current.len() == caps.len() {
        if out.len() >= cap {
            return Err(SpaceError::NetTooLarge {
                size: cap as u128 + 1,
                cap,
            });
        }
        out.push(current.clone());
        return Ok(());
    }
    for v in per_coord {
        current.push(*v);
        lorentz_grid(per_coord, caps, wsums, current, out, cap)?;
        current.pop();
    }
    Ok(())
}
