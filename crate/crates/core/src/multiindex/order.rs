//! A compatible ordering of all monomials across degrees.
//!
//! Pairs `(n, r)` (degree, within-degree rank) are listed diagonal by
//! diagonal: by `n + r`, and by `n` inside a diagonal. For fixed `n` the
//! position is strictly increasing in `r`.

fn triangular(d: u128) -> u128 {
    d.checked_mul(d + 1).expect("global position overflow") / 2
}

/// Global 0-based position `φ(n, r) = T(n + r) + n`, `T(d) = d(d+1)/2`.
pub fn compatible_rank(n: u32, r: u128) -> u128 {
    triangular(n as u128 + r) + n as u128
}

/// Inverse of [`compatible_rank`].
pub fn compatible_unrank(position: u128) -> (u32, u128) {
    // largest d with T(d) ≤ position
    let mut d = ((8.0 * position as f64 + 1.0).sqrt() as u128).saturating_sub(1) / 2;
    while triangular(d + 1) <= position {
        d += 1;
    }
    while triangular(d) > position {
        d -= 1;
    }
    let n = position - triangular(d);
    (n as u32, d - n)
}
