//! Block layout of `c0(⊕ ℓp^i)`: block `n` holds the `n` coordinates
//! `s(n-1)+1 ..= s(n)` where `s(n) = n(n+1)/2`.

use std::ops::RangeInclusive;

use super::SpaceError;

/// `s(n)`; `s(0) = 0`.
pub fn triangular(n: usize) -> usize {
    n * (n + 1) / 2
}

/// The coordinate interval `I(n)`.
pub fn block_range(n: usize) -> Result<RangeInclusive<usize>, SpaceError> {
    if n == 0 {
        return Err(SpaceError::Domain("block I(0) is undefined".into()));
    }
    Ok(triangular(n - 1) + 1..=triangular(n))
}

pub fn block_layout(n: usize) -> Result<(usize, RangeInclusive<usize>), SpaceError> {
    Ok((triangular(n), block_range(n)?))
}

/// The unique `n` with `i ∈ I(n)`.
pub fn block_of_index(i: usize) -> Result<usize, SpaceError> {
    if i == 0 {
        return Err(SpaceError::InvalidIndex(0));
    }
    // smallest n with n(n+1)/2 >= i; start from the float estimate and fix up
    let mut n = (((8.0 * i as f64 + 1.0).sqrt() - 1.0) / 2.0).ceil() as usize;
    while n > 1 && triangular(n - 1) >= i {
        n -= 1;
    }
    while triangular(n) < i {
        n += 1;
    }
    Ok(n)
}
