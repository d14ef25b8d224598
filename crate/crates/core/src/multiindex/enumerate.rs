use serde::{Serialize, Serializer};

use super::{square_cmp, MultiIndex, MultiIndexError};

/// `C(a, b)` in `u128`. Panics on overflow, which needs degrees far beyond
/// anything that can be enumerated.
pub(crate) fn binomial(a: u128, b: u128) -> u128 {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    let mut acc: u128 = 1;
    for i in 0..b {
        // acc * (a - i) is divisible by (i + 1)
        acc = acc.checked_mul(a - i).expect("binomial overflow") / (i + 1);
    }
    acc
}

/// Number of degree-`n` monomials of length at most `k_max` (weak
/// compositions of `n` into `k_max` parts).
pub fn basis_size(n: u32, k_max: usize) -> u128 {
    if k_max == 0 {
        return u128::from(n == 0);
    }
    binomial(n as u128 + k_max as u128 - 1, k_max as u128 - 1)
}

/// Streams the degree-`n` monomials of length at most `k_max` in square
/// order, starting from `z_1^n`.
#[derive(Clone, Debug)]
pub struct MonomialIter {
    current: Option<Vec<u32>>,
}

impl Iterator for MonomialIter {
    type Item = MultiIndex;

    fn next(&mut self) -> Option<MultiIndex> {
        let exps = self.current.as_mut()?;
        let out = MultiIndex::from_dense(exps);
        // co-lexicographic successor: move one unit from the lowest nonzero
        // coordinate below the top up by one place, and reset the rest of it
        // to coordinate 1
        let k = exps.len();
        match (0..k.saturating_sub(1)).find(|&i| exps[i] > 0) {
            Some(i) => {
                let rest = exps[i] - 1;
                exps[i] = 0;
                exps[i + 1] += 1;
                exps[0] = rest;
            }
            None => self.current = None,
        }
        Some(out)
    }
}

pub fn monomials(n: u32, k_max: usize) -> MonomialIter {
    let current = match (n, k_max) {
        (0, _) => Some(Vec::new()),
        (_, 0) => None,
        _ => {
            let mut v = vec![0; k_max];
            v[0] = n;
            Some(v)
        }
    };
    MonomialIter { current }
}

/// The square-ordered basis `{z^m : |m| = n, l(m) ≤ k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedMonomialBasis {
    degree: u32,
    max_length: usize,
    list: Vec<MultiIndex>,
}

impl OrderedMonomialBasis {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn max_length(&self) -> usize {
        self.max_length
    }

    pub fn as_slice(&self) -> &[MultiIndex] {
        &self.list
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, MultiIndex> {
        self.list.iter()
    }

    pub fn into_vec(self) -> Vec<MultiIndex> {
        self.list
    }
}

impl<'a> IntoIterator for &'a OrderedMonomialBasis {
    type Item = &'a MultiIndex;
    type IntoIter = std::slice::Iter<'a, MultiIndex>;

    fn into_iter(self) -> Self::IntoIter {
        self.list.iter()
    }
}

impl IntoIterator for OrderedMonomialBasis {
    type Item = MultiIndex;
    type IntoIter = std::vec::IntoIter<MultiIndex>;

    fn into_iter(self) -> Self::IntoIter {
        self.list.into_iter()
    }
}

impl Serialize for OrderedMonomialBasis {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.list.serialize(serializer)
    }
}

pub fn enumerate_monomials(n: u32, k_max: usize) -> OrderedMonomialBasis {
    OrderedMonomialBasis {
        degree: n,
        max_length: k_max,
        list: monomials(n, k_max).collect(),
    }
}

/// 0-based position of `m` among the degree-`|m|` monomials of length at
/// most `k_max`. The position does not depend on `k_max` as long as
/// `l(m) ≤ k_max`.
pub fn rank(m: &MultiIndex, k_max: usize) -> Result<u128, MultiIndexError> {
    if m.length() > k_max {
        return Err(MultiIndexError::LengthExceeds {
            length: m.length(),
            max: k_max,
        });
    }
    let exps = m.exponents();
    let mut remaining: u128 = m.degree() as u128;
    let mut r = 0;
    for j in (2..=exps.len()).rev() {
        let e = exps[j - 1] as u128;
        // elements agreeing above j with a smaller exponent at j:
        // Σ_{v<e} C(R - v + j - 2, j - 2) = C(R + j - 1, j - 1) - C(R - e + j - 1, j - 1)
        let j = j as u128;
        r += binomial(remaining + j - 1, j - 1) - binomial(remaining - e + j - 1, j - 1);
        remaining -= e;
    }
    Ok(r)
}

/// Inverse of [`rank`] for degree `n`.
pub fn unrank(n: u32, r: u128, k_max: usize) -> Result<MultiIndex, MultiIndexError> {
    let size = basis_size(n, k_max);
    if r >= size {
        return Err(MultiIndexError::RankOutOfRange { rank: r, size });
    }
    if n == 0 {
        return Ok(MultiIndex::empty());
    }
    let mut exps = vec![0u32; k_max];
    let mut remaining = n as u128;
    let mut r = r;
    for j in (2..=k_max).rev() {
        let jj = j as u128;
        let mut v = 0u128;
        loop {
            let count = binomial(remaining - v + jj - 2, jj - 2);
            if r < count {
                break;
            }
            r -= count;
            v += 1;
        }
        exps[j - 1] = v as u32;
        remaining -= v;
    }
    exps[0] = remaining as u32;
    Ok(MultiIndex::from_dense(&exps))
}

/// The degree-`n` monomials of length exactly `i`, for `i = 1..=k`, each list
/// square-ordered. These are the bases of the spaces `P_i(^nX)`.
pub fn strata_by_length(n: u32, k: usize) -> Vec<Vec<MultiIndex>> {
    let mut strata = vec![Vec::new(); k];
    for m in monomials(n, k) {
        if m.length() >= 1 {
            strata[m.length() - 1].push(m);
        }
    }
    strata
}

/// Builds the square-ordered basis of `P_k(^{n+1}X)` from the bases of
/// `P_i(^nX)`, `i = 1..=k`: concatenate them in order of `i` and multiply
/// every monomial by `z_k`.
pub fn recursive_extend(
    strata: &[Vec<MultiIndex>],
    k: usize,
) -> Result<Vec<MultiIndex>, MultiIndexError> {
    if k == 0 || strata.len() != k {
        return Err(MultiIndexError::Malformed(format!(
            "expected {k} length strata, got {}",
            strata.len()
        )));
    }
    let degree = strata[0].first().map(MultiIndex::degree);
    let mut out = Vec::with_capacity(strata.iter().map(Vec::len).sum());
    for (i, stratum) in strata.iter().enumerate() {
        if stratum.is_empty() {
            return Err(MultiIndexError::Malformed(format!(
                "stratum {} is empty",
                i + 1
            )));
        }
        for (j, m) in stratum.iter().enumerate() {
            if Some(m.degree()) != degree || m.degree() == 0 {
                return Err(MultiIndexError::Malformed(format!(
                    "{m} in stratum {} does not have the common positive degree",
                    i + 1
                )));
            }
            if m.length() != i + 1 {
                return Err(MultiIndexError::Malformed(format!(
                    "{m} does not have length {}",
                    i + 1
                )));
            }
            if j > 0 && square_cmp(&stratum[j - 1], m).is_ge() {
                return Err(MultiIndexError::Malformed(format!(
                    "stratum {} is not strictly increasing at {m}",
                    i + 1
                )));
            }
            out.push(m.times_coordinate(k));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mi(e: &[u32]) -> MultiIndex {
        MultiIndex::from_dense(e)
    }

    /// Every weak composition of `n` into `k` parts, in no particular order.
    fn compositions(n: u32, k: usize) -> Vec<MultiIndex> {
        fn go(n: u32, k: usize, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if prefix.len() + 1 == k {
                prefix.push(n);
                out.push(MultiIndex::from_dense(prefix));
                prefix.pop();
                return;
            }
            for e in (0..=n).rev() {
                prefix.push(e);
                go(n - e, k, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if k == 0 {
            if n == 0 {
                out.push(MultiIndex::empty());
            }
            return out;
        }
        go(n, k, &mut Vec::new(), &mut out);
        out
    }

    fn sorted_oracle(n: u32, k: usize) -> Vec<MultiIndex> {
        let mut all = compositions(n, k);
        all.sort_by(square_cmp);
        all
    }

    #[test]
    fn small_examples() {
        assert_eq!(
            enumerate_monomials(2, 2).into_vec(),
            vec![mi(&[2]), mi(&[1, 1]), mi(&[0, 2])]
        );
        let b = enumerate_monomials(2, 3);
        assert_eq!(b.len(), 6);
        assert_eq!(&b.as_slice()[4..], &[mi(&[0, 1, 1]), mi(&[0, 0, 2])]);
        assert_eq!(
            enumerate_monomials(0, 5).into_vec(),
            vec![MultiIndex::empty()]
        );
        let units: Vec<_> = (1..=4).map(MultiIndex::unit).collect();
        assert_eq!(enumerate_monomials(1, 4).into_vec(), units);
        assert!(enumerate_monomials(3, 0).is_empty());
        assert_eq!(
            serde_json::to_string(&enumerate_monomials(2, 2)).unwrap(),
            r#"[{"1":2},{"1":1,"2":1},{"2":2}]"#
        );
    }

    #[test]
    fn enumeration_matches_sorted_compositions() {
        for n in 0..=6 {
            for k in 0..=7 {
                let b = enumerate_monomials(n, k);
                assert_eq!(b.as_slice(), sorted_oracle(n, k).as_slice(), "n={n} k={k}");
                assert_eq!(b.len() as u128, basis_size(n, k));
                assert!(b
                    .as_slice()
                    .windows(2)
                    .all(|w| square_cmp(&w[0], &w[1]).is_lt()));
            }
        }
    }

    #[test]
    fn rank_and_unrank_examples() {
        assert_eq!(rank(&mi(&[2]), 2).unwrap(), 0);
        assert_eq!(unrank(2, 2, 2).unwrap(), mi(&[0, 2]));
        assert_eq!(
            unrank(2, 3, 2),
            Err(MultiIndexError::RankOutOfRange { rank: 3, size: 3 })
        );
        assert!(rank(&mi(&[0, 0, 1]), 2).is_err());
        assert_eq!(rank(&MultiIndex::empty(), 0).unwrap(), 0);
        assert_eq!(unrank(0, 0, 3).unwrap(), MultiIndex::empty());
    }

    #[test]
    fn rank_unrank_exhaustive() {
        for n in 0..=4 {
            for k in 1..=6 {
                for (pos, m) in enumerate_monomials(n, k).iter().enumerate() {
                    assert_eq!(rank(m, k).unwrap(), pos as u128);
                    assert_eq!(rank(m, k + 3).unwrap(), pos as u128);
                    assert_eq!(&unrank(n, pos as u128, k).unwrap(), m);
                }
            }
        }
    }

    #[test]
    fn recursive_extend_examples() {
        let strata = strata_by_length(1, 2);
        assert_eq!(
            recursive_extend(&strata, 2).unwrap(),
            vec![mi(&[1, 1]), mi(&[0, 2])]
        );
        for n in 1..=4 {
            assert_eq!(
                recursive_extend(&strata_by_length(n, 1), 1).unwrap(),
                vec![mi(&[n + 1])]
            );
        }
    }

    #[test]
    fn recursive_extend_reproduces_next_degree() {
        for n in 1..=4 {
            for k in 1..=6 {
                let built = recursive_extend(&strata_by_length(n, k), k).unwrap();
                let expected: Vec<_> = sorted_oracle(n + 1, k)
                    .into_iter()
                    .filter(|m| m.length() == k)
                    .collect();
                assert_eq!(built, expected, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn recursive_extend_rejects_malformed_input() {
        let mut strata = strata_by_length(2, 3);
        assert!(recursive_extend(&strata, 2).is_err());
        strata[2].reverse();
        assert!(matches!(
            recursive_extend(&strata, 3),
            Err(MultiIndexError::Malformed(_))
        ));
        let mut strata = strata_by_length(2, 3);
        strata[1].push(mi(&[3]));
        assert!(recursive_extend(&strata, 3).is_err());
        let strata = vec![vec![mi(&[1])], vec![mi(&[1, 1])]];
        assert!(recursive_extend(&strata, 2).is_err());
        assert!(recursive_extend(&[vec![mi(&[1])], vec![]], 2).is_err());
    }

    #[test]
    fn square_order_is_a_strict_total_order() {
        for n in 0..=3 {
            let all = compositions(n, 5);
            for a in &all {
                for b in &all {
                    assert_eq!(square_cmp(a, b), square_cmp(b, a).reverse());
                    assert_eq!(square_cmp(a, b).is_eq(), a == b);
                    for c in &all {
                        if square_cmp(a, b).is_lt() && square_cmp(b, c).is_lt() {
                            assert!(square_cmp(a, c).is_lt());
                        }
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn order_is_monotone_in_length(a in prop::collection::vec(0u32..4, 0..7), b in prop::collection::vec(0u32..4, 0..7)) {
            let (a, b) = (MultiIndex::from_dense(&a), MultiIndex::from_dense(&b));
            if square_cmp(&a, &b).is_lt() {
                prop_assert!(a.length() <= b.length());
            }
        }

        #[test]
        fn unrank_inverts_rank(exps in prop::collection::vec(0u32..6, 1..9), extra in 0usize..4) {
            let m = MultiIndex::from_dense(&exps);
            let k = m.length().max(1) + extra;
            let r = rank(&m, k).unwrap();
            prop_assert!(r < basis_size(m.degree(), k));
            prop_assert_eq!(unrank(m.degree(), r, k).unwrap(), m);
        }
    }
}
