use std::cmp::Ordering;
use std::fmt;

use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::MultiIndexError;

/// A finitely supported exponent sequence `m = (m_1, m_2, …)`.
///
/// Stored densely with trailing zeros trimmed, so the stored length is
/// `l(m)`. `Ord` is the square ordering ([`square_cmp`]).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex {
    exps: Vec<u32>,
}

impl MultiIndex {
    /// The zero multi-index (the constant monomial).
    pub fn empty() -> Self {
        Self::default()
    }

    /// `exps[j]` is the exponent of coordinate `j + 1`.
    pub fn from_dense(exps: &[u32]) -> Self {
        let len = exps.iter().rposition(|e| *e != 0).map_or(0, |j| j + 1);
        MultiIndex {
            exps: exps[..len].to_vec(),
        }
    }

    pub fn from_sparse<I>(entries: I) -> Result<Self, MultiIndexError>
    where
        I: IntoIterator<Item = (usize, u32)>,
    {
        let mut exps = Vec::new();
        for (k, e) in entries {
            if k == 0 {
                return Err(MultiIndexError::InvalidIndex(0));
            }
            if exps.len() < k {
                exps.resize(k, 0);
            }
            exps[k - 1] += e;
        }
        Ok(MultiIndex::from_dense(&exps))
    }

    /// `e_k`, i.e. the monomial `z_k`.
    pub fn unit(k: usize) -> Self {
        assert!(k >= 1, "coordinates are 1-based");
        let mut exps = vec![0; k];
        exps[k - 1] = 1;
        MultiIndex { exps }
    }

    /// `|m| = Σ m_k`.
    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    /// `l(m)`, the largest `k` with `m_k ≠ 0`; 0 for the empty index.
    pub fn length(&self) -> usize {
        self.exps.len()
    }

    /// `m_k`, 1-based.
    pub fn exponent(&self, k: usize) -> u32 {
        self.exps.get(k.wrapping_sub(1)).copied().unwrap_or(0)
    }

    /// Dense exponents of coordinates `1..=l(m)`.
    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    /// `(k, m_k)` for every `m_k ≠ 0`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, e)| **e != 0)
            .map(|(j, e)| (j + 1, *e))
    }

    /// `m + e_k`, i.e. the monomial `z^m · z_k`.
    pub fn times_coordinate(&self, k: usize) -> Self {
        assert!(k >= 1, "coordinates are 1-based");
        let mut exps = self.exps.clone();
        if exps.len() < k {
            exps.resize(k, 0);
        }
        exps[k - 1] += 1;
        MultiIndex { exps }
    }
}

/// `(|m|, l(m))`.
pub fn degree_and_length(m: &MultiIndex) -> (u32, usize) {
    (m.degree(), m.length())
}

/// The square ordering: `m < m̄` iff `l(m) < l(m̄)`, or the lengths agree and
/// at the highest coordinate `i` where the exponents differ, `m_i < m̄_i`.
pub fn square_cmp(m: &MultiIndex, other: &MultiIndex) -> Ordering {
    m.length().cmp(&other.length()).then_with(|| {
        m.exps
            .iter()
            .rev()
            .zip(other.exps.iter().rev())
            .map(|(a, b)| a.cmp(b))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    })
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        square_cmp(self, other)
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (j, e) in self.exps.iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

// Sparse JSON: {"k": exponent, ...}
impl Serialize for MultiIndex {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let nz: Vec<_> = self.iter().collect();
        let mut map = serializer.serialize_map(Some(nz.len()))?;
        for (k, e) in nz {
            map.serialize_entry(&k.to_string(), &e)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for MultiIndex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct MultiIndexVisitor;

        impl<'de> Visitor<'de> for MultiIndexVisitor {
            type Value = MultiIndex;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str(r#"a sparse map {"k": exponent} with 1-based k"#)
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<MultiIndex, A::Error> {
                let mut entries = Vec::new();
                while let Some((key, e)) = access.next_entry::<String, u32>()? {
                    let k: usize = key
                        .trim()
                        .parse()
                        .map_err(|_| de::Error::custom(format!("bad coordinate index {key:?}")))?;
                    entries.push((k, e));
                }
                MultiIndex::from_sparse(entries).map_err(de::Error::custom)
            }
        }

        deserializer.deserialize_map(MultiIndexVisitor)
    }
}
