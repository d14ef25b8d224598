use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::SpaceError;

/// A finitely supported complex sequence `z = Σ z_k e_k`, indexed from 1.
///
/// Absent coordinates are zero. Explicit zeros may be stored (e.g. by
/// [`Point::set`]); equality and [`Point::support`] ignore them.
#[derive(Clone, Debug, Default)]
pub struct Point {
    entries: BTreeMap<usize, Complex64>,
}

impl Point {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_entries<I>(entries: I) -> Result<Self, SpaceError>
    where
        I: IntoIterator<Item = (usize, Complex64)>,
    {
        let mut p = Point::zero();
        for (i, v) in entries {
            if i == 0 {
                return Err(SpaceError::InvalidIndex(0));
            }
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(SpaceError::NonFinite(i));
            }
            p.entries.insert(i, v);
        }
        Ok(p)
    }

    /// `values[j]` becomes coordinate `j + 1`; zeros are dropped.
    pub fn from_dense(values: &[Complex64]) -> Self {
        let entries = values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != Complex64::new(0.0, 0.0))
            .map(|(j, v)| (j + 1, *v))
            .collect();
        Point { entries }
    }

    pub fn from_real(values: &[f64]) -> Self {
        let dense: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_dense(&dense)
    }

    pub fn unit(i: usize) -> Self {
        assert!(i >= 1, "coordinates are 1-based");
        let mut p = Point::zero();
        p.entries.insert(i, Complex64::new(1.0, 0.0));
        p
    }

    pub fn get(&self, i: usize) -> Complex64 {
        self.entries.get(&i).copied().unwrap_or_default()
    }

    /// Stores `v` at coordinate `i` (panics on index 0 or non-finite values).
    pub fn set(&mut self, i: usize, v: Complex64) {
        assert!(i >= 1, "coordinates are 1-based");
        assert!(
            v.re.is_finite() && v.im.is_finite(),
            "non-finite coordinate"
        );
        self.entries.insert(i, v);
    }

    /// Nonzero coordinates in increasing index order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        self.entries
            .iter()
            .filter(|(_, v)| **v != Complex64::new(0.0, 0.0))
            .map(|(i, v)| (*i, *v))
    }

    pub fn support(&self) -> Vec<usize> {
        self.iter().map(|(i, _)| i).collect()
    }

    pub fn nnz(&self) -> usize {
        self.iter().count()
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    /// Largest index with a nonzero value, 0 for the zero vector.
    pub fn max_index(&self) -> usize {
        self.iter().map(|(i, _)| i).last().unwrap_or(0)
    }

    pub fn normalized(mut self) -> Self {
        self.entries.retain(|_, v| *v != Complex64::new(0.0, 0.0));
        self
    }

    /// Zeroes every coordinate above `cut`.
    pub fn truncated(&self, cut: usize) -> Self {
        Point {
            entries: self.iter().filter(|(i, _)| *i <= cut).collect(),
        }
    }

    /// `(|z_1|, |z_2|, …)` as a point.
    pub fn moduli(&self) -> Self {
        Point {
            entries: self
                .iter()
                .map(|(i, v)| (i, Complex64::new(v.norm(), 0.0)))
                .collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Point {
            entries: self.iter().map(|(i, v)| (i, v * c)).collect(),
        }
        .normalized()
    }

    /// Coordinates `1..=dim` as a dense vector.
    pub fn to_dense(&self, dim: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for (i, v) in self.iter() {
            if i <= dim {
                out[i - 1] = v;
            }
        }
        out
    }
}

impl PartialEq for Point {
    fn eq(&self, other: &Self) -> bool {
        self.iter().eq(other.iter())
    }
}

impl Add for &Point {
    type Output = Point;

    fn add(self, rhs: &Point) -> Point {
        let mut entries = self.entries.clone();
        for (i, v) in rhs.iter() {
            *entries.entry(i).or_default() += v;
        }
        Point { entries }.normalized()
    }
}

impl Sub for &Point {
    type Output = Point;

    fn sub(self, rhs: &Point) -> Point {
        let mut entries = self.entries.clone();
        for (i, v) in rhs.iter() {
            *entries.entry(i).or_default() -= v;
        }
        Point { entries }.normalized()
    }
}

impl Mul<Complex64> for &Point {
    type Output = Point;

    fn mul(self, rhs: Complex64) -> Point {
        self.scale(rhs)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}",
            serde_json::to_string(self).map_err(|_| fmt::Error)?
        )
    }
}

// Sparse JSON: {"3": [re, im], ...}, keys in increasing numeric order.
impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let nz: Vec<_> = self.iter().collect();
        let mut map = serializer.serialize_map(Some(nz.len()))?;
        for (i, v) in nz {
            map.serialize_entry(&i.to_string(), &[v.re, v.im])?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct PointVisitor;

        impl<'de> Visitor<'de> for PointVisitor {
            type Value = Point;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str(r#"a sparse map {"index": [re, im]} with 1-based indices"#)
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Point, A::Error> {
                let mut entries = Vec::new();
                while let Some((key, [re, im])) = access.next_entry::<String, [f64; 2]>()? {
                    let i: usize = key
                        .trim()
                        .parse()
                        .map_err(|_| de::Error::custom(format!("bad coordinate index {key:?}")))?;
                    entries.push((i, Complex64::new(re, im)));
                }
                Point::from_entries(entries).map_err(de::Error::custom)
            }
        }

        deserializer.deserialize_map(PointVisitor)
    }
}
