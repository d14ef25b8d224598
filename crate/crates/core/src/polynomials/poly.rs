use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::PolyError;
use crate::multiindex::MultiIndex;
use crate::sequence_spaces::Point;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// An `n`-homogeneous polynomial `Σ c_m z^m`, `|m| = n`, stored with its
/// terms in square order.
///
/// Evaluation adds the terms one at a time in that order. A term whose
/// monomial touches a zero coordinate contributes an exact zero, so the value
/// at a truncated point does not depend on terms that use coordinates past
/// the cut.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneousPolynomial {
    degree: u32,
    terms: BTreeMap<MultiIndex, Complex64>,
}

impl HomogeneousPolynomial {
    pub fn zero(degree: u32) -> Self {
        HomogeneousPolynomial {
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Sums repeated monomials and drops zero coefficients.
    pub fn from_terms<I>(degree: u32, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (MultiIndex, Complex64)>,
    {
        let mut p = Self::zero(degree);
        for (m, c) in terms {
            p.add_term(m, c)?;
        }
        Ok(p)
    }

    /// `z^m`.
    pub fn monomial(m: MultiIndex) -> Self {
        let degree = m.degree();
        let mut terms = BTreeMap::new();
        terms.insert(m, ONE);
        HomogeneousPolynomial { degree, terms }
    }

    pub fn add_term(&mut self, m: MultiIndex, c: Complex64) -> Result<(), PolyError> {
        if m.degree() != self.degree {
            return Err(PolyError::DegreeMismatch {
                index: m.to_string(),
                expected: self.degree,
                found: m.degree(),
            });
        }
        if !c.re.is_finite() || !c.im.is_finite() {
            return Err(PolyError::NonFinite(m.to_string()));
        }
        let entry = self.terms.entry(m.clone()).or_insert(ZERO);
        *entry += c;
        if *entry == ZERO {
            self.terms.remove(&m);
        }
        Ok(())
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, Complex64> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &MultiIndex) -> Complex64 {
        self.terms.get(m).copied().unwrap_or(ZERO)
    }

    /// Largest `l(m)` over the terms; 0 for constants and the zero polynomial.
    pub fn max_length(&self) -> usize {
        self.terms.keys().map(MultiIndex::length).max().unwrap_or(0)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self::zero(self.degree);
        for (m, v) in &self.terms {
            let w = v * c;
            if w != ZERO {
                out.terms.insert(m.clone(), w);
            }
        }
        out
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self, PolyError> {
        let mut out = self.scale(a);
        for (m, v) in &other.terms {
            out.add_term(m.clone(), v * b)?;
        }
        Ok(out)
    }

    /// `z_k · P`, of degree `n + 1`.
    pub fn times_coordinate(&self, k: usize) -> Self {
        HomogeneousPolynomial {
            degree: self.degree + 1,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.times_coordinate(k), *c))
                .collect(),
        }
    }

    pub fn eval(&self, z: &Point) -> Complex64 {
        let table = TermTable::new(self);
        table.eval_dense(&z.to_dense(table.dim))
    }
}

impl fmt::Display for HomogeneousPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (j, (m, c)) in self.terms.iter().enumerate() {
            if j > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})·z^{m}")?;
        }
        Ok(())
    }
}

/// The monomials of a polynomial flattened for repeated evaluation on dense
/// points: 0-based coordinates and exponents, plus coefficients.
#[derive(Clone, Debug)]
pub(crate) struct TermTable {
    pub(crate) dim: usize,
    max_exp: Vec<u32>,
    coeffs: Vec<Complex64>,
    factors: Vec<Vec<(usize, u32)>>,
}

impl TermTable {
    pub(crate) fn new(p: &HomogeneousPolynomial) -> Self {
        Self::from_terms(p.iter().map(|(m, c)| (m, *c)))
    }

    pub(crate) fn from_terms<'a>(
        terms: impl IntoIterator<Item = (&'a MultiIndex, Complex64)>,
    ) -> Self {
        let mut table = TermTable {
            dim: 0,
            max_exp: Vec::new(),
            coeffs: Vec::new(),
            factors: Vec::new(),
        };
        for (m, c) in terms {
            let f: Vec<(usize, u32)> = m.iter().map(|(k, e)| (k - 1, e)).collect();
            table.dim = table.dim.max(m.length());
            if table.max_exp.len() < table.dim {
                table.max_exp.resize(table.dim, 0);
            }
            for &(i, e) in &f {
                table.max_exp[i] = table.max_exp[i].max(e);
            }
            table.coeffs.push(c);
            table.factors.push(f);
        }
        table
    }

    pub(crate) fn len(&self) -> usize {
        self.coeffs.len()
    }

    /// `powers[i][e] = z_{i+1}^e`, with coordinates past `z.len()` read as 0.
    pub(crate) fn powers(&self, z: &[Complex64]) -> Vec<Vec<Complex64>> {
        self.max_exp
            .iter()
            .enumerate()
            .map(|(i, &top)| {
                let x = z.get(i).copied().unwrap_or(ZERO);
                let mut row = Vec::with_capacity(top as usize + 1);
                let mut acc = ONE;
                row.push(acc);
                for _ in 0..top {
                    acc *= x;
                    row.push(acc);
                }
                row
            })
            .collect()
    }

    /// `c_m z^m` for every term, in table order.
    pub(crate) fn term_values<'a>(
        &'a self,
        powers: &'a [Vec<Complex64>],
    ) -> impl Iterator<Item = Complex64> + 'a {
        self.coeffs.iter().zip(&self.factors).map(move |(c, f)| {
            let mono = f
                .iter()
                .fold(ONE, |acc, &(i, e)| acc * powers[i][e as usize]);
            c * mono
        })
    }

    pub(crate) fn eval_dense(&self, z: &[Complex64]) -> Complex64 {
        let powers = self.powers(z);
        self.term_values(&powers).fold(ZERO, |acc, t| acc + t)
    }
}

// JSON: [{"m": {"k": e, ...}, "c": [re, im]}, ...] in square order.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermRecord {
    m: MultiIndex,
    c: [f64; 2],
}

impl Serialize for HomogeneousPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (m, c) in &self.terms {
            seq.serialize_element(&TermRecord {
                m: m.clone(),
                c: [c.re, c.im],
            })?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for HomogeneousPolynomial {
    /// The degree is read off the first term; an empty array is the zero
    /// polynomial of degree 0.
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct PolyVisitor;

        impl<'de> Visitor<'de> for PolyVisitor {
            type Value = HomogeneousPolynomial;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str(r#"an array of {"m": {..}, "c": [re, im]} terms"#)
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
                let mut terms = Vec::new();
                while let Some(t) = seq.next_element::<TermRecord>()? {
                    terms.push((t.m, Complex64::new(t.c[0], t.c[1])));
                }
                let degree = terms.first().map_or(0, |(m, _)| m.degree());
                HomogeneousPolynomial::from_terms(degree, terms).map_err(de::Error::custom)
            }
        }

        deserializer.deserialize_seq(PolyVisitor)
    }
}

/// A Taylor polynomial `P_0 + P_1 + … + P_N` with `P_d` in slot `d`.
#[derive(Clone, Debug, PartialEq)]
pub struct TaylorTruncation {
    parts: Vec<HomogeneousPolynomial>,
}

impl TaylorTruncation {
    pub fn new(parts: Vec<HomogeneousPolynomial>) -> Result<Self, PolyError> {
        if let Some((d, p)) = parts
            .iter()
            .enumerate()
            .find(|(d, p)| p.degree() as usize != *d)
        {
            return Err(PolyError::InvalidArgument(format!(
                "slot {d} holds a polynomial of degree {}",
                p.degree()
            )));
        }
        Ok(TaylorTruncation { parts })
    }

    /// Zero parts in every slot `0..=max_degree`.
    pub fn zero(max_degree: u32) -> Self {
        TaylorTruncation {
            parts: (0..=max_degree).map(HomogeneousPolynomial::zero).collect(),
        }
    }

    pub fn parts(&self) -> &[HomogeneousPolynomial] {
        &self.parts
    }

    pub fn part(&self, d: usize) -> Option<&HomogeneousPolynomial> {
        self.parts.get(d)
    }

    pub(crate) fn parts_mut(&mut self) -> &mut [HomogeneousPolynomial] {
        &mut self.parts
    }

    /// `N`, or `None` when there are no slots.
    pub fn max_degree(&self) -> Option<u32> {
        self.parts.len().checked_sub(1).map(|n| n as u32)
    }

    pub fn term_count(&self) -> usize {
        self.parts.iter().map(HomogeneousPolynomial::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(HomogeneousPolynomial::is_empty)
    }

    /// `Σ_d P_d(z)`, added in degree order.
    pub fn eval(&self, z: &Point) -> Complex64 {
        self.parts.iter().fold(ZERO, |acc, p| acc + p.eval(z))
    }
}

impl Serialize for TaylorTruncation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.parts.serialize(serializer)
    }
}

/// Sum of the polynomial's terms at `z` (any homogeneous part or a full
/// truncation).
pub fn eval<P: Evaluate + ?Sized>(p: &P, z: &Point) -> Complex64 {
    p.evaluate(z)
}

pub trait Evaluate {
    fn evaluate(&self, z: &Point) -> Complex64;
}

impl Evaluate for HomogeneousPolynomial {
    fn evaluate(&self, z: &Point) -> Complex64 {
        self.eval(z)
    }
}

impl Evaluate for TaylorTruncation {
    fn evaluate(&self, z: &Point) -> Complex64 {
        self.eval(z)
    }
}
