//! Sparse multivariate power series over exact rationals, truncated by a
//! per-variable exponent cap, and the weight-lattice group algebra used in
//! place of the x-variables (whose inverse change of variable would need
//! fractional powers for some algebras).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::{Serialize, SerializeMap, SerializeSeq, Serializer};

use crate::cartan::{CartanData, WeightVector};
use crate::error::{Error, Result};

/// Per-variable maximum exponents.  The truncation ideal generated by
/// `y_a^(t_a l + 1)` corresponds to degrees `d_a = t_a l`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncationSpec {
    degrees: Vec<u32>,
}

impl TruncationSpec {
    pub fn new(degrees: Vec<u32>) -> Self {
        TruncationSpec { degrees }
    }

    /// Degrees `d_a = t_a * level` of the level-`l` truncation ideal.
    pub fn for_level(c: &CartanData, level: u32) -> Self {
        TruncationSpec {
            degrees: c.t.iter().map(|&t| t as u32 * level).collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree(&self, a: usize) -> u32 {
        self.degrees[a]
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn admits(&self, exps: &[u32]) -> bool {
        exps.iter().zip(&self.degrees).all(|(e, d)| e <= d)
    }
}

/// Sparse truncated power series with exact rational coefficients.
///
/// Stored terms always lie within the truncation spec and never carry a zero
/// coefficient, so equality is structural.  Binary arithmetic panics when the
/// two operands carry different truncation specs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedSeries {
    trunc: TruncationSpec,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl TruncatedSeries {
    pub fn zero(trunc: TruncationSpec) -> Self {
        TruncatedSeries {
            trunc,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(trunc: TruncationSpec) -> Self {
        Self::constant(trunc, BigRational::one())
    }

    pub fn constant(trunc: TruncationSpec, value: BigRational) -> Self {
        let mut s = Self::zero(trunc);
        if !value.is_zero() {
            s.terms.insert(vec![0; s.trunc.nvars()], value);
        }
        s
    }

    /// The variable `y_a` (zero if already truncated away).
    pub fn var(trunc: TruncationSpec, a: usize) -> Self {
        let mut exps = vec![0; trunc.nvars()];
        exps[a] = 1;
        Self::monomial(trunc, exps, BigRational::one())
    }

    pub fn monomial(trunc: TruncationSpec, exps: Vec<u32>, coeff: BigRational) -> Self {
        let mut s = Self::zero(trunc);
        s.add_term(&exps, coeff);
        s
    }

    pub fn trunc(&self) -> &TruncationSpec {
        &self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(e, c)| e.iter().all(|&x| x == 0) && c.is_one())
    }

    pub fn coeff(&self, exps: &[u32]) -> BigRational {
        self.terms
            .get(exps)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(&vec![0; self.trunc.nvars()])
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Adds `coeff * y^exps`, dropping the term if outside the truncation.
    pub fn add_term(&mut self, exps: &[u32], coeff: BigRational) {
        if coeff.is_zero() || !self.trunc.admits(exps) {
            return;
        }
        let entry = self
            .terms
            .entry(exps.to_vec())
            .or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(exps);
        }
    }

    pub fn scaled(&self, k: &BigRational) -> Self {
        if k.is_zero() {
            return Self::zero(self.trunc.clone());
        }
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect();
        TruncatedSeries {
            trunc: self.trunc.clone(),
            terms,
        }
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    ///
    /// With `u = 1 - f/c0`, the inverse is `(1/c0) sum_k u^k`; the sum is
    /// finite because `u` has no constant term and every variable is capped.
    pub fn invert_unit(&self) -> Result<Self> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::NonUnit);
        }
        let inv_c0 = BigRational::one() / &c0;
        let u = &Self::one(self.trunc.clone()) - &self.scaled(&inv_c0);
        let nilpotency: u32 = self.trunc.degrees().iter().sum();
        let mut acc = Self::one(self.trunc.clone());
        let mut upow = Self::one(self.trunc.clone());
        for _ in 0..nilpotency {
            upow = &upow * &u;
            if upow.is_zero() {
                break;
            }
            acc = &acc + &upow;
        }
        Ok(acc.scaled(&inv_c0))
    }

    /// Integer power by repeated squaring; negative exponents invert first.
    pub fn pow_int(&self, e: i64) -> Result<Self> {
        if e < 0 {
            if self.constant_term().is_zero() {
                return Err(Error::NegativePowerOfNonUnit);
            }
            return self.invert_unit()?.pow_int(-e);
        }
        let mut result = Self::one(self.trunc.clone());
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(result)
    }

    /// Termwise partial derivative in variable `a`.
    pub fn partial_derivative(&self, a: usize) -> Self {
        let mut out = Self::zero(self.trunc.clone());
        for (exps, coeff) in &self.terms {
            if exps[a] == 0 {
                continue;
            }
            let mut e = exps.clone();
            e[a] -= 1;
            out.add_term(&e, coeff * BigRational::from_integer(BigInt::from(exps[a])));
        }
        out
    }

    /// `y_a * d/dy_a`, which keeps exponents in place and loses no precision.
    pub fn log_derivative(&self, a: usize) -> Self {
        let mut out = Self::zero(self.trunc.clone());
        for (exps, coeff) in &self.terms {
            if exps[a] == 0 {
                continue;
            }
            out.add_term(
                exps,
                coeff * BigRational::from_integer(BigInt::from(exps[a])),
            );
        }
        out
    }

    /// Asserts every coefficient is an integer and returns them.
    pub fn integer_coefficients(&self) -> Result<BTreeMap<Vec<u32>, BigInt>> {
        let mut out = BTreeMap::new();
        for (e, c) in &self.terms {
            if !c.is_integer() {
                return Err(Error::NonIntegerVacancy);
            }
            out.insert(e.clone(), c.to_integer());
        }
        Ok(out)
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, other: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!(self.trunc, other.trunc, "series truncation specs differ");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, other: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!(self.trunc, other.trunc, "series truncation specs differ");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e, -c.clone());
        }
        out
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        self.scaled(&-BigRational::one())
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, other: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!(self.trunc, other.trunc, "series truncation specs differ");
        let n = self.trunc.nvars();
        let degrees = self.trunc.degrees();
        let mut acc: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            'inner: for (eb, cb) in &other.terms {
                let mut sum = vec![0u32; n];
                for i in 0..n {
                    let s = ea[i] + eb[i];
                    if s > degrees[i] {
                        continue 'inner;
                    }
                    sum[i] = s;
                }
                let entry = acc.entry(sum).or_insert_with(BigRational::zero);
                *entry += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        TruncatedSeries {
            trunc: self.trunc.clone(),
            terms: acc,
        }
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exps, coeff) in &self.terms {
            let neg = coeff.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = coeff.abs();
            let monomial: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        format!("y{}", i + 1)
                    } else {
                        format!("y{}^{}", i + 1, e)
                    }
                })
                .collect();
            if monomial.is_empty() {
                write!(f, "{}", format_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", monomial.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&mag), monomial.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Serialized as `{"trunc": [...], "terms": [{"exponents": [...], "coeff": "n" or "n/d"}]}`
/// with terms sorted lexicographically by exponent vector.
impl Serialize for TruncatedSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Term<'a>(&'a [u32], &'a BigRational);
        impl Serialize for Term<'_> {
            fn serialize<S: Serializer>(
                &self,
                serializer: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                let mut m = serializer.serialize_map(Some(2))?;
                m.serialize_entry("exponents", self.0)?;
                m.serialize_entry("coeff", &format_rational(self.1))?;
                m.end()
            }
        }
        struct Terms<'a>(&'a TruncatedSeries);
        impl Serialize for Terms<'_> {
            fn serialize<S: Serializer>(
                &self,
                serializer: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                let mut seq = serializer.serialize_seq(Some(self.0.terms.len()))?;
                for (e, c) in &self.0.terms {
                    seq.serialize_element(&Term(e, c))?;
                }
                seq.end()
            }
        }
        let mut m = serializer.serialize_map(Some(2))?;
        m.serialize_entry("trunc", self.trunc.degrees())?;
        m.serialize_entry("terms", &Terms(self))?;
        m.end()
    }
}

/// Canonical text form of an exact rational: `n` when integral, else `n/d`.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Finitely supported map weight -> integer, i.e. an element of the group
/// algebra of the weight lattice.  Characters and x-space objects live here.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GroupAlgebraElement {
    terms: BTreeMap<WeightVector, BigInt>,
}

impl GroupAlgebraElement {
    pub fn zero() -> Self {
        GroupAlgebraElement {
            terms: BTreeMap::new(),
        }
    }

    /// The identity e^0.
    pub fn one(n: usize) -> Self {
        Self::from_weight(WeightVector::zero(n))
    }

    pub fn from_weight(w: WeightVector) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(w, BigInt::one());
        GroupAlgebraElement { terms }
    }

    pub fn add_term(&mut self, w: WeightVector, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
        }
    }

    pub fn coeff(&self, w: &WeightVector) -> BigInt {
        self.terms.get(w).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = (&WeightVector, &BigInt)> {
        self.terms.iter()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    /// Sum of all coefficients; the dimension when `self` is a character.
    pub fn dimension(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn scaled(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        GroupAlgebraElement {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c * k)).collect(),
        }
    }
}

impl Add for &GroupAlgebraElement {
    type Output = GroupAlgebraElement;
    fn add(self, other: &GroupAlgebraElement) -> GroupAlgebraElement {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl Sub for &GroupAlgebraElement {
    type Output = GroupAlgebraElement;
    fn sub(self, other: &GroupAlgebraElement) -> GroupAlgebraElement {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &GroupAlgebraElement {
    type Output = GroupAlgebraElement;
    fn mul(self, other: &GroupAlgebraElement) -> GroupAlgebraElement {
        let mut out = GroupAlgebraElement::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                out.add_term(wa.add(wb), ca * cb);
            }
        }
        out
    }
}

/// Realizes `e^{-highest} * g` as a series in `y_a = e^{-alpha_a}`.
///
/// Every support weight must equal `highest - sum d_a alpha_a` with integral
/// `d_a >= 0`; terms beyond the truncation are dropped.
pub fn embed_weight(
    c: &CartanData,
    g: &GroupAlgebraElement,
    highest: &WeightVector,
    trunc: &TruncationSpec,
) -> Result<TruncatedSeries> {
    let mut out = TruncatedSeries::zero(trunc.clone());
    for (w, coeff) in g.support() {
        let delta = highest.sub(w);
        let d = c
            .root_coords_integer(&delta)
            .filter(|d| d.iter().all(|&x| x >= 0))
            .ok_or_else(|| Error::WeightNotBelowHighest(w.0.clone()))?;
        let exps: Vec<u32> = d.iter().map(|&x| x as u32).collect();
        out.add_term(&exps, BigRational::from_integer(coeff.clone()));
    }
    Ok(out)
}
