//! Sparse multivariate polynomials over the rationals.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rational;
use crate::error::{CoreError, Result};

/// Exponent vector ordered graded-lexicographically.
///
/// The total degree is stored first so the derived ordering is grlex.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial {
    deg: u32,
    exps: Vec<u32>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial { deg: 0, exps: vec![0; nvars] }
    }

    pub fn new(exps: Vec<u32>) -> Self {
        let deg = exps.iter().sum();
        Monomial { deg, exps }
    }

    pub fn var(nvars: usize, v: usize, e: u32) -> Self {
        let mut exps = vec![0; nvars];
        exps[v] = e;
        Monomial { deg: e, exps }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn exp(&self, v: usize) -> u32 {
        self.exps[v]
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let exps: Vec<u32> = self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect();
        Monomial { deg: self.deg + other.deg, exps }
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = Vec::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(&other.exps) {
            if a < b {
                return None;
            }
            exps.push(a - b);
        }
        Some(Monomial { deg: self.deg - other.deg, exps })
    }

    fn with_exp(&self, v: usize, e: u32) -> Monomial {
        let mut exps = self.exps.clone();
        let old = exps[v];
        exps[v] = e;
        Monomial { deg: self.deg - old + e, exps }
    }

    fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.exps.iter().zip(&other.exps).map(|(a, b)| *a.min(b)).collect())
    }
}

/// A polynomial in `nvars` variables with exact rational coefficients.
///
/// Zero coefficients are never stored. Terms are kept in a `BTreeMap`
/// keyed by grlex monomials, so the leading term is the last entry.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SparsePoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, Rational::from_integer(BigInt::from(c)))
    }

    /// The variable `x_v` (0-based).
    pub fn var(nvars: usize, v: usize) -> Self {
        Self::monomial(Monomial::var(nvars, v, 1), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let nvars = m.exps.len();
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(nvars: usize, terms: I) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            debug_assert_eq!(m.exps.len(), nvars);
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().is_some_and(|m| m.deg == 0))
    }

    /// The value of a constant polynomial.
    pub fn constant_value(&self) -> Option<Rational> {
        if self.terms.is_empty() {
            return Some(Rational::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.leading_term().map(|(m, _)| m.deg)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.exps[v]).max().unwrap_or(0)
    }

    pub fn uses_var(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m.exps[v] > 0)
    }

    pub(crate) fn check_ctx(&self, other: &SparsePoly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(CoreError::Context { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> SparsePoly {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        SparsePoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> SparsePoly {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        SparsePoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    pub fn try_add(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_ctx(other)?;
        Ok(self + other)
    }

    pub fn try_mul(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_ctx(other)?;
        Ok(self * other)
    }

    pub fn pow(&self, e: u32) -> SparsePoly {
        let mut result = Self::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Formal partial derivative in `x_v`.
    pub fn derivative(&self, v: usize) -> SparsePoly {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exps[v];
            if e > 0 {
                out.add_term(m.with_exp(v, e - 1), c * Rational::from_integer(BigInt::from(e)));
            }
        }
        out
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &SparsePoly) -> Option<SparsePoly> {
        if divisor.is_zero() {
            return None;
        }
        if let Some(c) = divisor.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let (lm, lc) = divisor.leading_term()?;
        let lc_inv = lc.recip();
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((rm, rc)) = rem.leading_term() {
            let qm = rm.div(lm)?;
            let qc = rc * &lc_inv;
            rem = &rem - &divisor.mul_monomial(&qm, &qc);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Coefficients of `self` viewed as a univariate polynomial in `x_v`,
    /// indexed by the power of `x_v`.
    pub fn coeffs_in(&self, v: usize) -> Vec<SparsePoly> {
        let d = self.degree_in(v) as usize;
        let mut out = vec![Self::zero(self.nvars); d + 1];
        for (m, c) in &self.terms {
            let e = m.exps[v] as usize;
            out[e].add_term(m.with_exp(v, 0), c.clone());
        }
        out
    }

    /// Coefficient of `x_v^e`, as a polynomial free of `x_v`.
    pub fn coeff_of(&self, v: usize, e: u32) -> SparsePoly {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            if m.exps[v] == e {
                out.add_term(m.with_exp(v, 0), c.clone());
            }
        }
        out
    }

    /// Greatest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let first = match it.next() {
            Some(m) => m.clone(),
            None => return Monomial::one(self.nvars),
        };
        it.fold(first, |acc, m| acc.gcd(m))
    }

    /// Rational `c` such that `self / c` has coprime integer coefficients
    /// and a positive leading coefficient.
    pub fn rational_content(&self) -> Rational {
        if self.is_zero() {
            return Rational::one();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let content = Rational::new(num_gcd, den_lcm);
        if self.leading_coeff().is_negative() {
            -content
        } else {
            content
        }
    }

    /// `self` scaled to coprime integer coefficients with positive leading coefficient.
    pub fn primitive_integer(&self) -> SparsePoly {
        let c = self.rational_content();
        if c.is_one() {
            return self.clone();
        }
        self.scale(&c.recip())
    }

    /// `self` scaled so its leading coefficient is one.
    pub fn monic(&self) -> SparsePoly {
        let lc = self.leading_coeff();
        if lc.is_zero() || lc.is_one() {
            return self.clone();
        }
        self.scale(&lc.recip())
    }

    /// Substitute `x_v := value` for a rational value.
    pub fn substitute(&self, v: usize, value: &Rational) -> SparsePoly {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exps[v];
            let factor = num_traits::pow::pow(value.clone(), e as usize);
            out.add_term(m.with_exp(v, 0), c * factor);
        }
        out
    }

    /// Formats with the given variable names.
    pub fn display_with<'a, S: AsRef<str>>(&'a self, names: &'a [S]) -> PolyDisplay<'a, S> {
        PolyDisplay { poly: self, names }
    }
}

impl<'a> Add for &'a SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &'a SparsePoly) -> SparsePoly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let (mut big, small) = if self.terms.len() >= rhs.terms.len() { (self.clone(), rhs) } else { (rhs.clone(), self) };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }
}

impl<'a> Sub for &'a SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &'a SparsePoly) -> SparsePoly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl<'a> Mul for &'a SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &'a SparsePoly) -> SparsePoly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = SparsePoly::zero(self.nvars);
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        SparsePoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for SparsePoly {
    type Output = SparsePoly;
    fn neg(mut self) -> SparsePoly {
        for c in self.terms.values_mut() {
            *c = -core::mem::take(c);
        }
        self
    }
}

/// Writes a rational coefficient times a monomial body in the expression grammar.
pub(crate) fn write_term(f: &mut fmt::Formatter<'_>, first: bool, c: &Rational, body: &str) -> fmt::Result {
    let neg = c.is_negative();
    let abs = c.abs();
    if first {
        if neg {
            f.write_str("-")?;
        }
    } else if neg {
        f.write_str(" - ")?;
    } else {
        f.write_str(" + ")?;
    }
    if body.is_empty() {
        write!(f, "{}", abs)
    } else if abs.is_one() {
        f.write_str(body)
    } else {
        write!(f, "{}*{}", abs, body)
    }
}

pub struct PolyDisplay<'a, S> {
    poly: &'a SparsePoly,
    names: &'a [S],
}

impl<S: AsRef<str>> PolyDisplay<'_, S> {
    pub(crate) fn monomial_body(names: &[S], m: &Monomial) -> alloc::string::String {
        use core::fmt::Write;
        let mut s = alloc::string::String::new();
        for (v, &e) in m.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !s.is_empty() {
                s.push('*');
            }
            s.push_str(names[v].as_ref());
            if e > 1 {
                let _ = write!(s, "^{}", e);
            }
        }
        s
    }
}

impl<S: AsRef<str>> fmt::Display for PolyDisplay<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.poly.terms.iter().rev().enumerate() {
            let body = Self::monomial_body(self.names, m);
            write_term(f, i == 0, c, &body)?;
        }
        Ok(())
    }
}
