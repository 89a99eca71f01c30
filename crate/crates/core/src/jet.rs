//! Differential polynomials: the ring of polynomials in jet variables
//! `u^i_(s)`, `s >= 1`, with rational-function coefficients in `u^1..u^n`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::algebra::{write_term, RatFun, Rational, SparsePoly};
use crate::error::{CoreError, Result};

/// The jet coordinate `u^coord_(order)`; coordinates are 0-based.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct JetVar {
    pub coord: usize,
    pub order: u32,
}

impl JetVar {
    pub fn new(coord: usize, order: u32) -> Self {
        JetVar { coord, order }
    }
}

/// Product of jet variables of order at least one, sorted, with positive exponents.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct JetMonomial(Vec<(JetVar, u32)>);

impl JetMonomial {
    pub fn one() -> Self {
        JetMonomial(Vec::new())
    }

    pub fn var(v: JetVar) -> Self {
        debug_assert!(v.order >= 1);
        JetMonomial(vec![(v, 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(JetVar, u32)] {
        &self.0
    }

    pub fn exponent(&self, v: JetVar) -> u32 {
        self.0.iter().find(|(w, _)| *w == v).map_or(0, |(_, e)| *e)
    }

    pub fn max_order(&self) -> u32 {
        self.0.iter().map(|(v, _)| v.order).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &JetMonomial) -> JetMonomial {
        let mut out: Vec<(JetVar, u32)> = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, ea) = self.0[i];
            let (b, eb) = other.0[j];
            match a.cmp(&b) {
                core::cmp::Ordering::Less => {
                    out.push((a, ea));
                    i += 1;
                }
                core::cmp::Ordering::Greater => {
                    out.push((b, eb));
                    j += 1;
                }
                core::cmp::Ordering::Equal => {
                    out.push((a, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        JetMonomial(out)
    }

    /// Lowers the exponent of `v` by one; returns the old exponent.
    fn lowered(&self, v: JetVar) -> Option<(u32, JetMonomial)> {
        let pos = self.0.iter().position(|(w, _)| *w == v)?;
        let mut f = self.0.clone();
        let e = f[pos].1;
        if e == 1 {
            f.remove(pos);
        } else {
            f[pos].1 = e - 1;
        }
        Some((e, JetMonomial(f)))
    }
}

/// An element of the ring of differential polynomials.
///
/// Stored as a sparse map from jet monomials to nonzero rational-function
/// coefficients in `u^1..u^n`. There is no explicit `x` dependence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetExpression {
    n: usize,
    terms: BTreeMap<JetMonomial, RatFun>,
}

impl JetExpression {
    pub fn zero(n: usize) -> Self {
        JetExpression { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::from_ratfun(RatFun::one(n))
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        Self::from_ratfun(RatFun::constant(n, c))
    }

    pub fn from_int(n: usize, c: i64) -> Self {
        Self::constant(n, Rational::from_integer(BigInt::from(c)))
    }

    pub fn from_ratfun(f: RatFun) -> Self {
        let n = f.nvars();
        Self::term(JetMonomial::one(), f).unwrap_or_else(|| Self::zero(n))
    }

    fn term(m: JetMonomial, f: RatFun) -> Option<Self> {
        if f.is_zero() {
            return None;
        }
        let mut terms = BTreeMap::new();
        let n = f.nvars();
        terms.insert(m, f);
        Some(JetExpression { n, terms })
    }

    /// The jet variable `u^coord_(order)`; order zero gives `u^coord` itself.
    pub fn var(n: usize, coord: usize, order: u32) -> Self {
        if order == 0 {
            Self::from_ratfun(RatFun::var(n, coord))
        } else {
            Self::term(JetMonomial::var(JetVar::new(coord, order)), RatFun::one(n)).expect("nonzero")
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (JetMonomial, RatFun)>>(n: usize, terms: I) -> Self {
        let mut out = Self::zero(n);
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&JetMonomial, &RatFun)> {
        self.terms.iter()
    }

    /// Largest jet order present; zero when only `u` itself occurs.
    pub fn max_order(&self) -> u32 {
        self.terms.keys().map(JetMonomial::max_order).max().unwrap_or(0)
    }

    /// Largest order at which coordinate `i` occurs, counting `u^i` as order 0.
    pub fn max_order_of(&self, i: usize) -> Option<u32> {
        let mut best = None;
        for (m, c) in &self.terms {
            if c.uses_var(i) {
                best = best.max(Some(0));
            }
            for (v, _) in m.factors() {
                if v.coord == i {
                    best = best.max(Some(v.order));
                }
            }
        }
        best
    }

    /// The coefficient function when no jet variable of order >= 1 occurs.
    pub fn as_ratfun(&self) -> Option<RatFun> {
        if self.terms.is_empty() {
            return Some(RatFun::zero(self.n));
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&JetMonomial::one()) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn is_u_only(&self) -> bool {
        self.terms.keys().all(JetMonomial::is_one)
    }

    pub fn constant_value(&self) -> Option<Rational> {
        self.as_ratfun()?.constant_value()
    }

    pub fn coefficient(&self, m: &JetMonomial) -> RatFun {
        self.terms.get(m).cloned().unwrap_or_else(|| RatFun::zero(self.n))
    }

    fn check_ctx(&self, other: &JetExpression) -> Result<()> {
        if self.n != other.n {
            return Err(CoreError::Context { left: self.n, right: other.n });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &JetExpression) -> Result<Self> {
        self.check_ctx(other)?;
        Ok(self + other)
    }

    pub fn try_mul(&self, other: &JetExpression) -> Result<Self> {
        self.check_ctx(other)?;
        Ok(self * other)
    }

    fn add_term(&mut self, m: JetMonomial, c: RatFun) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = &*v + &c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        JetExpression { n: self.n, terms: self.terms.iter().map(|(m, f)| (m.clone(), f.scale(c))).collect() }
    }

    pub fn mul_ratfun(&self, f: &RatFun) -> Self {
        if f.is_zero() {
            return Self::zero(self.n);
        }
        if let Some(c) = f.constant_value() {
            return self.scale(&c);
        }
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * f);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one(self.n);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Maps every coefficient through `f`.
    pub fn map_coefficients<F: FnMut(&RatFun) -> RatFun>(&self, mut f: F) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Formal partial derivative in `u^i_(s)`.
    pub fn partial(&self, i: usize, s: u32) -> Self {
        let mut out = Self::zero(self.n);
        if s == 0 {
            for (m, c) in &self.terms {
                out.add_term(m.clone(), c.derivative(i));
            }
        } else {
            let v = JetVar::new(i, s);
            for (m, c) in &self.terms {
                if let Some((e, lowered)) = m.lowered(v) {
                    out.add_term(lowered, c.scale(&Rational::from_integer(BigInt::from(e))));
                }
            }
        }
        out
    }

    /// Total derivative `d/dx`.
    pub fn total_derivative_once(&self) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            // coefficient part: sum_i dc/du^i * u^i_(1)
            for i in 0..self.n {
                if c.uses_var(i) {
                    let dc = c.derivative(i);
                    out.add_term(m.mul(&JetMonomial::var(JetVar::new(i, 1))), dc);
                }
            }
            // monomial part: d/dx (u^i_(s))^e = e (u^i_(s))^(e-1) u^i_(s+1)
            for &(v, _) in m.factors() {
                let (e, lowered) = m.lowered(v).expect("factor present");
                let next = lowered.mul(&JetMonomial::var(JetVar::new(v.coord, v.order + 1)));
                out.add_term(next, c.scale(&Rational::from_integer(BigInt::from(e))));
            }
        }
        out
    }

    /// `d^k/dx^k`.
    pub fn total_derivative(&self, k: u32) -> Self {
        let mut out = self.clone();
        for _ in 0..k {
            out = out.total_derivative_once();
        }
        out
    }

    /// Successive total derivatives `self, d/dx self, ..., d^k/dx^k self`.
    pub fn total_derivatives_upto(&self, k: u32) -> Vec<Self> {
        let mut out = Vec::with_capacity(k as usize + 1);
        out.push(self.clone());
        for s in 0..k as usize {
            let next = out[s].total_derivative_once();
            out.push(next);
        }
        out
    }

    /// Formats with coordinate names; `name_k` denotes the k-th x-derivative.
    pub fn display_with<'a, S: AsRef<str>>(&'a self, names: &'a [S]) -> JetDisplay<'a, S> {
        JetDisplay { e: self, names }
    }
}

/// `d^k/dx^k e`.
pub fn total_derivative(e: &JetExpression, k: u32) -> JetExpression {
    e.total_derivative(k)
}

/// Formal partial derivative with respect to `u^i_(s)`.
pub fn jet_partial(e: &JetExpression, i: usize, s: u32) -> JetExpression {
    e.partial(i, s)
}

/// Euler operator: component `i` is `sum_t (-1)^t d^t/dx^t (df/du^i_(t))`.
pub fn variational_derivative(f: &JetExpression) -> Vec<JetExpression> {
    (0..f.nvars()).map(|i| variational_component(f, i)).collect()
}

pub(crate) fn variational_component(f: &JetExpression, i: usize) -> JetExpression {
    let n = f.nvars();
    let top = match f.max_order_of(i) {
        Some(t) => t,
        None => return JetExpression::zero(n),
    };
    let mut acc = JetExpression::zero(n);
    for t in 0..=top {
        let p = f.partial(i, t);
        if p.is_zero() {
            continue;
        }
        let d = p.total_derivative(t);
        if t % 2 == 0 {
            acc = &acc + &d;
        } else {
            acc = &acc - &d;
        }
    }
    acc
}

/// True iff every variational derivative of `f` vanishes, i.e. `f` is a
/// total x-derivative (up to an additive constant).
pub fn is_total_derivative(f: &JetExpression) -> bool {
    (0..f.nvars()).all(|i| variational_component(f, i).is_zero())
}

impl<'a> Add for &'a JetExpression {
    type Output = JetExpression;
    fn add(self, rhs: &'a JetExpression) -> JetExpression {
        debug_assert_eq!(self.n, rhs.n);
        let (mut big, small) = if self.terms.len() >= rhs.terms.len() { (self.clone(), rhs) } else { (rhs.clone(), self) };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }
}

impl<'a> Sub for &'a JetExpression {
    type Output = JetExpression;
    fn sub(self, rhs: &'a JetExpression) -> JetExpression {
        debug_assert_eq!(self.n, rhs.n);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl<'a> Mul for &'a JetExpression {
    type Output = JetExpression;
    fn mul(self, rhs: &'a JetExpression) -> JetExpression {
        debug_assert_eq!(self.n, rhs.n);
        let mut out = JetExpression::zero(self.n);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &JetExpression {
    type Output = JetExpression;
    fn neg(self) -> JetExpression {
        JetExpression { n: self.n, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Add for JetExpression {
    type Output = JetExpression;
    fn add(self, rhs: JetExpression) -> JetExpression {
        &self + &rhs
    }
}

impl Sub for JetExpression {
    type Output = JetExpression;
    fn sub(self, rhs: JetExpression) -> JetExpression {
        &self - &rhs
    }
}

impl Mul for JetExpression {
    type Output = JetExpression;
    fn mul(self, rhs: JetExpression) -> JetExpression {
        &self * &rhs
    }
}

impl Neg for JetExpression {
    type Output = JetExpression;
    fn neg(self) -> JetExpression {
        -&self
    }
}

impl From<RatFun> for JetExpression {
    fn from(f: RatFun) -> Self {
        JetExpression::from_ratfun(f)
    }
}

pub struct JetDisplay<'a, S> {
    e: &'a JetExpression,
    names: &'a [S],
}

impl<S: AsRef<str>> JetDisplay<'_, S> {
    fn monomial(&self, m: &JetMonomial) -> String {
        use core::fmt::Write;
        let mut s = String::new();
        for (v, e) in m.factors() {
            if !s.is_empty() {
                s.push('*');
            }
            let _ = write!(s, "{}_{}", self.names[v.coord].as_ref(), v.order);
            if *e > 1 {
                let _ = write!(s, "^{}", e);
            }
        }
        s
    }
}

impl<S: AsRef<str>> fmt::Display for JetDisplay<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use core::fmt::Write;
        if self.e.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.e.terms.iter() {
            let body = self.monomial(m);
            if let Some(q) = c.constant_value() {
                write_term(f, first, &q, &body)?;
            } else {
                let mut coeff = String::new();
                let _ = write!(coeff, "{}", c.display_with(self.names));
                let simple_num = c.numer().len() == 1 && c.denom().is_one();
                if !first {
                    f.write_str(" + ")?;
                }
                if body.is_empty() {
                    if c.denom().is_one() {
                        write!(f, "{}", coeff)?;
                    } else {
                        write!(f, "({})", coeff)?;
                    }
                } else if simple_num {
                    write!(f, "{}*{}", coeff, body)?;
                } else {
                    write!(f, "({})*{}", coeff, body)?;
                }
            }
            first = false;
        }
        Ok(())
    }
}

/// Evaluates a polynomial in jet variables given as `SparsePoly` over an
/// explicit variable list; used by generators and parsers.
pub fn jet_from_poly(n: usize, poly: &SparsePoly, vars: &[JetVar]) -> JetExpression {
    let mut out = JetExpression::zero(n);
    for (m, c) in poly.terms() {
        let mut term = JetExpression::constant(n, c.clone());
        for (k, &e) in m.exps().iter().enumerate() {
            if e > 0 {
                term = &term * &JetExpression::var(n, vars[k].coord, vars[k].order).pow(e);
            }
        }
        out = &out + &term;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational;

    fn u(n: usize, i: usize, s: u32) -> JetExpression {
        JetExpression::var(n, i, s)
    }

    #[test]
    fn total_derivative_examples() {
        // d/dx u1 = u1_1
        assert_eq!(total_derivative(&u(2, 0, 0), 1), u(2, 0, 1));
        // Leibniz: d/dx (u1 u2_1) = u1_1 u2_1 + u1 u2_2
        let f = &u(2, 0, 0) * &u(2, 1, 1);
        let expected = &(&u(2, 0, 1) * &u(2, 1, 1)) + &(&u(2, 0, 0) * &u(2, 1, 2));
        assert_eq!(total_derivative(&f, 1), expected);
        // d^2/dx^2 u1^2 = 2 u1_1^2 + 2 u1 u1_2
        let f = u(1, 0, 0).pow(2);
        let expected = &u(1, 0, 1).pow(2).scale(&rational(2, 1)) + &(&u(1, 0, 0) * &u(1, 0, 2)).scale(&rational(2, 1));
        assert_eq!(total_derivative(&f, 2), expected);
    }

    #[test]
    fn total_derivative_raises_order_by_k() {
        let f = &u(2, 0, 0) * &u(2, 1, 2);
        assert_eq!(total_derivative(&f, 3).max_order(), 5);
        assert_eq!(total_derivative(&u(2, 1, 0), 2).max_order(), 2);
    }

    #[test]
    fn partial_examples() {
        let f = &u(2, 0, 0).pow(2) * &u(2, 1, 1);
        assert_eq!(jet_partial(&f, 0, 0), (&u(2, 0, 0) * &u(2, 1, 1)).scale(&rational(2, 1)));
        let g = u(1, 0, 1).pow(2);
        assert_eq!(jet_partial(&g, 0, 1), u(1, 0, 1).scale(&rational(2, 1)));
    }

    #[test]
    fn commutation_instance() {
        // f = u1 u1_1: d/du1_1 (d/dx f) - d/dx (d/du1_1 f) - d/du1 f = 0
        let f = &u(1, 0, 0) * &u(1, 0, 1);
        let lhs = jet_partial(&total_derivative(&f, 1), 0, 1);
        let rhs = &total_derivative(&jet_partial(&f, 0, 1), 1) + &jet_partial(&f, 0, 0);
        assert!((&lhs - &rhs).is_zero());
    }

    #[test]
    fn variational_examples() {
        let vd = variational_derivative(&u(3, 0, 0));
        assert_eq!(vd[0], JetExpression::one(3));
        assert!(vd[1].is_zero() && vd[2].is_zero());
        // f = u1_1^2 / 2 -> -u1_2
        let f = u(2, 0, 1).pow(2).scale(&rational(1, 2));
        let vd = variational_derivative(&f);
        assert_eq!(vd[0], -&u(2, 0, 2));
        assert!(vd[1].is_zero());
    }

    #[test]
    fn total_derivative_criterion() {
        assert!(is_total_derivative(&u(1, 0, 1)));
        assert!(!is_total_derivative(&u(1, 0, 0)));
        assert!(is_total_derivative(&(&u(1, 0, 0) * &u(1, 0, 1))));
        let g = RatFun::new(SparsePoly::one(2), &SparsePoly::var(2, 0) - &SparsePoly::var(2, 1)).unwrap();
        let g = &JetExpression::from_ratfun(g) * &u(2, 1, 2);
        assert!(is_total_derivative(&total_derivative(&g, 1)));
    }

    #[test]
    fn display_uses_grammar() {
        let names = ["u1", "u2"];
        let f = &u(2, 0, 0).pow(2) * &u(2, 1, 1);
        assert_eq!(alloc::format!("{}", f.display_with(&names)), "u1^2*u2_1");
        assert_eq!(alloc::format!("{}", (-&u(2, 1, 3)).display_with(&names)), "-u2_3");
    }
}
