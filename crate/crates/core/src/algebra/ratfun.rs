//! Rational functions in a fixed variable context.

use alloc::string::ToString;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gcd::gcd;
use super::poly::SparsePoly;
use super::Rational;
use crate::error::{CoreError, Result};

/// Quotient `num / den` of sparse polynomials.
///
/// Values built through the public constructors and arithmetic are kept
/// normalized: `num` and `den` coprime and `den` monic under grlex. Equality
/// checks never rely on that and cross-multiply instead.
#[derive(Clone, Debug)]
pub struct RatFun {
    num: SparsePoly,
    den: SparsePoly,
}

impl RatFun {
    pub fn zero(nvars: usize) -> Self {
        RatFun { num: SparsePoly::zero(nvars), den: SparsePoly::one(nvars) }
    }

    pub fn one(nvars: usize) -> Self {
        RatFun { num: SparsePoly::one(nvars), den: SparsePoly::one(nvars) }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        RatFun { num: SparsePoly::constant(nvars, c), den: SparsePoly::one(nvars) }
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, Rational::from_integer(c.into()))
    }

    pub fn var(nvars: usize, v: usize) -> Self {
        Self::from_poly(SparsePoly::var(nvars, v))
    }

    pub fn from_poly(p: SparsePoly) -> Self {
        let n = p.nvars();
        RatFun { num: p, den: SparsePoly::one(n) }
    }

    /// Builds and normalizes `num / den`.
    pub fn new(num: SparsePoly, den: SparsePoly) -> Result<Self> {
        num.check_ctx(&den)?;
        if den.is_zero() {
            return Err(CoreError::DivisionByZero);
        }
        Ok(Self::raw(num, den).normalized())
    }

    /// Unnormalized quotient; the caller guarantees `den != 0`.
    pub fn raw(num: SparsePoly, den: SparsePoly) -> Self {
        debug_assert!(!den.is_zero());
        RatFun { num, den }
    }

    pub fn numer(&self) -> &SparsePoly {
        &self.num
    }

    pub fn denom(&self) -> &SparsePoly {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        !self.num.is_zero() && self.num == self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        let n = self.num.constant_value()?;
        let d = self.den.constant_value()?;
        Some(n / d)
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    pub fn uses_var(&self, v: usize) -> bool {
        self.num.uses_var(v) || self.den.uses_var(v)
    }

    /// Cancels common factors and makes the denominator monic.
    pub fn normalized(self) -> Self {
        if self.num.is_zero() {
            return Self::zero(self.nvars());
        }
        if let Some(d) = self.den.constant_value() {
            if d.is_one() {
                return self;
            }
            return RatFun { num: self.num.scale(&d.recip()), den: SparsePoly::one(self.nvars()) };
        }
        let g = gcd(&self.num, &self.den);
        let (num, den) = if g.is_one() {
            (self.num, self.den)
        } else {
            (
                self.num.div_exact(&g).expect("gcd divides numerator"),
                self.den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading_coeff();
        if lc.is_one() {
            RatFun { num, den }
        } else {
            let inv = lc.recip();
            RatFun { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars());
        }
        RatFun { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(CoreError::DivisionByZero);
        }
        let lc = self.num.leading_coeff().recip();
        Ok(RatFun { num: self.den.scale(&lc), den: self.num.scale(&lc) })
    }

    pub fn checked_div(&self, other: &RatFun) -> Result<Self> {
        self.num.check_ctx(&other.num)?;
        Ok(self * &other.recip()?)
    }

    pub fn try_add(&self, other: &RatFun) -> Result<Self> {
        self.num.check_ctx(&other.num)?;
        Ok(self + other)
    }

    pub fn try_mul(&self, other: &RatFun) -> Result<Self> {
        self.num.check_ctx(&other.num)?;
        Ok(self * other)
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        if e < 0 {
            return self.recip()?.pow(-e);
        }
        let e = e as u32;
        Ok(RatFun { num: self.num.pow(e), den: self.den.pow(e) })
    }

    /// Partial derivative in `x_v` by the quotient rule.
    pub fn derivative(&self, v: usize) -> Self {
        let dn = self.num.derivative(v);
        if self.den.is_constant() {
            return RatFun { num: dn, den: self.den.clone() };
        }
        let dd = self.den.derivative(v);
        if dd.is_zero() {
            return RatFun { num: dn, den: self.den.clone() }.normalized();
        }
        // With h = gcd(D, D'), D = h D1 and D' = h D2:
        // d(N/D) = (N' D1 - N D2) / (D D1), already in lowest terms.
        let h = gcd(&self.den, &dd);
        let d1 = self.den.div_exact(&h).expect("gcd divides");
        let d2 = dd.div_exact(&h).expect("gcd divides");
        let top = &(&dn * &d1) - &(&self.num * &d2);
        if top.is_zero() {
            return Self::zero(self.nvars());
        }
        Self::with_monic_den(top, &self.den * &d1)
    }

    /// `num / den` with coprime arguments, scaled to a monic denominator.
    fn with_monic_den(num: SparsePoly, den: SparsePoly) -> Self {
        let lc = den.leading_coeff();
        if lc.is_one() {
            RatFun { num, den }
        } else {
            let inv = lc.recip();
            RatFun { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn display_with<'a, S: AsRef<str>>(&'a self, names: &'a [S]) -> RatFunDisplay<'a, S> {
        RatFunDisplay { f: self, names }
    }

    /// Exact equality by cross-multiplication.
    pub fn equals(&self, other: &RatFun) -> bool {
        if self.num == other.num && self.den == other.den {
            return true;
        }
        if self.num.is_zero() || other.num.is_zero() {
            return self.num.is_zero() && other.num.is_zero();
        }
        &self.num * &other.den == &other.num * &self.den
    }
}

impl PartialEq for RatFun {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl Eq for RatFun {}

/// True iff `a.num * b.den - b.num * a.den` vanishes.
pub fn ratfun_equal(a: &RatFun, b: &RatFun) -> Result<bool> {
    a.num.check_ctx(&b.num)?;
    Ok(a.equals(b))
}

pub fn ratfun_normalize(a: &RatFun) -> Result<RatFun> {
    if a.den.is_zero() {
        return Err(CoreError::DivisionByZero);
    }
    Ok(a.clone().normalized())
}

impl<'a> Add for &'a RatFun {
    type Output = RatFun;
    fn add(self, rhs: &'a RatFun) -> RatFun {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFun::raw(&self.num + &rhs.num, self.den.clone()).normalized();
        }
        if self.den.is_one() {
            return RatFun { num: &(&self.num * &rhs.den) + &rhs.num, den: rhs.den.clone() };
        }
        if rhs.den.is_one() {
            return RatFun { num: &self.num + &(&rhs.num * &self.den), den: self.den.clone() };
        }
        let g = gcd(&self.den, &rhs.den);
        let bd = self.den.div_exact(&g).expect("gcd divides");
        let dd = rhs.den.div_exact(&g).expect("gcd divides");
        let t = &(&self.num * &dd) + &(&rhs.num * &bd);
        if t.is_zero() {
            return RatFun::zero(self.nvars());
        }
        if g.is_one() {
            return RatFun { num: t, den: &self.den * &rhs.den };
        }
        // t is coprime to both cofactors, so only g can share factors with it.
        let g2 = gcd(&t, &g);
        let t = t.div_exact(&g2).expect("gcd divides");
        let dd2 = rhs.den.div_exact(&g2).expect("gcd divides");
        RatFun::with_monic_den(t, &bd * &dd2)
    }
}

impl<'a> Sub for &'a RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &'a RatFun) -> RatFun {
        self + &(-rhs)
    }
}

impl<'a> Mul for &'a RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &'a RatFun) -> RatFun {
        if self.is_zero() || rhs.is_zero() {
            return RatFun::zero(self.nvars());
        }
        if let Some(c) = self.constant_value() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.constant_value() {
            return self.scale(&c);
        }
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = rhs.den.div_exact(&g1).expect("gcd divides");
        let n2 = rhs.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        RatFun::with_monic_den(&n1 * &n2, &d1 * &d2)
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun { num: -self.num, den: self.den }
    }
}

pub struct RatFunDisplay<'a, S> {
    f: &'a RatFun,
    names: &'a [S],
}

impl<S: AsRef<str>> fmt::Display for RatFunDisplay<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.f.num.display_with(self.names);
        if self.f.den.is_one() {
            return write!(f, "{}", num);
        }
        if self.f.num.len() > 1 {
            write!(f, "({})", num)?;
        } else {
            write!(f, "{}", num)?;
        }
        let den = self.f.den.display_with(self.names).to_string();
        let single = self.f.den.len() == 1 && !den.contains('*');
        if single {
            write!(f, "/{}", den)
        } else {
            write!(f, "/({})", den)
        }
    }
}
