//! Multivariate GCD: a heuristic integer-evaluation GCD with a recursive
//! primitive pseudo-remainder sequence as fallback.
//!
//! The result is only used to keep rational functions small. Equality of
//! rational functions never depends on it, so returning a non-maximal
//! common divisor would be sound, just slower.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::{Monomial, SparsePoly};
use super::Rational;

/// Monic greatest common divisor of `a` and `b`.
///
/// `gcd(0, 0) = 0`; otherwise the result has leading coefficient one.
pub fn gcd(a: &SparsePoly, b: &SparsePoly) -> SparsePoly {
    debug_assert_eq!(a.nvars(), b.nvars());
    gcd_inner(a, b).monic()
}

fn gcd_inner(a: &SparsePoly, b: &SparsePoly) -> SparsePoly {
    let n = a.nvars();
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return SparsePoly::one(n);
    }
    if a.len() == 1 && b.len() == 1 {
        let ma = a.leading_term().map(|(m, _)| m.clone()).unwrap_or_else(|| Monomial::one(n));
        let mb = b.leading_term().map(|(m, _)| m.clone()).unwrap_or_else(|| Monomial::one(n));
        let g: Vec<u32> = ma.exps().iter().zip(mb.exps()).map(|(x, y)| *x.min(y)).collect();
        return SparsePoly::monomial(Monomial::new(g), super::Rational::from_integer(1.into()));
    }

    // Split off monomial contents.
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    if ma.degree() > 0 || mb.degree() > 0 {
        let one = super::Rational::from_integer(1.into());
        let mg = Monomial::new(ma.exps().iter().zip(mb.exps()).map(|(x, y)| *x.min(y)).collect());
        let a1 = a.div_exact(&SparsePoly::monomial(ma, one.clone())).expect("monomial content divides");
        let b1 = b.div_exact(&SparsePoly::monomial(mb, one.clone())).expect("monomial content divides");
        let g = gcd_inner(&a1, &b1);
        return g.mul_monomial(&mg, &one);
    }

    // Cheap divisibility shortcut.
    let (small, big) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if small.total_degree() <= big.total_degree() && big.div_exact(small).is_some() {
        return small.clone();
    }

    // A variable present in only one argument can be eliminated via content.
    for v in 0..n {
        let ua = a.uses_var(v);
        let ub = b.uses_var(v);
        if ua && !ub {
            let ca = poly_content_in(a, v);
            return gcd_inner(&ca, b);
        }
        if ub && !ua {
            let cb = poly_content_in(b, v);
            return gcd_inner(a, &cb);
        }
    }

    let vars: Vec<usize> = (0..n).filter(|&v| a.uses_var(v)).collect();
    if let Some(h) = heu_gcd(&a.primitive_integer(), &b.primitive_integer(), &vars) {
        return h;
    }

    // Main variable: the common variable of least degree.
    let v = (0..n)
        .filter(|&v| a.uses_var(v))
        .min_by_key(|&v| a.degree_in(v).max(b.degree_in(v)))
        .expect("non-constant polynomial uses a variable");

    let ca = poly_content_in(a, v);
    let cb = poly_content_in(b, v);
    let c = gcd_inner(&ca, &cb);
    let mut p = a.div_exact(&ca).expect("content divides");
    let mut q = b.div_exact(&cb).expect("content divides");
    if p.degree_in(v) < q.degree_in(v) {
        core::mem::swap(&mut p, &mut q);
    }
    loop {
        let r = pseudo_remainder(&p, &q, v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(v) == 0 {
            q = SparsePoly::one(n);
            break;
        }
        p = q;
        q = primitive_part_in(&r, v);
    }
    let g = primitive_part_in(&q, v);
    (&c * &g).primitive_integer()
}

/// Integer content: gcd of the coefficients of an integer polynomial.
fn int_content(p: &SparsePoly) -> BigInt {
    p.terms().fold(BigInt::zero(), |acc, (_, c)| acc.gcd(c.numer()))
}

fn max_norm(p: &SparsePoly) -> BigInt {
    p.terms().map(|(_, c)| c.numer().abs()).max().unwrap_or_else(BigInt::zero)
}

fn map_ints<F: Fn(&BigInt) -> BigInt>(p: &SparsePoly, f: F) -> SparsePoly {
    SparsePoly::from_terms(p.nvars(), p.terms().map(|(m, c)| (m.clone(), Rational::from_integer(f(c.numer())))))
}

/// Heuristic GCD of integer polynomials in the variables `vars`: evaluate the
/// first variable at a large integer, recurse, rebuild the candidate from its
/// balanced `x`-adic digits and accept it only if it divides both inputs.
/// `None` when every evaluation point failed.
fn heu_gcd(f: &SparsePoly, g: &SparsePoly, vars: &[usize]) -> Option<SparsePoly> {
    let n = f.nvars();
    if f.is_zero() || g.is_zero() {
        return None;
    }
    let (cf, cg) = (int_content(f), int_content(g));
    let c = cf.gcd(&cg);
    let Some((&v, rest)) = vars.split_first() else {
        return Some(SparsePoly::constant(n, Rational::from_integer(c)));
    };
    let f = map_ints(f, |x| x / &cf);
    let g = map_ints(g, |x| x / &cg);
    let (nf, ng) = (max_norm(&f), max_norm(&g));
    let lf = f.leading_coeff().numer().abs();
    let lg = g.leading_coeff().numer().abs();
    let b: BigInt = BigInt::from(2) * nf.clone().min(ng.clone()) + 29;
    let mut x = (b.clone().min(BigInt::from(99) * b.sqrt())).max(BigInt::from(2) * (nf / lf).min(ng / lg) + 2);
    for _ in 0..6 {
        let xr = Rational::from_integer(x.clone());
        let ff = f.substitute(v, &xr);
        let gg = g.substitute(v, &xr);
        if let Some(h) = heu_gcd(&ff, &gg, rest) {
            let h = interpolate(&h, &x, v).primitive_integer();
            if !h.is_zero() && f.div_exact(&h).is_some() && g.div_exact(&h).is_some() {
                return Some(map_ints(&h, |y| y * &c));
            }
        }
        x = BigInt::from(73794) * &x * x.sqrt().sqrt() / BigInt::from(27011);
    }
    None
}

/// Polynomial in `x_v` whose coefficients are the balanced base-`x` digits of `h`.
fn interpolate(h: &SparsePoly, x: &BigInt, v: usize) -> SparsePoly {
    let n = h.nvars();
    let half = x / 2;
    let mut h = h.clone();
    let mut out = SparsePoly::zero(n);
    let mut e = 0;
    while !h.is_zero() {
        let digit = map_ints(&h, |c| {
            let r = c.mod_floor(x);
            if r > half {
                r - x
            } else {
                r
            }
        });
        out = &out + &digit.mul_monomial(&Monomial::var(n, v, e), &Rational::one());
        h = map_ints(&(&h - &digit), |c| c / x);
        e += 1;
    }
    out
}

/// GCD of the coefficients of `p` viewed as a polynomial in `x_v`.
pub fn poly_content_in(p: &SparsePoly, v: usize) -> SparsePoly {
    let mut coeffs: Vec<SparsePoly> = p.coeffs_in(v).into_iter().filter(|c| !c.is_zero()).collect();
    if coeffs.is_empty() {
        return SparsePoly::zero(p.nvars());
    }
    // Small coefficients first: the running gcd shrinks faster.
    coeffs.sort_by_key(|c| c.len());
    let mut g = coeffs[0].clone();
    for c in &coeffs[1..] {
        if g.is_constant() {
            break;
        }
        g = gcd_inner(&g, c);
    }
    if g.is_constant() {
        SparsePoly::one(p.nvars())
    } else {
        g.primitive_integer()
    }
}

fn primitive_part_in(p: &SparsePoly, v: usize) -> SparsePoly {
    let c = poly_content_in(p, v);
    p.div_exact(&c).expect("content divides").primitive_integer()
}

fn pseudo_remainder(a: &SparsePoly, b: &SparsePoly, v: usize) -> SparsePoly {
    let n = a.nvars();
    let db = b.degree_in(v);
    let lcb = b.coeff_of(v, db);
    let one = super::Rational::from_integer(1.into());
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lcr = r.coeff_of(v, dr);
        let shift = SparsePoly::monomial(Monomial::var(n, v, dr - db), one.clone());
        let t = &(&lcr * &shift) * b;
        r = &(&lcb * &r) - &t;
        r = r.primitive_integer();
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(n: usize) -> Vec<SparsePoly> {
        (0..n).map(|v| SparsePoly::var(n, v)).collect()
    }

    #[test]
    fn gcd_of_products() {
        let x = vars(3);
        let one = SparsePoly::one(3);
        let f1 = &x[0] - &x[1];
        let f2 = &(&x[1] * &x[2]) + &one;
        let f3 = &x[0] + &(&x[2] * &x[2]);
        let a = &(&f1 * &f1) * &f2;
        let b = &(&f1 * &f3) * &f2.scale(&super::super::rational(-3, 2));
        let g = gcd(&a, &b);
        assert_eq!(g, (&f1 * &f2).monic());
    }

    #[test]
    fn coprime_inputs() {
        let x = vars(2);
        let a = &x[0] + &x[1];
        let b = &x[0] - &x[1];
        assert!(gcd(&a, &b).is_one());
    }

    #[test]
    fn monomial_factors() {
        let x = vars(2);
        let a = &(&x[0] * &x[0]) * &(&x[0] + &x[1]);
        let b = &(&x[0] * &x[1]) * &(&x[0] + &x[1]);
        assert_eq!(gcd(&a, &b), (&x[0] * &(&x[0] + &x[1])).monic());
    }

    #[test]
    fn zero_arguments() {
        let x = vars(2);
        let a = x[0].scale(&super::super::rational(4, 1));
        assert_eq!(gcd(&a, &SparsePoly::zero(2)), x[0]);
        assert!(gcd(&SparsePoly::zero(2), &SparsePoly::zero(2)).is_zero());
    }
}
