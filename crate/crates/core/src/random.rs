//! Seeded generators of small random differential polynomials and forms.

use alloc::vec::Vec;

use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{RatFun, Rational, SparsePoly};
use crate::forms::{FunctionalDensity, OneForm};
use crate::jet::JetExpression;

pub use rand_chacha::ChaCha8Rng as SeededRng;

/// Default seed for reproducible randomized checks.
pub const DEFAULT_SEED: u64 = 20_240_601;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape of random polynomial data.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shape {
    pub n: usize,
    /// Highest jet order of a variable; 0 gives functions of `u` only.
    pub max_order: u32,
    /// Highest total degree of a monomial.
    pub max_degree: u32,
    /// Number of monomials drawn (duplicates merge).
    pub terms: usize,
    /// Coefficients are drawn from `-coeff..=coeff`, excluding zero.
    pub coeff: i64,
}

impl Shape {
    pub fn new(n: usize, max_order: u32, max_degree: u32) -> Self {
        Shape { n, max_order, max_degree, terms: 3, coeff: 3 }
    }
}

fn small_coeff<R: Rng>(rng: &mut R, bound: i64) -> Rational {
    let mut c = 0;
    while c == 0 {
        c = rng.gen_range(-bound..=bound);
    }
    Rational::from_integer(BigInt::from(c))
}

/// Random differential polynomial with polynomial coefficients in `u`.
pub fn jet_expression<R: Rng>(rng: &mut R, shape: Shape) -> JetExpression {
    let n = shape.n;
    let mut out = JetExpression::zero(n);
    for _ in 0..shape.terms {
        let deg = rng.gen_range(0..=shape.max_degree);
        let mut term = JetExpression::constant(n, small_coeff(rng, shape.coeff));
        for _ in 0..deg {
            let i = rng.gen_range(0..n);
            let s = rng.gen_range(0..=shape.max_order);
            term = &term * &JetExpression::var(n, i, s);
        }
        out = &out + &term;
    }
    out
}

/// Random polynomial in `u^1..u^n`.
pub fn polynomial<R: Rng>(rng: &mut R, n: usize, max_degree: u32, terms: usize, coeff: i64) -> SparsePoly {
    let mut out = SparsePoly::zero(n);
    for _ in 0..terms {
        let deg = rng.gen_range(0..=max_degree);
        let mut term = SparsePoly::constant(n, small_coeff(rng, coeff));
        for _ in 0..deg {
            term = &term * &SparsePoly::var(n, rng.gen_range(0..n));
        }
        out = &out + &term;
    }
    out
}

/// Random rational function with a nonzero polynomial denominator.
pub fn ratfun<R: Rng>(rng: &mut R, n: usize, max_degree: u32) -> RatFun {
    let num = polynomial(rng, n, max_degree, 3, 3);
    let mut den = polynomial(rng, n, max_degree, 2, 3);
    while den.is_zero() {
        den = polynomial(rng, n, max_degree, 2, 3);
    }
    RatFun::new(num, den).expect("nonzero denominator")
}

/// Random reduced 1-form.
pub fn one_form<R: Rng>(rng: &mut R, shape: Shape) -> OneForm {
    let comps: Vec<JetExpression> = (0..shape.n).map(|_| jet_expression(rng, shape)).collect();
    OneForm::from_components(comps).expect("dimensions agree")
}

/// Random density of a local functional.
pub fn density<R: Rng>(rng: &mut R, shape: Shape) -> FunctionalDensity {
    FunctionalDensity::new(jet_expression(rng, shape))
}
