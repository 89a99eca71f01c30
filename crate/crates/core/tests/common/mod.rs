#![allow(dead_code)]

use loopform::random::{jet_expression, ratfun, Shape, DEFAULT_SEED};
use loopform::{EvField, JetExpression, Matrix, MetricData, RatFun, SparsePoly};
use proptest::test_runner::{Config, RngSeed};
use rand::Rng;

/// Deterministic proptest configuration with `cases` seeds.
pub fn config(cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(DEFAULT_SEED), failure_persistence: None, ..Config::default() }
}

/// Differential polynomial whose coefficients carry a random denominator.
pub fn rational_jet<R: Rng>(rng: &mut R, shape: Shape) -> JetExpression {
    let e = jet_expression(rng, shape);
    let mut den = loopform::random::polynomial(rng, shape.n, 1, 2, 3);
    while den.is_zero() {
        den = loopform::random::polynomial(rng, shape.n, 1, 2, 3);
    }
    e.mul_ratfun(&RatFun::new(SparsePoly::one(shape.n), den).unwrap())
}

pub fn field<R: Rng>(rng: &mut R, shape: Shape) -> EvField {
    EvField::new((0..shape.n).map(|_| jet_expression(rng, shape)).collect()).unwrap()
}

pub fn u_only<R: Rng>(rng: &mut R, n: usize) -> Vec<RatFun> {
    (0..n).map(|_| ratfun(rng, n, 2)).collect()
}

pub fn constant_metric(rows: &[&[i64]]) -> MetricData {
    let n = rows.len();
    let m = Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&c| RatFun::from_int(n, c)).collect()).collect()).unwrap();
    MetricData::constant(m).unwrap()
}

/// Euclidean plane in polar coordinates `(r, theta)`: `g^{11} = 1`, `g^{22} = 1/r^2`.
pub fn polar() -> MetricData {
    let r = SparsePoly::var(2, 0);
    let g22 = RatFun::new(SparsePoly::one(2), &r * &r).unwrap();
    let g = Matrix::from_rows(vec![vec![RatFun::one(2), RatFun::zero(2)], vec![RatFun::zero(2), g22]]).unwrap();
    MetricData::from_contravariant(g).unwrap()
}
