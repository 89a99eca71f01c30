mod common;

use loopform::algebra::{ratfun_equal, ratfun_normalize};
use loopform::random::{ratfun, seeded};
use loopform::{Matrix, RatFun, SparsePoly};
use proptest::prelude::*;

proptest! {
    #![proptest_config(common::config(32))]

    #[test]
    fn field_axioms(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let (a, b, c) = (ratfun(&mut rng, 3, 3), ratfun(&mut rng, 3, 3), ratfun(&mut rng, 3, 3));
        prop_assert!(ratfun_equal(&(&(&a + &b) + &c), &(&a + &(&b + &c))).unwrap());
        prop_assert!(ratfun_equal(&(&a * &(&b + &c)), &(&(&a * &b) + &(&a * &c))).unwrap());
        prop_assert!(ratfun_equal(&(&a * &b), &(&b * &a)).unwrap());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn normalization_preserves_value(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let a = ratfun(&mut rng, 3, 3);
        let f = ratfun(&mut rng, 3, 2);
        prop_assume!(!f.is_zero());
        // a with a common factor spliced into numerator and denominator
        let raw = RatFun::raw(a.numer() * f.numer(), a.denom() * f.numer());
        let norm = ratfun_normalize(&raw).unwrap();
        prop_assert!(ratfun_equal(&raw, &norm).unwrap());
        prop_assert!(ratfun_equal(&norm, &a).unwrap());
        prop_assert!(norm.denom().leading_coeff() == loopform::algebra::rational(1, 1));
    }

    #[test]
    fn reduced_forms_are_unique(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let a = ratfun(&mut rng, 2, 2);
        let f = ratfun(&mut rng, 2, 2);
        prop_assume!(!f.is_zero());
        let scaled = RatFun::raw(a.numer() * f.numer(), a.denom() * f.numer()).normalized();
        prop_assert_eq!(scaled.numer(), a.numer());
        prop_assert_eq!(scaled.denom(), a.denom());
    }

    #[test]
    fn double_inverse(seed in any::<u64>(), n in 2usize..=3) {
        let mut rng = seeded(seed);
        let m = Matrix::from_fn(n, n, |_, _| ratfun(&mut rng, 2, 1));
        if let Ok(inv) = m.inverse() {
            prop_assert_eq!(inv.inverse().unwrap(), m.clone());
            prop_assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(2, n));
        }
    }

    #[test]
    fn derivative_rules(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let (a, b) = (ratfun(&mut rng, 2, 2), ratfun(&mut rng, 2, 2));
        for v in 0..2 {
            let lhs = (&a * &b).derivative(v);
            let rhs = &(&a.derivative(v) * &b) + &(&a * &b.derivative(v));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn gcd_divides_and_is_maximal(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let p = |rng: &mut _| loopform::random::polynomial(rng, 3, 2, 3, 5);
        let (f, a, b) = (p(&mut rng), p(&mut rng), p(&mut rng));
        prop_assume!(!f.is_zero() && !a.is_zero() && !b.is_zero());
        let g = loopform::algebra::gcd(&(&f * &a), &(&f * &b));
        prop_assert!((&f * &a).div_exact(&g).is_some());
        prop_assert!((&f * &b).div_exact(&g).is_some());
        prop_assert!(g.div_exact(&f).is_some());
        prop_assert!(g.leading_coeff() == loopform::algebra::rational(1, 1));
    }
}

#[test]
fn large_common_factor() {
    let x: Vec<SparsePoly> = (0..3).map(|v| SparsePoly::var(3, v)).collect();
    let l = |i: usize, j: usize| &x[i] - &x[j];
    let f = &(&l(0, 1).pow(4) * &l(1, 2).pow(2)) * &l(0, 2).pow(3);
    let a = &f * &(&(&x[0] * &x[1]) + &SparsePoly::one(3));
    let b = &f * &(&x[2].pow(3) - &x[0]);
    assert_eq!(loopform::algebra::gcd(&a, &b), f.monic());
}
