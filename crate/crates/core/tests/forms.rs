mod common;

use loopform::algebra::rational;
use loopform::random::{one_form, seeded, Shape};
use loopform::{
    contract_one, contract_two, delta_form, ev_commutator, lie_derivative, reduce_form, total_derivative, EvField,
    JetExpression, OneForm,
};
use proptest::prelude::*;
use rand::Rng;

/// General form with coefficients on `delta u^i_(t)` for `t <= 2`.
fn general_form<R: Rng>(rng: &mut R, n: usize) -> OneForm {
    let shape = Shape::new(n, 1, 2);
    let entries: Vec<(usize, u32, JetExpression)> =
        (0..n).flat_map(|i| (0..=2).map(move |t| (i, t))).map(|(i, t)| (i, t, common::rational_jet(rng, shape))).collect();
    OneForm::from_general(n, entries).unwrap()
}

/// `d/dx` of a general form: coefficients differentiated, differentials shifted.
fn total_derivative_of_form(alpha: &OneForm) -> OneForm {
    let mut entries = Vec::new();
    for (&(i, t), c) in alpha.entries() {
        entries.push((i, t, total_derivative(c, 1)));
        entries.push((i, t + 1, c.clone()));
    }
    OneForm::from_general(alpha.n(), entries).unwrap()
}

proptest! {
    #![proptest_config(common::config(24))]

    #[test]
    fn reduction_is_idempotent_and_linear(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let (a, b) = (general_form(&mut rng, 2), general_form(&mut rng, 2));
        let ra = reduce_form(&a);
        prop_assert!(ra.is_reduced());
        prop_assert_eq!(reduce_form(&ra), ra.clone());
        let p = rational(2, 3);
        let comb = OneForm::from_general(2, a.entries().map(|(&(i, t), c)| (i, t, c.scale(&p))).chain(b.entries().map(|(&(i, t), c)| (i, t, c.clone())))).unwrap();
        let lhs = reduce_form(&comb).components();
        let (ca, cb) = (ra.components(), reduce_form(&b).components());
        for i in 0..2 {
            prop_assert_eq!(&lhs[i], &(&ca[i].scale(&p) + &cb[i]));
        }
    }

    #[test]
    fn total_derivatives_of_forms_reduce_to_zero(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let a = general_form(&mut rng, 2);
        prop_assert!(reduce_form(&total_derivative_of_form(&a)).components().iter().all(JetExpression::is_zero));
    }

    #[test]
    fn delta_is_antisymmetric(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let a = general_form(&mut rng, 2);
        let w = delta_form(&a);
        for (&(p, q), c) in w.entries() {
            prop_assert_eq!(w.entry(p, q), c.clone());
            prop_assert_eq!(w.entry(q, p), -c);
        }
    }

    #[test]
    fn cartan_formula_for_arbitrary_fields(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let shape = Shape::new(2, 2, 2);
        let alpha = one_form(&mut rng, shape);
        let xi = common::field(&mut rng, shape);
        let lhs = contract_two(&delta_form(&alpha), &xi).unwrap().add(&contract_one(&alpha, &xi).unwrap().delta());
        prop_assert!(lhs.class_eq(&lie_derivative(&xi, &alpha).unwrap()));
    }

    #[test]
    fn commutator_is_antisymmetric_and_bilinear(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let shape = Shape::new(2, 2, 2);
        let (x, y, z) = (common::field(&mut rng, shape), common::field(&mut rng, shape), common::field(&mut rng, shape));
        prop_assert!(ev_commutator(&x, &y).unwrap().add(&ev_commutator(&y, &x).unwrap()).is_zero());
        let lhs = ev_commutator(&x.add(&z), &y).unwrap();
        prop_assert_eq!(lhs, ev_commutator(&x, &y).unwrap().add(&ev_commutator(&z, &y).unwrap()));
    }

    #[test]
    fn commutator_jacobi(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let shape = Shape::new(2, 2, 2);
        let (x, y, z) = (common::field(&mut rng, shape), common::field(&mut rng, shape), common::field(&mut rng, shape));
        let c = |a: &EvField, b: &EvField| ev_commutator(a, b).unwrap();
        let sum = c(&x, &c(&y, &z)).add(&c(&y, &c(&z, &x))).add(&c(&z, &c(&x, &y)));
        prop_assert!(sum.is_zero());
    }

    #[test]
    fn commutator_is_the_field_commutator(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let shape = Shape::new(2, 1, 2);
        let (x, y) = (common::field(&mut rng, shape), common::field(&mut rng, shape));
        let f = common::rational_jet(&mut rng, shape);
        let lhs = &x.apply(&y.apply(&f)) - &y.apply(&x.apply(&f));
        prop_assert_eq!(lhs, ev_commutator(&x, &y).unwrap().apply(&f));
    }
}
