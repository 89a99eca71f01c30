//! Loop-space 1-forms, 2-form representatives, local functionals, the
//! differential `delta`, and contraction with evolutionary fields.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::algebra::{Matrix, RatFun};
use crate::error::{CoreError, Result};
use crate::fields::{apply_with, EvField};
use crate::jet::{variational_component, variational_derivative, JetExpression, JetMonomial};

/// Slot `(coord, order)` of the differential `delta u^coord_(order)`.
pub type Slot = (usize, u32);

/// A 1-form `sum alpha_i^(t) delta u^i_(t)`.
///
/// A form is reduced when only order-zero slots occur; `reduce_form`
/// produces the canonical representative of the class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneForm {
    n: usize,
    general: BTreeMap<Slot, JetExpression>,
}

impl OneForm {
    pub fn zero(n: usize) -> Self {
        OneForm { n, general: BTreeMap::new() }
    }

    /// Reduced form with coefficients `alpha_i`.
    pub fn from_components(comps: Vec<JetExpression>) -> Result<Self> {
        let n = comps.len();
        let mut f = Self::zero(n);
        for (i, c) in comps.into_iter().enumerate() {
            if c.nvars() != n {
                return Err(CoreError::Dimension(format!("1-form has {} components over {} coordinates", n, c.nvars())));
            }
            f.set(i, 0, c);
        }
        Ok(f)
    }

    /// Reduced form with u-only coefficients.
    pub fn from_ratfuns(comps: Vec<RatFun>) -> Result<Self> {
        Self::from_components(comps.into_iter().map(JetExpression::from_ratfun).collect())
    }

    /// General form from `(coord, order, coefficient)` entries; repeated slots add.
    pub fn from_general<I: IntoIterator<Item = (usize, u32, JetExpression)>>(n: usize, entries: I) -> Result<Self> {
        let mut f = Self::zero(n);
        for (i, t, c) in entries {
            if i >= n || c.nvars() != n {
                return Err(CoreError::Dimension(format!("1-form entry for coordinate {} outside 0..{}", i, n)));
            }
            let sum = &f.coefficient(i, t) + &c;
            f.set(i, t, sum);
        }
        Ok(f)
    }

    fn set(&mut self, i: usize, t: u32, c: JetExpression) {
        if c.is_zero() {
            self.general.remove(&(i, t));
        } else {
            self.general.insert((i, t), c);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coefficient(&self, i: usize, t: u32) -> JetExpression {
        self.general.get(&(i, t)).cloned().unwrap_or_else(|| JetExpression::zero(self.n))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Slot, &JetExpression)> {
        self.general.iter()
    }

    pub fn is_reduced(&self) -> bool {
        self.general.keys().all(|&(_, t)| t == 0)
    }

    /// Reduced coefficients `alpha_i = sum_t (-1)^t d^t/dx^t alpha_i^(t)`.
    pub fn components(&self) -> Vec<JetExpression> {
        let mut out: Vec<JetExpression> = (0..self.n).map(|_| JetExpression::zero(self.n)).collect();
        for (&(i, t), c) in &self.general {
            let d = c.total_derivative(t);
            out[i] = if t % 2 == 0 { &out[i] + &d } else { &out[i] - &d };
        }
        out
    }

    /// True iff the class of the form in the space of 1-forms is zero.
    pub fn is_zero(&self) -> bool {
        self.components().iter().all(JetExpression::is_zero)
    }

    /// Equality of classes, decided on reduced coefficients.
    pub fn class_eq(&self, other: &OneForm) -> bool {
        self.n == other.n && self.sub(other).is_zero()
    }

    pub fn add(&self, other: &OneForm) -> OneForm {
        let mut out = self.clone();
        for (&(i, t), c) in &other.general {
            let sum = &out.coefficient(i, t) + c;
            out.set(i, t, sum);
        }
        out
    }

    pub fn sub(&self, other: &OneForm) -> OneForm {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> OneForm {
        OneForm { n: self.n, general: self.general.iter().map(|(k, c)| (*k, -c)).collect() }
    }

    pub fn max_order(&self) -> u32 {
        self.general.values().map(JetExpression::max_order).max().unwrap_or(0)
    }

    /// Coefficients as functions of `u` alone, when the form is reduced and jet-free.
    pub fn u_only_components(&self) -> Result<Vec<RatFun>> {
        self.components()
            .iter()
            .enumerate()
            .map(|(i, c)| {
                c.as_ratfun().ok_or_else(|| {
                    CoreError::Unsupported(format!("coefficient {} depends on jet variables", i + 1))
                })
            })
            .collect()
    }
}

/// Canonical reduced representative of the class of `alpha`.
pub fn reduce_form(alpha: &OneForm) -> OneForm {
    OneForm::from_components(alpha.components()).expect("dimensions preserved")
}

/// A local functional, the integral of a density modulo total derivatives and constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionalDensity {
    density: JetExpression,
}

impl FunctionalDensity {
    pub fn new(density: JetExpression) -> Self {
        FunctionalDensity { density }
    }

    pub fn density(&self) -> &JetExpression {
        &self.density
    }

    pub fn n(&self) -> usize {
        self.density.nvars()
    }

    /// True iff the functional is zero: the density is a total derivative with
    /// no constant term.
    pub fn is_zero_class(&self) -> bool {
        self.density.coefficient(&JetMonomial::one()).is_zero()
            && (0..self.n()).all(|i| variational_component(&self.density, i).is_zero())
    }

    pub fn equivalent(&self, other: &FunctionalDensity) -> bool {
        FunctionalDensity::new(&self.density - &other.density).is_zero_class()
    }

    /// The differential of the functional: its variational derivative as a reduced form.
    pub fn delta(&self) -> OneForm {
        OneForm::from_components(variational_derivative(&self.density)).expect("dimensions preserved")
    }
}

/// Antisymmetric representative of a 2-form
/// `1/2 sum_{a,b} w_{a;b} delta u_a ^ delta u_b`, stored for slots `a < b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoFormRep {
    n: usize,
    entries: BTreeMap<(Slot, Slot), JetExpression>,
}

impl TwoFormRep {
    pub fn zero(n: usize) -> Self {
        TwoFormRep { n, entries: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Adds `c delta u_a ^ delta u_b` to the form.
    pub fn add_wedge(&mut self, a: Slot, b: Slot, c: &JetExpression) {
        if a == b || c.is_zero() {
            return;
        }
        let (key, c) = if a < b { ((a, b), c.clone()) } else { ((b, a), -c) };
        let sum = match self.entries.get(&key) {
            Some(old) => old + &c,
            None => c,
        };
        if sum.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, sum);
        }
    }

    /// Entry `w_{a;b}`, with `w_{b;a} = -w_{a;b}`.
    pub fn entry(&self, a: Slot, b: Slot) -> JetExpression {
        if a < b {
            self.entries.get(&(a, b)).cloned().unwrap_or_else(|| JetExpression::zero(self.n))
        } else if b < a {
            -&self.entry(b, a)
        } else {
            JetExpression::zero(self.n)
        }
    }

    /// Nonzero entries with `a < b`.
    pub fn entries(&self) -> impl Iterator<Item = (&(Slot, Slot), &JetExpression)> {
        self.entries.iter()
    }
}

/// `delta alpha` for a reduced 1-form: `sum d alpha_i / d u^j_(t) delta u^j_(t) ^ delta u^i`.
pub fn delta_form(alpha: &OneForm) -> TwoFormRep {
    let comps = alpha.components();
    let n = alpha.n();
    let mut out = TwoFormRep::zero(n);
    for (i, a) in comps.iter().enumerate() {
        for j in 0..n {
            let Some(top) = a.max_order_of(j) else { continue };
            for t in 0..=top {
                out.add_wedge((j, t), (i, 0), &a.partial(j, t));
            }
        }
    }
    out
}

/// Contraction of a reduced 1-form with a field: the density `alpha_i xi^i`.
pub fn contract_one(alpha: &OneForm, xi: &EvField) -> Result<FunctionalDensity> {
    pairing(alpha, xi)
}

/// Contraction of a 2-form with a field: the 1-form with coefficient
/// `sum_a d^{s_a}/dx^{s_a}(xi^{j_a}) w_{a;b}` at slot `b`.
pub fn contract_two(omega: &TwoFormRep, xi: &EvField) -> Result<OneForm> {
    if omega.n() != xi.n() {
        return Err(CoreError::Context { left: omega.n(), right: xi.n() });
    }
    let max_s = omega.entries.keys().map(|((_, s), (_, t))| (*s).max(*t)).max().unwrap_or(0);
    let table = xi.prolongation(max_s);
    let n = omega.n();
    let mut general: BTreeMap<Slot, JetExpression> = BTreeMap::new();
    let mut push = |slot: Slot, e: JetExpression| {
        let entry = general.entry(slot).or_insert_with(|| JetExpression::zero(n));
        *entry = &*entry + &e;
    };
    for (&(a, b), w) in &omega.entries {
        // w delta u_a ^ delta u_b contracts to xi_a w delta u_b - xi_b w delta u_a
        let xa = &table[a.0][a.1 as usize];
        let xb = &table[b.0][b.1 as usize];
        if !xa.is_zero() {
            push(b, xa * w);
        }
        if !xb.is_zero() {
            push(a, -&(xb * w));
        }
    }
    OneForm::from_general(n, general.into_iter().map(|((i, t), c)| (i, t, c)))
}

/// Pairing `<alpha, xi>`: the density `alpha_i xi^i` of the reduced form.
pub fn pairing(alpha: &OneForm, xi: &EvField) -> Result<FunctionalDensity> {
    if alpha.n() != xi.n() {
        return Err(CoreError::Context { left: alpha.n(), right: xi.n() });
    }
    let comps = alpha.components();
    let mut acc = JetExpression::zero(alpha.n());
    for (a, x) in comps.iter().zip(xi.components()) {
        if !a.is_zero() && !x.is_zero() {
            acc = &acc + &(a * x);
        }
    }
    Ok(FunctionalDensity::new(acc))
}

/// Lie derivative of a 1-form along an evolutionary field, reduced:
/// `xi(alpha_i) + sum_t (-1)^t d^t/dx^t (alpha_k d xi^k / d u^i_(t))`.
pub fn lie_derivative(xi: &EvField, alpha: &OneForm) -> Result<OneForm> {
    if alpha.n() != xi.n() {
        return Err(CoreError::Context { left: alpha.n(), right: xi.n() });
    }
    let n = alpha.n();
    let a = alpha.components();
    let depth = a.iter().map(JetExpression::max_order).max().unwrap_or(0);
    let table = xi.prolongation(depth);
    let mut general = Vec::new();
    for (i, ai) in a.iter().enumerate() {
        general.push((i, 0, apply_with(&table, ai)));
    }
    for (k, ak) in a.iter().enumerate() {
        if ak.is_zero() {
            continue;
        }
        let xk = xi.component(k);
        for i in 0..n {
            let Some(top) = xk.max_order_of(i) else { continue };
            for t in 0..=top {
                let p = xk.partial(i, t);
                if !p.is_zero() {
                    general.push((i, t, ak * &p));
                }
            }
        }
    }
    Ok(reduce_form(&OneForm::from_general(n, general)?))
}

/// Finite-dimensional curl `d alpha_i/du^j - d alpha_j/du^i` of a u-only 1-form.
pub fn exactness_defect(alpha: &OneForm) -> Result<Matrix> {
    let a = alpha.u_only_components()?;
    let n = alpha.n();
    let mut m = Matrix::zeros(n, n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let d = &a[i].derivative(j) - &a[j].derivative(i);
            m[(j, i)] = -&d;
            m[(i, j)] = d;
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rational, SparsePoly};
    use alloc::vec;

    fn u(n: usize, i: usize, s: u32) -> JetExpression {
        JetExpression::var(n, i, s)
    }

    #[test]
    fn reduction_examples() {
        let a = OneForm::from_general(2, [(0, 1, u(2, 0, 0))]).unwrap();
        assert_eq!(reduce_form(&a).components()[0], -&u(2, 0, 1));
        let b = OneForm::from_general(2, [(0, 2, u(2, 0, 0))]).unwrap();
        assert_eq!(reduce_form(&b).components()[0], u(2, 0, 2));
        let r = reduce_form(&a);
        assert_eq!(reduce_form(&r), r);
    }

    #[test]
    fn image_of_d_reduces_to_zero() {
        // d/dx acting on the form beta = u2 delta u1: coefficients shift up one order
        // d(beta) = u2_1 delta u1 + u2 delta u1_1
        let f = OneForm::from_general(2, [(0, 0, u(2, 1, 1)), (0, 1, u(2, 1, 0))]).unwrap();
        assert!(f.is_zero());
    }

    #[test]
    fn delta_examples() {
        let a = OneForm::from_components(vec![u(1, 0, 0)]).unwrap();
        assert!(delta_form(&a).is_zero());
        let b = OneForm::from_components(vec![u(1, 0, 1)]).unwrap();
        let w = delta_form(&b);
        assert_eq!(w.entries().count(), 1);
        assert_eq!(w.entry((0, 1), (0, 0)), JetExpression::one(1));
        assert_eq!(w.entry((0, 0), (0, 1)), -&JetExpression::one(1));
    }

    #[test]
    fn functional_equivalence() {
        let g = &u(2, 0, 0) * &u(2, 1, 1);
        let total = FunctionalDensity::new(g.total_derivative(1));
        assert!(total.is_zero_class());
        assert!(!FunctionalDensity::new(JetExpression::from_int(2, 3)).is_zero_class());
        let shifted = FunctionalDensity::new(&g + &total.density().clone());
        assert!(shifted.equivalent(&FunctionalDensity::new(g)));
    }

    #[test]
    fn delta_of_exact_form_contracts_to_zero() {
        let f = FunctionalDensity::new(&u(2, 0, 0).pow(2) * &u(2, 1, 1).pow(2));
        let w = delta_form(&f.delta());
        let xi = EvField::new(vec![u(2, 1, 2), &u(2, 0, 0) * &u(2, 0, 1)]).unwrap();
        assert!(contract_two(&w, &xi).unwrap().is_zero());
    }

    #[test]
    fn contraction_examples() {
        let a = OneForm::from_components(vec![JetExpression::one(2), JetExpression::zero(2)]).unwrap();
        let xi = EvField::new(vec![u(2, 0, 1), JetExpression::zero(2)]).unwrap();
        assert_eq!(contract_one(&a, &xi).unwrap().density(), &u(2, 0, 1));
        assert!(contract_two(&TwoFormRep::zero(2), &xi).unwrap().is_zero());
    }

    #[test]
    fn contraction_of_delta_u1x() {
        // delta alpha = delta u1_1 ^ delta u1 contracts to (xi^1)_1 delta u1 - xi^1 delta u1_1.
        // For xi^1 = 1 that is -delta u1_1, whose reduction vanishes.
        let a = OneForm::from_components(vec![u(1, 0, 1)]).unwrap();
        let xi = EvField::new(vec![JetExpression::one(1)]).unwrap();
        let c = contract_two(&delta_form(&a), &xi).unwrap();
        assert_eq!(c.coefficient(0, 1), -&JetExpression::one(1));
        assert!(c.is_zero());
        // For xi^1 = u1 it is u1_1 delta u1 - u1 delta u1_1, reducing to 2 u1_1.
        let xi = EvField::new(vec![u(1, 0, 0)]).unwrap();
        let c = contract_two(&delta_form(&a), &xi).unwrap();
        assert_eq!(c.components()[0], u(1, 0, 1).scale(&rational(2, 1)));
    }

    #[test]
    fn pairing_examples() {
        let f = FunctionalDensity::new(u(2, 0, 0).pow(2).scale(&rational(1, 2)));
        let xi = EvField::new(vec![u(2, 1, 3), u(2, 0, 1)]).unwrap();
        assert_eq!(pairing(&f.delta(), &xi).unwrap().density(), &(&u(2, 0, 0) * &u(2, 1, 3)));
        assert!(pairing(&f.delta(), &EvField::zero(2)).unwrap().density().is_zero());
    }

    #[test]
    fn exactness_of_gradient() {
        let x = |v| SparsePoly::var(2, v);
        let h = RatFun::new(&x(0) * &x(1), &x(0) - &x(1)).unwrap();
        let grad = OneForm::from_ratfuns(vec![h.derivative(0), h.derivative(1)]).unwrap();
        assert!(exactness_defect(&grad).unwrap().is_zero());
        let rot = OneForm::from_ratfuns(vec![RatFun::var(2, 1), -&RatFun::var(2, 0)]).unwrap();
        let d = exactness_defect(&rot).unwrap();
        assert_eq!(d[(0, 1)], RatFun::from_int(2, 2));
        let jet = OneForm::from_components(vec![u(2, 0, 1), JetExpression::zero(2)]).unwrap();
        assert!(matches!(exactness_defect(&jet), Err(CoreError::Unsupported(_))));
    }
}
