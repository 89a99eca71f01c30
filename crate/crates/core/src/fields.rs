//! Evolutionary vector fields on the loop space and their commutator.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{CoreError, Result};
use crate::jet::JetExpression;

/// Evolutionary field `u^i_t = xi^i`; the prolongation `d^k/dx^k xi^i` is implied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvField {
    comps: Vec<JetExpression>,
}

impl EvField {
    pub fn new(comps: Vec<JetExpression>) -> Result<Self> {
        let n = comps.len();
        if let Some(bad) = comps.iter().find(|c| c.nvars() != n) {
            return Err(CoreError::Dimension(format!("field has {} components over {} coordinates", n, bad.nvars())));
        }
        Ok(EvField { comps })
    }

    pub fn zero(n: usize) -> Self {
        EvField { comps: (0..n).map(|_| JetExpression::zero(n)).collect() }
    }

    pub fn n(&self) -> usize {
        self.comps.len()
    }

    pub fn components(&self) -> &[JetExpression] {
        &self.comps
    }

    pub fn component(&self, i: usize) -> &JetExpression {
        &self.comps[i]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(JetExpression::is_zero)
    }

    pub fn max_order(&self) -> u32 {
        self.comps.iter().map(JetExpression::max_order).max().unwrap_or(0)
    }

    pub fn add(&self, other: &EvField) -> EvField {
        EvField { comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &EvField) -> EvField {
        EvField { comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self) -> EvField {
        EvField { comps: self.comps.iter().map(|a| -a).collect() }
    }

    /// Prolongation table: entry `[i][s]` is `d^s/dx^s xi^i` for `s <= max_s`.
    pub fn prolongation(&self, max_s: u32) -> Vec<Vec<JetExpression>> {
        self.comps.iter().map(|c| c.total_derivatives_upto(max_s)).collect()
    }

    /// Action of the prolonged field on a density: `sum d^s/dx^s(xi^i) df/du^i_(s)`.
    pub fn apply(&self, f: &JetExpression) -> JetExpression {
        let table = self.prolongation(f.max_order());
        apply_with(&table, f)
    }
}

/// `apply` with a precomputed prolongation table deep enough for `f`.
pub(crate) fn apply_with(table: &[Vec<JetExpression>], f: &JetExpression) -> JetExpression {
    let n = f.nvars();
    let mut acc = JetExpression::zero(n);
    for (i, row) in table.iter().enumerate() {
        let Some(top) = f.max_order_of(i) else { continue };
        for s in 0..=top {
            let p = f.partial(i, s);
            if !p.is_zero() && !row[s as usize].is_zero() {
                acc = &acc + &(&row[s as usize] * &p);
            }
        }
    }
    acc
}

/// Commutator of evolutionary fields:
/// `[xi, eta]^p = d^s/dx^s(xi^i) d eta^p/du^i_(s) - d^s/dx^s(eta^i) d xi^p/du^i_(s)`.
pub fn ev_commutator(xi: &EvField, eta: &EvField) -> Result<EvField> {
    if xi.n() != eta.n() {
        return Err(CoreError::Context { left: xi.n(), right: eta.n() });
    }
    let pxi = xi.prolongation(eta.max_order());
    let peta = eta.prolongation(xi.max_order());
    let comps = (0..xi.n())
        .map(|p| &apply_with(&pxi, &eta.comps[p]) - &apply_with(&peta, &xi.comps[p]))
        .collect();
    Ok(EvField { comps })
}
