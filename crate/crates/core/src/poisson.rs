//! Hydrodynamic-type Poisson operators `g^{ij} d/dx + Gamma^{ij}_k u^k_x`
//! and the Poisson bracket on 1-forms.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::algebra::{Matrix, RatFun};
use crate::error::{CoreError, Result};
use crate::fields::{ev_commutator, EvField};
use crate::forms::{contract_two, delta_form, lie_derivative, pairing, reduce_form, FunctionalDensity, OneForm};
use crate::jet::{JetExpression, JetMonomial, JetVar};
use crate::tensor::{Defect, Tensor3};

/// A contravariant metric with its Levi-Civita data.
///
/// `lc[(i,j,k)]` is `Gamma^i_{jk}` and `contra[(i,j,k)]` is
/// `Gamma^{ij}_k = -g^{il} Gamma^j_{lk}`.
#[derive(Clone, Debug)]
pub struct MetricData {
    n: usize,
    g: Matrix,
    g_cov: Matrix,
    lc: Tensor3,
    contra: Tensor3,
    constant: bool,
    flat: Option<bool>,
}

impl MetricData {
    /// Constant metric `eta^{ij}` with vanishing Christoffel symbols.
    pub fn constant(eta: Matrix) -> Result<Self> {
        if !eta.is_constant() {
            return Err(CoreError::Input(String::from("metric entries are not constant")));
        }
        let n = check_square_symmetric(&eta)?;
        let g_cov = eta.inverse()?;
        Ok(MetricData {
            n,
            g: eta,
            g_cov,
            lc: Tensor3::zeros(n),
            contra: Tensor3::zeros(n),
            constant: true,
            flat: Some(true),
        })
    }

    /// Contravariant metric with its Levi-Civita connection computed from `g_{ij}`.
    pub fn from_contravariant(g: Matrix) -> Result<Self> {
        let n = check_square_symmetric(&g)?;
        let g_cov = g.inverse()?;
        let lc = levi_civita(&g, &g_cov);
        Ok(Self::assemble(n, g, g_cov, lc))
    }

    /// Covariant metric `g_{ij}`, inverted and completed with its Levi-Civita connection.
    pub fn from_covariant(g_cov: Matrix) -> Result<Self> {
        let n = check_square_symmetric(&g_cov)?;
        let g = g_cov.inverse()?;
        let lc = levi_civita(&g, &g_cov);
        Ok(Self::assemble(n, g, g_cov, lc))
    }

    /// Contravariant metric with a supplied symmetric connection, which must
    /// be metric-compatible: `d_k g^{ij} = Gamma^{ij}_k + Gamma^{ji}_k`.
    pub fn with_connection(g: Matrix, lc: Tensor3) -> Result<Self> {
        let n = check_square_symmetric(&g)?;
        if lc.n() != n {
            return Err(CoreError::Dimension(format!("connection of size {} for a metric of size {}", lc.n(), n)));
        }
        if !lc.is_symmetric_lower() {
            return Err(CoreError::Input(String::from("connection is not symmetric in its lower indices")));
        }
        let g_cov = g.inverse()?;
        let m = Self::assemble(n, g, g_cov, lc);
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    let lhs = m.g[(i, j)].derivative(k);
                    let rhs = &m.contra[(i, j, k)] + &m.contra[(j, i, k)];
                    if lhs != rhs {
                        return Err(CoreError::Input(format!(
                            "connection is not compatible with the metric at (i,j,k) = ({},{},{})",
                            i + 1,
                            j + 1,
                            k + 1
                        )));
                    }
                }
            }
        }
        Ok(m)
    }

    fn assemble(n: usize, g: Matrix, g_cov: Matrix, lc: Tensor3) -> Self {
        let contra = Tensor3::from_fn(n, |i, j, k| {
            let mut acc = RatFun::zero(n);
            for l in 0..n {
                if !g[(i, l)].is_zero() && !lc[(j, l, k)].is_zero() {
                    acc = &acc - &(&g[(i, l)] * &lc[(j, l, k)]);
                }
            }
            acc
        });
        let constant = g.is_constant() && lc.is_zero();
        MetricData { n, g, g_cov, lc, contra, constant, flat: if constant { Some(true) } else { None } }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `g^{ij}`.
    pub fn contravariant(&self) -> &Matrix {
        &self.g
    }

    /// `g_{ij}`.
    pub fn covariant(&self) -> &Matrix {
        &self.g_cov
    }

    /// `Gamma^i_{jk}`.
    pub fn levi_civita(&self) -> &Tensor3 {
        &self.lc
    }

    /// `Gamma^{ij}_k`.
    pub fn gamma_contra(&self) -> &Tensor3 {
        &self.contra
    }

    /// True for a constant metric with vanishing Christoffel symbols.
    pub fn is_constant(&self) -> bool {
        self.constant
    }

    /// Cached flatness verdict, if known.
    pub fn flat_flag(&self) -> Option<bool> {
        self.flat
    }

    /// Runs `check_flat` once and caches the verdict.
    pub fn with_flatness_checked(mut self) -> Self {
        if self.flat.is_none() {
            self.flat = Some(check_flat(&self).is_zero());
        }
        self
    }

    fn require_flat(&self) -> Result<()> {
        let flat = match self.flat {
            Some(f) => f,
            None => check_flat(self).is_zero(),
        };
        if flat {
            Ok(())
        } else {
            Err(CoreError::Mode(String::from("metric is not flat")))
        }
    }

    fn require_constant(&self, what: &str) -> Result<()> {
        if self.constant {
            Ok(())
        } else {
            Err(CoreError::Mode(format!("{} requires a constant metric (flat coordinates)", what)))
        }
    }
}

fn check_square_symmetric(m: &Matrix) -> Result<usize> {
    if !m.is_square() {
        return Err(CoreError::Dimension(format!("{}x{} metric is not square", m.rows(), m.cols())));
    }
    if !m.is_symmetric() {
        return Err(CoreError::Input(String::from("metric is not symmetric")));
    }
    Ok(m.rows())
}

/// `Gamma^i_{jk} = 1/2 g^{il} (d_j g_{lk} + d_k g_{lj} - d_l g_{jk})`.
fn levi_civita(g: &Matrix, g_cov: &Matrix) -> Tensor3 {
    let n = g.rows();
    // dg[(l, k, j)] = d_j g_{lk}
    let dg = Tensor3::from_fn(n, |l, k, j| g_cov[(l, k)].derivative(j));
    let half = crate::algebra::rational(1, 2);
    let first = Tensor3::from_fn(n, |l, j, k| {
        if k < j {
            return RatFun::zero(n);
        }
        (&(&dg[(l, k, j)] + &dg[(l, j, k)]) - &dg[(j, k, l)]).scale(&half)
    });
    Tensor3::from_fn(n, |i, j, k| {
        let (j, k) = if k < j { (k, j) } else { (j, k) };
        let mut acc = RatFun::zero(n);
        for l in 0..n {
            if !g[(i, l)].is_zero() && !first[(l, j, k)].is_zero() {
                acc = &acc + &(&g[(i, l)] * &first[(l, j, k)]);
            }
        }
        acc
    })
}

/// Contravariant zero-curvature tensor
/// `g^{is}(d_s Gamma^{jk}_l - d_l Gamma^{jk}_s) - Gamma^{ij}_s Gamma^{sk}_l + Gamma^{ik}_s Gamma^{sj}_l`,
/// indexed `[i, j, k, l]`; empty iff the metric is flat.
pub fn check_flat(m: &MetricData) -> Defect {
    let n = m.n;
    let mut defect = Defect::new();
    if m.constant {
        return defect;
    }
    // dgam[((j*n + k)*n + l)*n + s] = d_s Gamma^{jk}_l
    let mut dgam = Vec::with_capacity(n * n * n * n);
    for j in 0..n {
        for k in 0..n {
            for l in 0..n {
                for s in 0..n {
                    dgam.push(m.contra[(j, k, l)].derivative(s));
                }
            }
        }
    }
    let d = |j: usize, k: usize, l: usize, s: usize| &dgam[((j * n + k) * n + l) * n + s];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut acc = RatFun::zero(n);
                    for s in 0..n {
                        if !m.g[(i, s)].is_zero() {
                            let diff = d(j, k, l, s) - d(j, k, s, l);
                            if !diff.is_zero() {
                                acc = &acc + &(&m.g[(i, s)] * &diff);
                            }
                        }
                        if !m.contra[(i, j, s)].is_zero() && !m.contra[(s, k, l)].is_zero() {
                            acc = &acc - &(&m.contra[(i, j, s)] * &m.contra[(s, k, l)]);
                        }
                        if !m.contra[(i, k, s)].is_zero() && !m.contra[(s, j, l)].is_zero() {
                            acc = &acc + &(&m.contra[(i, k, s)] * &m.contra[(s, j, l)]);
                        }
                    }
                    defect.push(&[i, j, k, l], acc);
                }
            }
        }
    }
    defect
}

/// The field `(P alpha)^i = g^{ij} d/dx alpha_j + Gamma^{ij}_k u^k_x alpha_j`.
pub fn apply_p(m: &MetricData, alpha: &OneForm) -> Result<EvField> {
    check_n(m, alpha.n())?;
    let n = m.n;
    let a = alpha.components();
    let da: Vec<JetExpression> = a.iter().map(|x| x.total_derivative(1)).collect();
    let ux: Vec<JetExpression> = (0..n).map(|k| JetExpression::var(n, k, 1)).collect();
    let mut comps = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = JetExpression::zero(n);
        for j in 0..n {
            if a[j].is_zero() {
                continue;
            }
            if !m.g[(i, j)].is_zero() {
                acc = &acc + &da[j].mul_ratfun(&m.g[(i, j)]);
            }
            let mut coeff = JetExpression::zero(n);
            for k in 0..n {
                let c = &m.contra[(i, j, k)];
                if !c.is_zero() {
                    coeff = &coeff + &ux[k].mul_ratfun(c);
                }
            }
            if !coeff.is_zero() {
                acc = &acc + &(&coeff * &a[j]);
            }
        }
        comps.push(acc);
    }
    EvField::new(comps)
}

/// Lie derivative of `alpha` along `P beta` for a constant metric.
pub fn lie_derivative_p(m: &MetricData, beta: &OneForm, alpha: &OneForm) -> Result<OneForm> {
    m.require_constant("the Lie derivative along P")?;
    lie_derivative(&apply_p(m, beta)?, alpha)
}

/// Presentation used to evaluate the bracket on 1-forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BracketMode {
    /// `Lie_{P beta} alpha - Lie_{P alpha} beta + delta <beta, P alpha>`, reduced.
    Definition,
    /// Closed form in flat coordinates.
    Flat,
    /// Closed form in arbitrary coordinates for a flat metric.
    General,
    /// Covariant closed form for coefficients depending on `u` only.
    Hydro,
}

impl BracketMode {
    pub const ALL: [BracketMode; 4] = [BracketMode::Definition, BracketMode::Flat, BracketMode::General, BracketMode::Hydro];

    pub fn name(self) -> &'static str {
        match self {
            BracketMode::Definition => "definition",
            BracketMode::Flat => "flat",
            BracketMode::General => "general",
            BracketMode::Hydro => "hydro",
        }
    }
}

impl fmt::Display for BracketMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BracketMode {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self> {
        BracketMode::ALL
            .iter()
            .copied()
            .find(|m| m.name() == s)
            .ok_or_else(|| CoreError::Mode(format!("unknown bracket mode '{}'", s)))
    }
}

/// The Poisson bracket `{alpha, beta}` of two 1-forms, as a reduced 1-form.
pub fn bracket(m: &MetricData, alpha: &OneForm, beta: &OneForm, mode: BracketMode) -> Result<OneForm> {
    check_n(m, alpha.n())?;
    check_n(m, beta.n())?;
    match mode {
        BracketMode::Definition => {
            m.require_constant("mode 'definition'")?;
            bracket_by_definition(m, alpha, beta)
        }
        BracketMode::Flat => {
            m.require_constant("mode 'flat'")?;
            Ok(bracket_flat(m, alpha, beta))
        }
        BracketMode::General => {
            m.require_flat()?;
            bracket_general(m, alpha, beta)
        }
        BracketMode::Hydro => {
            let a = alpha.u_only_components()?;
            let b = beta.u_only_components()?;
            m.require_flat()?;
            bracket_hydro(m, &a, &b)
        }
    }
}

/// The defining formula, valid for any metric.
pub(crate) fn bracket_by_definition(m: &MetricData, alpha: &OneForm, beta: &OneForm) -> Result<OneForm> {
    let p_alpha = apply_p(m, alpha)?;
    let p_beta = apply_p(m, beta)?;
    let l1 = lie_derivative(&p_beta, alpha)?;
    let l2 = lie_derivative(&p_alpha, beta)?;
    let d = pairing(beta, &p_alpha)?.delta();
    Ok(reduce_form(&l1.sub(&l2).add(&d)))
}

/// `eta^{kl} [ (d^{s+1} beta_l) d alpha_j/du^k_(s) - (d^{s+1} alpha_l) d beta_j/du^k_(s) ]`.
fn bracket_flat(m: &MetricData, alpha: &OneForm, beta: &OneForm) -> OneForm {
    let n = m.n;
    let a = alpha.components();
    let b = beta.components();
    // X^k = eta^{kl} d/dx beta_l, Y^k = eta^{kl} d/dx alpha_l
    let raise = |f: &[JetExpression]| -> Vec<JetExpression> {
        let df: Vec<JetExpression> = f.iter().map(|x| x.total_derivative(1)).collect();
        (0..n)
            .map(|k| {
                let mut acc = JetExpression::zero(n);
                for (l, d) in df.iter().enumerate() {
                    if let Some(c) = m.g[(k, l)].constant_value() {
                        acc = &acc + &d.scale(&c);
                    }
                }
                acc
            })
            .collect()
    };
    let x = EvField::new(raise(&b)).expect("dimensions agree");
    let y = EvField::new(raise(&a)).expect("dimensions agree");
    let comps = (0..n).map(|j| &x.apply(&a[j]) - &y.apply(&b[j])).collect();
    OneForm::from_components(comps).expect("dimensions agree")
}

/// Closed form in arbitrary coordinates:
/// `P beta(alpha_i) - P alpha(beta_i) + (alpha_k beta_l,x - beta_k alpha_l,x) Gamma^{lk}_i
///  - alpha_k beta_l [Gamma^k_{is} Gamma^{sl}_m - Gamma^l_{is} Gamma^{sk}_m] u^m_x`.
fn bracket_general(m: &MetricData, alpha: &OneForm, beta: &OneForm) -> Result<OneForm> {
    let n = m.n;
    let a = alpha.components();
    let b = beta.components();
    let p_alpha = apply_p(m, alpha)?;
    let p_beta = apply_p(m, beta)?;
    let da: Vec<JetExpression> = a.iter().map(|x| x.total_derivative(1)).collect();
    let db: Vec<JetExpression> = b.iter().map(|x| x.total_derivative(1)).collect();
    let mut comps = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = &p_beta.apply(&a[i]) - &p_alpha.apply(&b[i]);
        for k in 0..n {
            for l in 0..n {
                let g = &m.contra[(l, k, i)];
                if !g.is_zero() {
                    let t = &(&a[k] * &db[l]) - &(&b[k] * &da[l]);
                    acc = &acc + &t.mul_ratfun(g);
                }
                if a[k].is_zero() || b[l].is_zero() {
                    continue;
                }
                // sum_{s,m} [Gamma^k_{is} Gamma^{sl}_m - Gamma^l_{is} Gamma^{sk}_m] u^m_x
                let mut terms = Vec::new();
                for mm in 0..n {
                    let mut c = RatFun::zero(n);
                    for s in 0..n {
                        if !m.lc[(k, i, s)].is_zero() && !m.contra[(s, l, mm)].is_zero() {
                            c = &c + &(&m.lc[(k, i, s)] * &m.contra[(s, l, mm)]);
                        }
                        if !m.lc[(l, i, s)].is_zero() && !m.contra[(s, k, mm)].is_zero() {
                            c = &c - &(&m.lc[(l, i, s)] * &m.contra[(s, k, mm)]);
                        }
                    }
                    terms.push((JetMonomial::var(JetVar::new(mm, 1)), c));
                }
                let w = JetExpression::from_terms(n, terms);
                if !w.is_zero() {
                    acc = &acc - &(&(&a[k] * &b[l]) * &w);
                }
            }
        }
        comps.push(acc);
    }
    OneForm::from_components(comps)
}

/// Covariant derivative table `[m][l] = nabla_m f_l = d_m f_l - Gamma^s_{ml} f_s`.
pub(crate) fn covariant_gradient(lc: &Tensor3, f: &[RatFun]) -> Vec<Vec<RatFun>> {
    let n = f.len();
    (0..n)
        .map(|mm| {
            (0..n)
                .map(|l| {
                    let mut acc = f[l].derivative(mm);
                    for (s, fs) in f.iter().enumerate() {
                        let c = &lc[(s, mm, l)];
                        if !c.is_zero() && !fs.is_zero() {
                            acc = &acc - &(c * fs);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// `(nabla_m beta_l g^{kl} nabla_k alpha_i - nabla_m alpha_l g^{kl} nabla_k beta_i) u^m_x`.
fn bracket_hydro(m: &MetricData, a: &[RatFun], b: &[RatFun]) -> Result<OneForm> {
    let n = m.n;
    let na = covariant_gradient(&m.lc, a);
    let nb = covariant_gradient(&m.lc, b);
    // raised[m][k] = g^{kl} nabla_m f_l
    let raise = |nf: &Vec<Vec<RatFun>>| -> Vec<Vec<RatFun>> {
        (0..n)
            .map(|mm| {
                (0..n)
                    .map(|k| {
                        let mut acc = RatFun::zero(n);
                        for l in 0..n {
                            if !m.g[(k, l)].is_zero() && !nf[mm][l].is_zero() {
                                acc = &acc + &(&m.g[(k, l)] * &nf[mm][l]);
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect()
    };
    let rb = raise(&nb);
    let ra = raise(&na);
    let mut comps = Vec::with_capacity(n);
    for i in 0..n {
        let mut terms = Vec::new();
        for mm in 0..n {
            let mut c = RatFun::zero(n);
            for k in 0..n {
                if !rb[mm][k].is_zero() && !na[k][i].is_zero() {
                    c = &c + &(&rb[mm][k] * &na[k][i]);
                }
                if !ra[mm][k].is_zero() && !nb[k][i].is_zero() {
                    c = &c - &(&ra[mm][k] * &nb[k][i]);
                }
            }
            terms.push((JetMonomial::var(JetVar::new(mm, 1)), c));
        }
        comps.push(JetExpression::from_terms(n, terms));
    }
    OneForm::from_components(comps)
}

/// Bracket of local functionals: the density `(delta f/delta u^i) (P delta h)^i`.
pub fn functional_bracket(m: &MetricData, f: &FunctionalDensity, h: &FunctionalDensity) -> Result<FunctionalDensity> {
    let p = apply_p(m, &h.delta())?;
    pairing(&f.delta(), &p)
}

/// `P{alpha, beta} + [P alpha, P beta]`, zero when the anti-homomorphism holds.
pub fn antihom_defect(m: &MetricData, alpha: &OneForm, beta: &OneForm) -> Result<EvField> {
    m.require_constant("the anti-homomorphism check")?;
    let lhs = apply_p(m, &bracket(m, alpha, beta, BracketMode::Flat)?)?;
    let rhs = ev_commutator(&apply_p(m, alpha)?, &apply_p(m, beta)?)?;
    Ok(lhs.add(&rhs))
}

/// Cyclic sum `{alpha,{beta,gamma}} + {beta,{gamma,alpha}} + {gamma,{alpha,beta}}`.
pub fn jacobi_defect(m: &MetricData, alpha: &OneForm, beta: &OneForm, gamma: &OneForm) -> Result<OneForm> {
    m.require_constant("the Jacobi check")?;
    let fl = BracketMode::Flat;
    let t1 = bracket(m, alpha, &bracket(m, beta, gamma, fl)?, fl)?;
    let t2 = bracket(m, beta, &bracket(m, gamma, alpha, fl)?, fl)?;
    let t3 = bracket(m, gamma, &bracket(m, alpha, beta, fl)?, fl)?;
    Ok(reduce_form(&t1.add(&t2).add(&t3)))
}

/// `Lie_{P beta} alpha - i_{P beta} delta alpha - delta <alpha, P beta>`, reduced.
pub fn cartan_defect(m: &MetricData, alpha: &OneForm, beta: &OneForm) -> Result<OneForm> {
    let lie = lie_derivative_p(m, beta, alpha)?;
    let xi = apply_p(m, beta)?;
    let contracted = contract_two(&delta_form(&reduce_form(alpha)), &xi)?;
    let exact = pairing(alpha, &xi)?.delta();
    Ok(reduce_form(&lie.sub(&contracted).sub(&exact)))
}

/// The differential of the coordinate functional `int u^i dx`.
pub fn coordinate_covector(n: usize, i: usize) -> OneForm {
    let comps = (0..n).map(|j| if j == i { JetExpression::one(n) } else { JetExpression::zero(n) }).collect();
    OneForm::from_components(comps).expect("dimensions agree")
}

fn check_n(m: &MetricData, n: usize) -> Result<()> {
    if m.n != n {
        return Err(CoreError::Context { left: m.n, right: n });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rational, SparsePoly};
    use crate::jet::variational_derivative;
    use crate::random::{one_form, seeded, Shape};
    use alloc::vec;

    fn u(n: usize, i: usize, s: u32) -> JetExpression {
        JetExpression::var(n, i, s)
    }

    fn eta(rows: Vec<Vec<i64>>) -> MetricData {
        let n = rows.len();
        let m = Matrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(|c| RatFun::from_int(n, c)).collect()).collect())
            .unwrap();
        MetricData::constant(m).unwrap()
    }

    /// Polar coordinates `(r, theta)`: `g^{11} = 1`, `g^{22} = 1/r^2`.
    fn polar() -> MetricData {
        let r = SparsePoly::var(2, 0);
        let g22 = RatFun::new(SparsePoly::one(2), &r * &r).unwrap();
        let g = Matrix::from_rows(vec![vec![RatFun::one(2), RatFun::zero(2)], vec![RatFun::zero(2), g22]]).unwrap();
        MetricData::from_contravariant(g).unwrap()
    }

    #[test]
    fn flatness() {
        assert!(check_flat(&eta(vec![vec![1, 0], vec![0, -1]])).is_zero());
        assert!(check_flat(&polar()).is_zero());
        let one_d = MetricData::from_contravariant(Matrix::from_rows(vec![vec![RatFun::var(1, 0)]]).unwrap()).unwrap();
        assert!(check_flat(&one_d).is_zero());
        // dr^2 + dtheta^2 / r is curved
        let g = Matrix::from_rows(vec![vec![RatFun::one(2), RatFun::zero(2)], vec![RatFun::zero(2), RatFun::var(2, 0)]]).unwrap();
        assert!(!check_flat(&MetricData::from_contravariant(g).unwrap()).is_zero());
    }

    #[test]
    fn polar_christoffels() {
        let m = polar();
        let r = RatFun::var(2, 0);
        // Gamma^1_{22} = -r, Gamma^2_{12} = 1/r
        assert_eq!(m.levi_civita()[(0, 1, 1)], -&r);
        assert_eq!(m.levi_civita()[(1, 0, 1)], r.recip().unwrap());
        assert!(MetricData::with_connection(m.contravariant().clone(), m.levi_civita().clone()).is_ok());
        assert!(MetricData::with_connection(m.contravariant().clone(), Tensor3::zeros(2)).is_err());
    }

    #[test]
    fn casimirs_of_constant_metric() {
        let m = eta(vec![vec![0, 1], vec![1, 0]]);
        for i in 0..2 {
            assert!(apply_p(&m, &coordinate_covector(2, i)).unwrap().is_zero());
        }
    }

    #[test]
    fn flat_bracket_example() {
        let m = eta(vec![vec![1]]);
        let a = OneForm::from_components(vec![u(1, 0, 0).pow(2)]).unwrap();
        let b = OneForm::from_components(vec![u(1, 0, 1)]).unwrap();
        let r = bracket(&m, &a, &b, BracketMode::Flat).unwrap();
        assert_eq!(r.components()[0], u(1, 0, 1).pow(2).scale(&rational(-2, 1)));
        for mode in [BracketMode::Definition, BracketMode::General] {
            assert!(bracket(&m, &a, &b, mode).unwrap().class_eq(&r), "mode {}", mode);
        }
        assert!(matches!(bracket(&m, &a, &b, BracketMode::Hydro), Err(CoreError::Unsupported(_))));
    }

    #[test]
    fn self_bracket_vanishes() {
        let m = eta(vec![vec![0, 1], vec![1, 0]]);
        let a = OneForm::from_components(vec![&u(2, 0, 0) * &u(2, 1, 1), u(2, 1, 0).pow(3)]).unwrap();
        for mode in [BracketMode::Definition, BracketMode::Flat, BracketMode::General] {
            assert!(bracket(&m, &a, &a, mode).unwrap().is_zero());
        }
    }

    #[test]
    fn mode_restrictions() {
        let m = polar();
        let a = coordinate_covector(2, 0);
        assert!(matches!(bracket(&m, &a, &a, BracketMode::Flat), Err(CoreError::Mode(_))));
        assert!(matches!(bracket(&m, &a, &a, BracketMode::Definition), Err(CoreError::Mode(_))));
        assert_eq!("hydro".parse::<BracketMode>().unwrap(), BracketMode::Hydro);
        assert!("other".parse::<BracketMode>().is_err());
    }

    #[test]
    fn general_mode_matches_definition_in_curved_coordinates() {
        let m = polar();
        let mut rng = seeded(7);
        for _ in 0..4 {
            let a = one_form(&mut rng, Shape::new(2, 1, 2));
            let b = one_form(&mut rng, Shape::new(2, 1, 2));
            let def = bracket_by_definition(&m, &a, &b).unwrap();
            let gen = bracket(&m, &a, &b, BracketMode::General).unwrap();
            assert!(def.class_eq(&gen));
        }
    }

    #[test]
    fn hydro_mode_matches_general_in_curved_coordinates() {
        let m = polar();
        let mut rng = seeded(11);
        for _ in 0..4 {
            let a = one_form(&mut rng, Shape::new(2, 0, 2));
            let b = one_form(&mut rng, Shape::new(2, 0, 2));
            let h = bracket(&m, &a, &b, BracketMode::Hydro).unwrap();
            let g = bracket(&m, &a, &b, BracketMode::General).unwrap();
            assert!(h.class_eq(&g));
        }
    }

    #[test]
    fn functional_bracket_example() {
        let m = eta(vec![vec![1]]);
        let f = FunctionalDensity::new(u(1, 0, 0).pow(3).scale(&rational(1, 6)));
        let h = FunctionalDensity::new(u(1, 0, 1).pow(2).scale(&rational(1, 2)));
        let b = functional_bracket(&m, &f, &h).unwrap();
        assert_eq!(b.density(), &(&u(1, 0, 0).pow(2) * &u(1, 0, 3)).scale(&rational(-1, 2)));
        assert!(!b.is_zero_class());
        assert!(functional_bracket(&m, &f, &f).unwrap().is_zero_class());
    }

    #[test]
    fn exact_forms_bracket_to_exact_form() {
        let m = eta(vec![vec![0, 1], vec![1, 0]]);
        let f = FunctionalDensity::new((&u(2, 0, 0).pow(2) * &u(2, 1, 0)).scale(&rational(1, 2)));
        let g = FunctionalDensity::new(u(2, 1, 0).pow(2));
        let lhs = bracket(&m, &f.delta(), &g.delta(), BracketMode::Flat).unwrap();
        let rhs = functional_bracket(&m, &f, &g).unwrap().delta();
        assert!(lhs.class_eq(&rhs));
    }

    #[test]
    fn lie_derivative_of_constant_form() {
        let m = eta(vec![vec![1, 0], vec![0, 1]]);
        let a = OneForm::from_components(vec![JetExpression::from_int(2, 3), JetExpression::from_int(2, -1)]).unwrap();
        let b = OneForm::from_components(vec![&u(2, 0, 0) * &u(2, 1, 0), u(2, 0, 0).pow(2)]).unwrap();
        assert!(lie_derivative_p(&m, &b, &a).unwrap().is_zero());
        assert!(lie_derivative_p(&m, &OneForm::zero(2), &b).unwrap().is_zero());
    }

    #[test]
    fn cartan_antihom_jacobi_instances() {
        let m = eta(vec![vec![0, 1], vec![1, 0]]);
        let mut rng = seeded(3);
        let s = Shape::new(2, 1, 2);
        let a = one_form(&mut rng, s);
        let b = one_form(&mut rng, s);
        let c = one_form(&mut rng, s);
        assert!(cartan_defect(&m, &a, &b).unwrap().is_zero());
        assert!(antihom_defect(&m, &a, &b).unwrap().is_zero());
        assert!(antihom_defect(&m, &a, &a).unwrap().is_zero());
        assert!(jacobi_defect(&m, &a, &b, &c).unwrap().is_zero());
        assert!(jacobi_defect(&m, &a, &b, &OneForm::zero(2)).unwrap().is_zero());
    }

    #[test]
    fn variational_vectors_are_exact_inputs() {
        let m = eta(vec![vec![1, 0], vec![0, 2]]);
        let f = &u(2, 0, 1).pow(2) * &u(2, 1, 0);
        let a = OneForm::from_components(variational_derivative(&f)).unwrap();
        let b = FunctionalDensity::new(u(2, 1, 0).pow(3)).delta();
        assert!(antihom_defect(&m, &a, &b).unwrap().is_zero());
    }
}
