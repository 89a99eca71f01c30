//! F-manifolds with compatible flat connection: structure checks, recursion
//! for principal-hierarchy members, primary flows, and the epsilon-system.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::algebra::{Matrix, RatFun, Rational, SparsePoly};
use crate::error::{CoreError, Result};
use crate::fields::EvField;
use crate::forms::OneForm;
use crate::jet::{JetExpression, JetMonomial, JetVar};
use crate::poisson::{bracket, covariant_gradient, BracketMode, MetricData};
use crate::tensor::{Defect, Tensor3};

/// Product structure constants `c^i_{jk}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductStructure {
    pub c: Tensor3,
}

/// Connection `Gamma^i_{jk}`, symmetric in the lower indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionData {
    gamma: Tensor3,
}

impl ConnectionData {
    pub fn new(gamma: Tensor3) -> Result<Self> {
        if !gamma.is_symmetric_lower() {
            return Err(CoreError::Input(String::from("connection is not symmetric in its lower indices")));
        }
        Ok(ConnectionData { gamma })
    }

    pub fn gamma(&self) -> &Tensor3 {
        &self.gamma
    }
}

/// Flat coordinates `t^a(u)` with the constant metric `eta` they carry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatMap {
    pub t: Vec<RatFun>,
    pub eta: Matrix,
}

/// An F-manifold with compatible flat connection, optionally with a metric
/// and a map to flat coordinates.
#[derive(Clone, Debug)]
pub struct StructureSpec {
    pub n: usize,
    pub coords: Vec<String>,
    pub connection: ConnectionData,
    pub product: ProductStructure,
    pub metric: Option<MetricData>,
    pub map: Option<FlatMap>,
}

impl StructureSpec {
    pub fn new(
        coords: Vec<String>,
        connection: ConnectionData,
        product: ProductStructure,
        metric: Option<MetricData>,
        map: Option<FlatMap>,
    ) -> Result<Self> {
        let n = coords.len();
        let dims = [connection.gamma.n(), product.c.n()];
        if dims.iter().any(|&d| d != n) {
            return Err(CoreError::Input(format!("tensor dimensions {:?} do not match {} coordinates", dims, n)));
        }
        if let Some(m) = &metric {
            if m.n() != n {
                return Err(CoreError::Input(format!("metric of size {} for {} coordinates", m.n(), n)));
            }
        }
        if let Some(f) = &map {
            if f.t.len() != n || f.eta.rows() != n || f.eta.cols() != n {
                return Err(CoreError::Input(format!("flat-coordinate map does not have {} components", n)));
            }
            jacobian(&f.t).inverse()?;
        }
        Ok(StructureSpec { n, coords, connection, product, metric, map })
    }

    pub fn metric(&self) -> Result<&MetricData> {
        self.metric.as_ref().ok_or_else(|| CoreError::Input(String::from("structure has no metric")))
    }
}

/// A member `omega_(p, alpha)` of the hierarchy: a 1-form with u-only coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HierarchyForm {
    pub p: u32,
    pub alpha: u32,
    comps: Vec<RatFun>,
}

impl HierarchyForm {
    pub fn new(p: u32, alpha: u32, comps: Vec<RatFun>) -> Self {
        HierarchyForm { p, alpha, comps }
    }

    pub fn from_form(p: u32, alpha: u32, form: &OneForm) -> Result<Self> {
        Ok(HierarchyForm { p, alpha, comps: form.u_only_components()? })
    }

    pub fn components(&self) -> &[RatFun] {
        &self.comps
    }

    pub fn form(&self) -> OneForm {
        OneForm::from_ratfuns(self.comps.clone()).expect("dimensions agree")
    }
}

/// Verdicts of the F-manifold axioms; each defect is empty when the axiom holds.
#[derive(Clone, Debug, Default)]
pub struct FManifoldReport {
    /// `c^i_{jk} - c^i_{kj}`, indexed `[i, j, k]`.
    pub commutativity: Defect,
    /// `c^i_{jm} c^m_{kl} - c^i_{km} c^m_{jl}`, indexed `[i, j, k, l]`.
    pub associativity: Defect,
    /// Riemann tensor `R^i_{jkl}` of the connection.
    pub flatness: Defect,
    /// `nabla_l c^i_{jk} - nabla_j c^i_{lk}`, indexed `[i, j, k, l]`.
    pub compatibility: Defect,
}

impl FManifoldReport {
    pub fn passed(&self) -> bool {
        self.commutativity.is_zero() && self.associativity.is_zero() && self.flatness.is_zero() && self.compatibility.is_zero()
    }
}

fn sum_products<I: IntoIterator<Item = (RatFun, bool)>>(n: usize, it: I) -> RatFun {
    let mut acc = RatFun::zero(n);
    for (t, plus) in it {
        if !t.is_zero() {
            acc = if plus { &acc + &t } else { &acc - &t };
        }
    }
    acc
}

fn prod(a: &RatFun, b: &RatFun) -> RatFun {
    if a.is_zero() || b.is_zero() {
        RatFun::zero(a.nvars())
    } else {
        a * b
    }
}

/// Riemann tensor `R^i_{jkl} = d_k Gamma^i_{lj} - d_l Gamma^i_{kj} + Gamma^i_{km} Gamma^m_{lj} - Gamma^i_{lm} Gamma^m_{kj}`.
pub fn riemann_defect(conn: &ConnectionData) -> Defect {
    let g = &conn.gamma;
    let n = g.n();
    let mut d = Defect::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in (k + 1)..n {
                    let mut acc = &g[(i, l, j)].derivative(k) - &g[(i, k, j)].derivative(l);
                    for m in 0..n {
                        acc = &acc + &prod(&g[(i, k, m)], &g[(m, l, j)]);
                        acc = &acc - &prod(&g[(i, l, m)], &g[(m, k, j)]);
                    }
                    d.push(&[i, j, k, l], acc);
                }
            }
        }
    }
    d
}

/// `nabla_l c^i_{jk}` as a table indexed `[l][i][j][k]`.
fn covariant_derivative_c(conn: &ConnectionData, c: &Tensor3) -> Vec<Tensor3> {
    let g = &conn.gamma;
    let n = c.n();
    (0..n)
        .map(|l| {
            Tensor3::from_fn(n, |i, j, k| {
                let mut acc = c[(i, j, k)].derivative(l);
                for m in 0..n {
                    acc = &acc + &prod(&g[(i, l, m)], &c[(m, j, k)]);
                    acc = &acc - &prod(&g[(m, l, j)], &c[(i, m, k)]);
                    acc = &acc - &prod(&g[(m, l, k)], &c[(i, j, m)]);
                }
                acc
            })
        })
        .collect()
}

/// Checks commutativity, associativity, flatness, and compatibility `nabla_l c^i_{jk} = nabla_j c^i_{lk}`.
pub fn check_fmanifold(spec: &StructureSpec) -> FManifoldReport {
    let n = spec.n;
    let c = &spec.product.c;
    let mut report = FManifoldReport::default();
    for i in 0..n {
        for j in 0..n {
            for k in (j + 1)..n {
                report.commutativity.push(&[i, j, k], &c[(i, j, k)] - &c[(i, k, j)]);
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let v = sum_products(
                        n,
                        (0..n).flat_map(|m| {
                            [(prod(&c[(i, j, m)], &c[(m, k, l)]), true), (prod(&c[(i, k, m)], &c[(m, j, l)]), false)]
                        }),
                    );
                    report.associativity.push(&[i, j, k, l], v);
                }
            }
        }
    }
    report.flatness = riemann_defect(&spec.connection);
    let nc = covariant_derivative_c(&spec.connection, c);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in (j + 1)..n {
                    report.compatibility.push(&[i, j, k, l], &nc[l][(i, j, k)] - &nc[j][(i, l, k)]);
                }
            }
        }
    }
    report
}

/// `c^i_{jk} g^{kl} - c^l_{jk} g^{ki}`, indexed `[i, j, l]`.
pub fn check_invariance(g: &MetricData, c: &ProductStructure) -> Defect {
    let n = g.n();
    let gm = g.contravariant();
    let c = &c.c;
    let mut d = Defect::new();
    for i in 0..n {
        for j in 0..n {
            for l in (i + 1)..n {
                let v = sum_products(
                    n,
                    (0..n).flat_map(|k| [(prod(&c[(i, j, k)], &gm[(k, l)]), true), (prod(&c[(l, j, k)], &gm[(k, i)]), false)]),
                );
                d.push(&[i, j, l], v);
            }
        }
    }
    d
}

/// Form recursion `nabla_k omega^next_h - g_{ih} c^i_{kl} g^{lm} omega^prev_m`, indexed `[k, h]`.
pub fn verify_form_recursion(spec: &StructureSpec, next: &HierarchyForm, prev: &HierarchyForm) -> Result<Defect> {
    let n = spec.n;
    check_len(n, next.components().len())?;
    check_len(n, prev.components().len())?;
    let m = spec.metric()?;
    let (g, gc, c) = (m.contravariant(), m.covariant(), &spec.product.c);
    let nabla = covariant_gradient(spec.connection.gamma(), next.components());
    // raised^l = g^{lm} omega^prev_m
    let raised: Vec<RatFun> =
        (0..n).map(|l| sum_products(n, (0..n).map(|mm| (prod(&g[(l, mm)], &prev.components()[mm]), true)))).collect();
    let mut d = Defect::new();
    for k in 0..n {
        // v^i = c^i_{kl} raised^l
        let v: Vec<RatFun> = (0..n).map(|i| sum_products(n, (0..n).map(|l| (prod(&c[(i, k, l)], &raised[l]), true)))).collect();
        for h in 0..n {
            let rhs = sum_products(n, (0..n).map(|i| (prod(&gc[(i, h)], &v[i]), true)));
            d.push(&[k, h], &nabla[k][h] - &rhs);
        }
    }
    Ok(d)
}

/// Field recursion `nabla_j X^i_next - c^i_{jk} X^k_prev`, indexed `[i, j]`.
pub fn verify_field_recursion(spec: &StructureSpec, next: &[RatFun], prev: &[RatFun]) -> Result<Defect> {
    let n = spec.n;
    check_len(n, next.len())?;
    check_len(n, prev.len())?;
    let nabla = vector_covariant_derivative(spec.connection.gamma(), next);
    let c = &spec.product.c;
    let mut d = Defect::new();
    for i in 0..n {
        for j in 0..n {
            let rhs = sum_products(n, (0..n).map(|k| (prod(&c[(i, j, k)], &prev[k]), true)));
            d.push(&[i, j], &nabla[j][i] - &rhs);
        }
    }
    Ok(d)
}

/// `[j][i] = nabla_j X^i = d_j X^i + Gamma^i_{jk} X^k`.
fn vector_covariant_derivative(g: &Tensor3, x: &[RatFun]) -> Vec<Vec<RatFun>> {
    let n = x.len();
    (0..n)
        .map(|j| {
            (0..n)
                .map(|i| {
                    let mut acc = x[i].derivative(j);
                    for (k, xk) in x.iter().enumerate() {
                        acc = &acc + &prod(&g[(i, j, k)], xk);
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// `c^i_{jm} nabla_k X^m - c^i_{km} nabla_j X^m`, indexed `[i, j, k]`.
pub fn check_av_symmetry(spec: &StructureSpec, x: &[RatFun]) -> Result<Defect> {
    let n = spec.n;
    check_len(n, x.len())?;
    let nabla = vector_covariant_derivative(spec.connection.gamma(), x);
    let c = &spec.product.c;
    let mut d = Defect::new();
    for i in 0..n {
        for j in 0..n {
            for k in (j + 1)..n {
                let v = sum_products(
                    n,
                    (0..n).flat_map(|m| [(prod(&c[(i, j, m)], &nabla[k][m]), true), (prod(&c[(i, k, m)], &nabla[j][m]), false)]),
                );
                d.push(&[i, j, k], v);
            }
        }
    }
    Ok(d)
}

/// The flow `u^i_t = c^i_{jk} X^k u^j_x`.
pub fn build_flow(c: &ProductStructure, x: &[RatFun]) -> Result<EvField> {
    let n = c.c.n();
    check_len(n, x.len())?;
    let comps = (0..n)
        .map(|i| {
            let terms = (0..n).map(|j| {
                let coeff = sum_products(n, (0..n).map(|k| (prod(&c.c[(i, j, k)], &x[k]), true)));
                (JetMonomial::var(JetVar::new(j, 1)), coeff)
            });
            JetExpression::from_terms(n, terms)
        })
        .collect();
    EvField::new(comps)
}

/// Jacobian `J[a][i] = d t^a / d u^i`.
pub fn jacobian(t: &[RatFun]) -> Matrix {
    let n = t.len();
    Matrix::from_fn(n, n, |a, i| t[a].derivative(i))
}

/// Pullback `g_{ij} = J^a_i eta_{ab} J^b_j` of a constant metric along `t(u)`,
/// with its inverse and Levi-Civita connection.
pub fn pullback_metric(t: &[RatFun], eta: &Matrix) -> Result<MetricData> {
    let n = t.len();
    if eta.rows() != n || eta.cols() != n || !eta.is_constant() {
        return Err(CoreError::Input(format!("target metric must be a constant {}x{} matrix", n, n)));
    }
    let j = jacobian(t);
    j.inverse()?;
    let g_cov = j.transpose().mul(eta)?.mul(&j)?;
    MetricData::from_covariant(g_cov)
}

/// Connection of the epsilon-system in canonical coordinates.
pub fn epsilon_connection(n: usize, eps: &Rational) -> Tensor3 {
    let mut g = Tensor3::zeros(n);
    for i in 0..n {
        let mut diag = RatFun::zero(n);
        for j in 0..n {
            if i == j {
                continue;
            }
            let diff = &SparsePoly::var(n, i) - &SparsePoly::var(n, j);
            let v = RatFun::new(SparsePoly::constant(n, eps.clone()), diff).expect("nonzero denominator");
            g[(i, j, i)] = v.clone();
            g[(i, i, j)] = v.clone();
            g[(i, j, j)] = -&v;
            diag = &diag - &v;
        }
        g[(i, i, i)] = diag;
    }
    g
}

/// Diagonal product `c^i_{jk} = delta^i_j delta^i_k`.
pub fn diagonal_product(n: usize) -> ProductStructure {
    ProductStructure { c: Tensor3::from_fn(n, |i, j, k| if i == j && j == k { RatFun::one(n) } else { RatFun::zero(n) }) }
}

/// Flat coordinates of the three-dimensional epsilon-system with `eps = 1`.
pub fn epsilon3_map() -> FlatMap {
    let n = 3;
    let u = |i| SparsePoly::var(n, i);
    let two = SparsePoly::from_int(n, 2);
    let t1 = RatFun::from_poly(&(&u(0) + &u(1)) + &u(2));
    let t2 = RatFun::new(SparsePoly::one(n), &(&two * &(&u(0) - &u(1))) * &(&u(2) - &u(0))).expect("nonzero");
    let t3 = RatFun::new(SparsePoly::one(n), &(&two * &(&u(0) - &u(1))) * &(&u(1) - &u(2))).expect("nonzero");
    let eta = Matrix::from_fn(n, n, |a, b| if a + b == n - 1 { RatFun::one(n) } else { RatFun::zero(n) });
    FlatMap { t: Vec::from([t1, t2, t3]), eta }
}

/// The epsilon-system: connection, diagonal product and, for `n = 3, eps = 1`,
/// the flat-coordinate map with the antidiagonal metric pulled back to canonical coordinates.
pub fn epsilon_system(n: usize, eps: &Rational) -> Result<StructureSpec> {
    if n < 2 {
        return Err(CoreError::Input(format!("the epsilon-system needs n >= 2, got {}", n)));
    }
    let coords = (1..=n).map(|i| format!("u{}", i)).collect();
    let gamma = epsilon_connection(n, eps);
    let (metric, map) = if n == 3 && *eps == crate::algebra::rational(1, 1) {
        let map = epsilon3_map();
        let j = jacobian(&map.t);
        let g_cov = j.transpose().mul(&map.eta)?.mul(&j)?;
        let metric = MetricData::with_connection(g_cov.inverse()?, gamma.clone())?;
        (Some(metric), Some(map))
    } else {
        (None, None)
    };
    StructureSpec::new(coords, ConnectionData::new(gamma)?, diagonal_product(n), metric, map)
}

/// The bracket of two hierarchy members, computed with the covariant closed form.
pub fn involution_check(m: &MetricData, a: &HierarchyForm, b: &HierarchyForm) -> Result<OneForm> {
    bracket(m, &a.form(), &b.form(), BracketMode::Hydro)
}

fn check_len(n: usize, got: usize) -> Result<()> {
    if got != n {
        return Err(CoreError::Dimension(format!("expected {} components, got {}", n, got)));
    }
    Ok(())
}
