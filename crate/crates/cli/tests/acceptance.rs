//! Acceptance suite: twelve exact checks, one verdict line each.

use std::process::ExitCode;
use std::time::Instant;

use loopform::fmanifold::{epsilon3_map, StructureSpec};
use loopform::poisson::coordinate_covector;
use loopform::random::{density, one_form, ratfun, seeded, Shape, DEFAULT_SEED};
use loopform::{
    algebra, antihom_defect, apply_p, bracket, cartan_defect, check_flat, check_fmanifold, ev_commutator, epsilon_system,
    exactness_defect, functional_bracket, involution_check, is_total_derivative, jacobi_defect, pairing, pullback_metric,
    verify_form_recursion, BracketMode, Matrix, MetricData, OneForm, RatFun,
};
use loopform_cli::golden::Golden;
use rayon::prelude::*;

type Verdict = Result<(), String>;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Verdict {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn all(parts: Vec<Verdict>) -> Verdict {
    let failures: Vec<String> = parts.into_iter().filter_map(Result::err).collect();
    if failures.is_empty() {
        Ok(())
    } else {
        Err(failures.join("; "))
    }
}

fn core<T>(r: loopform::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

struct Epsilon3 {
    golden: Golden,
    st: StructureSpec,
}

impl Epsilon3 {
    fn new() -> Epsilon3 {
        Epsilon3 { golden: Golden::epsilon3(), st: epsilon_system(3, &algebra::rational(1, 1)).expect("epsilon-system builds") }
    }

    fn metric(&self) -> &MetricData {
        self.st.metric().expect("the three-dimensional system carries a metric")
    }

    fn member(&self, label: &str) -> loopform::HierarchyForm {
        self.golden.hierarchy_form(label).expect("reference form parses")
    }
}

fn constant(rows: [[i64; 2]; 2]) -> MetricData {
    let m = Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&c| RatFun::from_int(2, c)).collect()).collect()).unwrap();
    MetricData::constant(m).unwrap()
}

fn constant_metrics() -> Vec<MetricData> {
    vec![constant([[0, 1], [1, 0]]), constant([[1, 0], [0, -1]]), constant([[2, 1], [1, 3]])]
}

/// Listed entries of `m` that differ from the reference values.
fn mismatches(kind: &str, m: &Matrix, listed: &[(usize, usize, RatFun)]) -> Vec<Verdict> {
    listed
        .iter()
        .map(|(i, j, v)| ensure(m[(*i, *j)] == *v, || format!("{} [{},{}] differs from the listed value", kind, i + 1, j + 1)))
        .collect()
}

fn metric_reproduction(e: &Epsilon3) -> Verdict {
    let map = epsilon3_map();
    let g = core(pullback_metric(&map.t, &map.eta))?;
    let cov = e.golden.listed(&e.golden.metric.covariant).map_err(|x| x.to_string())?;
    let contra = e.golden.listed(&e.golden.metric.contravariant).map_err(|x| x.to_string())?;
    let mut parts = mismatches("covariant", g.covariant(), &cov);
    parts.extend(mismatches("contravariant", &core(g.covariant().inverse())?, &contra));
    all(parts)
}

fn structure(e: &Epsilon3) -> Verdict {
    let r = check_fmanifold(&e.st);
    all(vec![
        ensure(r.commutativity.is_zero(), || String::from("commutativity defect")),
        ensure(r.associativity.is_zero(), || String::from("associativity defect")),
        ensure(r.flatness.is_zero(), || String::from("curvature of the connection")),
        ensure(r.compatibility.is_zero(), || String::from("connection and product incompatible")),
        ensure(check_flat(e.metric()).is_zero(), || String::from("curvature of the metric")),
    ])
}

fn flows(e: &Epsilon3) -> Verdict {
    let parts = ["omega_1_1", "omega_1_2"]
        .par_iter()
        .map(|label| {
            let flow = core(apply_p(e.metric(), &e.member(label).form()))?;
            let listed = e.golden.flow(label).map_err(|x| x.to_string())?;
            let diff = flow.sub(&listed);
            let bad: Vec<String> =
                diff.components().iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, _)| (i + 1).to_string()).collect();
            ensure(bad.is_empty(), || format!("P {} differs from the listed flow in components {}", label, bad.join(",")))
        })
        .collect();
    all(parts)
}

fn recursion(e: &Epsilon3) -> Verdict {
    let parts = [("omega_1_0", "omega_1_1"), ("omega_1_1", "omega_1_2")]
        .par_iter()
        .map(|(prev, next)| {
            let d = core(verify_form_recursion(&e.st, &e.member(next), &e.member(prev)))?;
            ensure(d.is_zero(), || format!("{} -> {} has {} nonzero defect entries", prev, next, d.entries.len()))
        })
        .collect();
    all(parts)
}

fn exactness(e: &Epsilon3) -> Verdict {
    let d11 = core(exactness_defect(&e.member("omega_1_1").form()))?;
    let d12 = core(exactness_defect(&e.member("omega_1_2").form()))?;
    all(vec![
        ensure(d11.is_zero(), || String::from("omega_1_1 is not closed")),
        ensure(!d12.is_zero(), || String::from("omega_1_2 is closed")),
    ])
}

fn involution(e: &Epsilon3) -> Verdict {
    let m = e.metric();
    let (a, b) = (e.member("omega_1_1"), e.member("omega_1_2"));
    let (bracket, commutator) = rayon::join(
        || core(involution_check(m, &a, &b)),
        || {
            let (xa, xb) = (core(apply_p(m, &a.form()))?, core(apply_p(m, &b.form()))?);
            core(ev_commutator(&xa, &xb))
        },
    );
    all(vec![
        ensure(bracket?.is_zero(), || String::from("bracket of omega_1_1 and omega_1_2 is nonzero")),
        ensure(commutator?.is_zero(), || String::from("flows do not commute")),
    ])
}

const CASES: usize = 25;
const SMALL_CASES: usize = 10;

/// Runs `check` on `cases` seeded trials, cycling through the constant metrics.
fn seeded_suite<F>(cases: usize, salt: u64, check: F) -> Verdict
where
    F: Fn(&MetricData, &mut loopform::random::SeededRng) -> Result<bool, String> + Sync,
{
    let metrics = constant_metrics();
    let failed: Vec<String> = (0..cases)
        .into_par_iter()
        .map(|k| {
            let mut rng = seeded(DEFAULT_SEED ^ (salt << 32) ^ k as u64);
            match check(&metrics[k % metrics.len()], &mut rng) {
                Ok(true) => None,
                Ok(false) => Some(format!("case {}", k + 1)),
                Err(e) => Some(format!("case {}: {}", k + 1, e)),
            }
        })
        .flatten()
        .collect();
    ensure(failed.is_empty(), || format!("{} of {} cases failed: {}", failed.len(), cases, failed.join(", ")))
}

fn jet_shape() -> Shape {
    Shape::new(2, 2, 2)
}

fn jacobi() -> Verdict {
    seeded_suite(CASES, 7, |m, rng| {
        let (a, b, c) = (one_form(rng, jet_shape()), one_form(rng, jet_shape()), one_form(rng, jet_shape()));
        Ok(core(jacobi_defect(m, &a, &b, &c))?.is_zero())
    })
}

fn antihomomorphism() -> Verdict {
    seeded_suite(CASES, 8, |m, rng| {
        let (a, b) = (one_form(rng, jet_shape()), one_form(rng, jet_shape()));
        Ok(core(antihom_defect(m, &a, &b))?.is_zero())
    })
}

fn cartan() -> Verdict {
    seeded_suite(CASES, 9, |m, rng| {
        let (a, b) = (one_form(rng, jet_shape()), one_form(rng, jet_shape()));
        Ok(core(cartan_defect(m, &a, &b))?.is_zero())
    })
}

fn exact_forms() -> Verdict {
    seeded_suite(SMALL_CASES, 10, |m, rng| {
        let shape = Shape::new(2, 1, 3);
        let (f, h) = (density(rng, shape), density(rng, shape));
        let lhs = core(bracket(m, &f.delta(), &h.delta(), BracketMode::Flat))?;
        Ok(lhs.class_eq(&core(functional_bracket(m, &f, &h))?.delta()))
    })
}

/// Forms with u-only rational coefficients are admissible in every mode.
fn mode_agreement() -> Verdict {
    seeded_suite(SMALL_CASES, 11, |m, rng| {
        let mut form = || OneForm::from_ratfuns((0..2).map(|_| ratfun(rng, 2, 2)).collect()).map_err(|e| e.to_string());
        let (a, b) = (form()?, form()?);
        let reference = core(bracket(m, &a, &b, BracketMode::Definition))?;
        for mode in [BracketMode::Flat, BracketMode::General, BracketMode::Hydro] {
            if !core(bracket(m, &a, &b, mode))?.class_eq(&reference) {
                return Ok(false);
            }
        }
        Ok(true)
    })
}

fn casimirs() -> Verdict {
    seeded_suite(SMALL_CASES, 12, |m, rng| {
        let xi = core(apply_p(m, &one_form(rng, Shape::new(2, 2, 3))))?;
        for i in 0..2 {
            let casimir = coordinate_covector(2, i);
            if !core(apply_p(m, &casimir))?.is_zero() || !is_total_derivative(core(pairing(&casimir, &xi))?.density()) {
                return Ok(false);
            }
        }
        Ok(true)
    })
}

fn main() -> ExitCode {
    let e = Epsilon3::new();
    let criteria: Vec<(&str, Box<dyn Fn() -> Verdict + Sync + '_>)> = vec![
        ("epsilon-system metric reproduction", Box::new(|| metric_reproduction(&e))),
        ("epsilon-system structure", Box::new(|| structure(&e))),
        ("hierarchy flows", Box::new(|| flows(&e))),
        ("recursion", Box::new(|| recursion(&e))),
        ("exactness dichotomy", Box::new(|| exactness(&e))),
        ("involution and commutativity", Box::new(|| involution(&e))),
        ("jacobi suite", Box::new(jacobi)),
        ("anti-homomorphism suite", Box::new(antihomomorphism)),
        ("cartan suite", Box::new(cartan)),
        ("exact-form compatibility", Box::new(exact_forms)),
        ("mode agreement", Box::new(mode_agreement)),
        ("casimir suite", Box::new(casimirs)),
    ];
    let results: Vec<(Verdict, f64)> = criteria
        .par_iter()
        .map(|(_, check)| {
            let start = Instant::now();
            let verdict = check();
            (verdict, start.elapsed().as_secs_f64())
        })
        .collect();
    let mut failed = 0;
    for (k, ((name, _), (verdict, secs))) in criteria.iter().zip(&results).enumerate() {
        match verdict {
            Ok(()) => println!("criterion {:>2}: PASS {} ({:.1} s)", k + 1, name, secs),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL {} ({:.1} s): {}", k + 1, name, secs, why);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
