//! Subcommands and their dispatch.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use loopform::fmanifold::StructureSpec;
use loopform::poisson::coordinate_covector;
use loopform::random::{self, Shape, DEFAULT_SEED};
use loopform::{
    apply_p, bracket, cartan_defect, check_flat, check_fmanifold, check_invariance, ev_commutator, exactness_defect, is_total_derivative,
    jacobi_defect, pairing, reduce_form, variational_derivative, BracketMode, HierarchyForm, OneForm, Rational,
};
use rayon::prelude::*;

use crate::error::CliError;
use crate::golden::Golden;
use crate::parse::parse_rational;
use crate::report::{self, Check, Report, Timing};
use crate::specfile::{form_names, load_form, NamedForm, Spec, SpecFile};

#[derive(Parser, Debug)]
#[command(name = "loopform", version, about = "Exact checks for Poisson brackets on 1-forms and F-manifold hierarchies")]
pub struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads for independent checks.
    #[arg(long, global = true, value_name = "K")]
    pub threads: Option<usize>,
    /// Add wall-clock timings to the report.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the F-manifold axioms, flatness of the metric and invariance.
    CheckStructure { spec: PathBuf },
    /// Evaluate the bracket of two 1-forms.
    Bracket {
        /// One of definition, flat, general, hydro.
        #[arg(long)]
        mode: String,
        spec: PathBuf,
        a: String,
        b: String,
        /// Fail unless the bracket vanishes.
        #[arg(long)]
        expect_zero: bool,
    },
    /// Reduce a 1-form to its canonical representative.
    Reduce { form: PathBuf },
    /// Apply the Poisson operator to a 1-form.
    ApplyP { spec: PathBuf, form: String },
    /// Check the Jacobi identity on three forms, or on seeded random triples.
    Jacobi {
        spec: PathBuf,
        #[arg(num_args = 0..=3)]
        forms: Vec<String>,
        #[command(flatten)]
        random: RandomArgs,
    },
    /// Check the Cartan formula on two forms, or on seeded random pairs.
    Cartan {
        spec: PathBuf,
        #[arg(num_args = 0..=2)]
        forms: Vec<String>,
        #[command(flatten)]
        random: RandomArgs,
    },
    /// Check recursion links, involution and commuting flows of hierarchy members.
    HierarchyVerify {
        spec: PathBuf,
        #[arg(required = true)]
        forms: Vec<String>,
    },
    /// Build the epsilon-system and check it.
    Epsilon {
        #[arg(long)]
        n: usize,
        /// Rational parameter such as 1 or -2/3.
        #[arg(long, allow_hyphen_values = true)]
        eps: String,
        /// Write the structure as a spec file; without a path, print it instead of the report.
        #[arg(long, value_name = "PATH", num_args = 0..=1, default_missing_value = "-")]
        emit: Option<PathBuf>,
    },
    /// Check the coordinate Casimirs and leaf tangency of a flow.
    CasimirCheck { spec: PathBuf, form: String },
}

#[derive(clap::Args, Debug, Clone, Copy)]
pub struct RandomArgs {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 25)]
    pub count: usize,
    /// Highest jet order in random forms.
    #[arg(long, default_value_t = 2)]
    pub order: u32,
    /// Highest monomial degree in random forms.
    #[arg(long, default_value_t = 2)]
    pub degree: u32,
}

/// Text written by a command and its exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

enum Produced {
    Report(Report),
    Document(String),
}

type Job<'a> = Box<dyn Fn() -> Result<Vec<Check>, CliError> + Send + Sync + 'a>;

fn job<'a>(f: impl Fn() -> Result<Check, CliError> + Send + Sync + 'a) -> Job<'a> {
    Box::new(move || f().map(|c| vec![c]))
}

/// Runs the jobs in parallel and appends their checks in submission order.
fn run_jobs(report: &mut Report, timings: &mut Vec<Timing>, jobs: Vec<(String, Job<'_>)>) -> Result<(), CliError> {
    let results: Vec<(String, Result<Vec<Check>, CliError>, f64)> = jobs
        .into_par_iter()
        .map(|(name, job)| {
            let start = Instant::now();
            let r = job();
            (name, r, start.elapsed().as_secs_f64() * 1e3)
        })
        .collect();
    for (name, r, millis) in results {
        for c in r? {
            report.check(c);
        }
        timings.push(Timing { name, millis });
    }
    Ok(())
}

fn mode(s: &str) -> Result<BracketMode, CliError> {
    Ok(s.parse::<BracketMode>()?)
}

fn hierarchy(f: &NamedForm) -> Result<HierarchyForm, CliError> {
    HierarchyForm::from_form(f.p.unwrap_or(0), f.alpha.unwrap_or(0), &f.form)
        .map_err(|e| CliError::Input(format!("form '{}': {}", f.label, e)))
}

fn structure_checks(st: &StructureSpec, jobs: &mut Vec<(String, Job<'_>)>) {
    let names = st.coords.clone();
    let st = st.clone();
    jobs.push((
        String::from("F-manifold axioms"),
        Box::new(move || {
            let r = check_fmanifold(&st);
            Ok([
                ("commutativity", &r.commutativity),
                ("associativity", &r.associativity),
                ("flatness of the connection", &r.flatness),
                ("compatibility of connection and product", &r.compatibility),
            ]
            .iter()
            .map(|(name, d)| Check::new(*name, report::from_defect(d, &names)))
            .collect())
        }),
    ));
}

fn metric_checks<'a>(spec: &'a Spec, jobs: &mut Vec<(String, Job<'a>)>) {
    if let Some(m) = &spec.metric {
        jobs.push((
            String::from("flatness of the metric"),
            job(move || Ok(Check::new("flatness of the metric", report::from_defect(&check_flat(m), &spec.coords)))),
        ));
        if let Some(p) = &spec.product {
            jobs.push((
                String::from("invariance of the metric"),
                job(move || {
                    Ok(Check::new("invariance of the metric", report::from_defect(&check_invariance(m, p), &spec.coords)).informational())
                }),
            ));
        }
    }
}

fn check_structure(spec: &Spec, report: &mut Report, timings: &mut Vec<Timing>) -> Result<(), CliError> {
    let st = spec.structure()?;
    let mut jobs: Vec<(String, Job<'_>)> = Vec::new();
    structure_checks(&st, &mut jobs);
    metric_checks(spec, &mut jobs);
    run_jobs(report, timings, jobs)
}

fn random_forms(n: usize, args: &RandomArgs, per_trial: usize) -> Vec<Vec<OneForm>> {
    let mut rng = random::seeded(args.seed);
    let shape = Shape::new(n, args.order, args.degree);
    (0..args.count).map(|_| (0..per_trial).map(|_| random::one_form(&mut rng, shape)).collect()).collect()
}

fn trials(spec: &Spec, forms: &[String], args: &RandomArgs, arity: usize) -> Result<Vec<(String, Vec<OneForm>)>, CliError> {
    match forms.len() {
        0 => Ok(random_forms(spec.n(), args, arity)
            .into_iter()
            .enumerate()
            .map(|(k, f)| (format!("random {} (seed {})", k + 1, args.seed), f))
            .collect()),
        k if k == arity => {
            let resolved = forms.iter().map(|f| spec.form(f)).collect::<Result<Vec<_>, _>>()?;
            let label = resolved.iter().map(|f| f.label.clone()).collect::<Vec<_>>().join(", ");
            Ok(vec![(label, resolved.into_iter().map(|f| f.form).collect())])
        }
        k => Err(CliError::Input(format!("expected {} forms or none, got {}", arity, k))),
    }
}

fn execute(cli: &Cli) -> Result<Produced, CliError> {
    let start = Instant::now();
    let mut report = Report::new(command_line(cli));
    let mut timings = Vec::new();
    match &cli.command {
        Command::CheckStructure { spec } => {
            let spec = Spec::load(spec)?;
            check_structure(&spec, &mut report, &mut timings)?;
        }
        Command::Bracket { mode: m, spec, a, b, expect_zero } => {
            let mode = mode(m)?;
            let spec = Spec::load(spec)?;
            let metric = spec.metric()?;
            let (a, b) = (spec.form(a)?, spec.form(b)?);
            let r = bracket(metric, &a.form, &b.form, mode)?;
            if *expect_zero {
                report.check(Check::new("bracket vanishes", report::from_form(&r, &spec.coords)));
            }
            report.output(format!("{{{}, {}}} ({})", a.label, b.label, mode), report::form_components(&r, &spec.coords));
        }
        Command::Reduce { form } => {
            let f = load_form(form, None)?;
            let names = form_names(&f, None);
            report.output(format!("reduced {}", f.label), report::form_components(&reduce_form(&f.form), &names));
        }
        Command::ApplyP { spec, form } => {
            let spec = Spec::load(spec)?;
            let f = spec.form(form)?;
            let xi = apply_p(spec.metric()?, &f.form)?;
            report.output(format!("P {}", f.label), report::field_components(&xi, &spec.coords));
        }
        Command::Jacobi { spec, forms, random } => {
            let spec = Spec::load(spec)?;
            let m = spec.metric()?;
            m.require_constant_metric("the Jacobi check")?;
            let jobs: Vec<(String, Job<'_>)> = trials(&spec, forms, random, 3)?
                .into_iter()
                .map(|(label, f)| {
                    let names = &spec.coords;
                    let job: Job<'_> = job(move || {
                        let d = jacobi_defect(m, &f[0], &f[1], &f[2])?;
                        Ok(Check::new(format!("jacobi {}", label), report::from_form(&d, names)))
                    });
                    (String::from("jacobi"), job)
                })
                .collect();
            run_jobs(&mut report, &mut timings, jobs)?;
        }
        Command::Cartan { spec, forms, random } => {
            let spec = Spec::load(spec)?;
            let m = spec.metric()?;
            m.require_constant_metric("the Cartan check")?;
            let jobs: Vec<(String, Job<'_>)> = trials(&spec, forms, random, 2)?
                .into_iter()
                .map(|(label, f)| {
                    let names = &spec.coords;
                    let job: Job<'_> = job(move || {
                        let d = cartan_defect(m, &f[0], &f[1])?;
                        Ok(Check::new(format!("cartan {}", label), report::from_form(&d, names)))
                    });
                    (String::from("cartan"), job)
                })
                .collect();
            run_jobs(&mut report, &mut timings, jobs)?;
        }
        Command::HierarchyVerify { spec, forms } => {
            let spec = Spec::load(spec)?;
            hierarchy_verify(&spec, forms, &mut report, &mut timings)?;
        }
        Command::Epsilon { n, eps, emit } => {
            let eps = parse_rational(eps).map_err(|error| CliError::Parse { file: String::from("--eps"), at: String::from("value"), error })?;
            let st = loopform::epsilon_system(*n, &eps)?;
            if let Some(path) = emit {
                let text = serde_json::to_string_pretty(&emitted(&st, &eps)).expect("specs serialize") + "\n";
                if path.as_os_str() == "-" {
                    return Ok(Produced::Document(text));
                }
                std::fs::write(path, text).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
                report.output("written", vec![path.display().to_string()]);
            }
            let spec = Spec {
                source: String::from("epsilon"),
                coords: st.coords.clone(),
                metric: st.metric.clone(),
                connection: Some(st.connection.gamma().clone()),
                product: Some(st.product.clone()),
                map: st.map.clone(),
                forms: Vec::new(),
            };
            check_structure(&spec, &mut report, &mut timings)?;
        }
        Command::CasimirCheck { spec, form } => {
            let spec = Spec::load(spec)?;
            casimir_check(&spec, form, &mut report, &mut timings)?;
        }
    }
    if cli.timing {
        timings.push(Timing { name: String::from("total"), millis: start.elapsed().as_secs_f64() * 1e3 });
        report.timing = Some(timings);
    }
    Ok(Produced::Report(report.finish()))
}

trait RequireConstant {
    fn require_constant_metric(&self, what: &str) -> Result<(), CliError>;
}

impl RequireConstant for loopform::MetricData {
    fn require_constant_metric(&self, what: &str) -> Result<(), CliError> {
        if self.is_constant() {
            Ok(())
        } else {
            Err(CliError::Core(loopform::CoreError::Mode(format!("{} needs a constant metric", what))))
        }
    }
}

/// The spec written by `epsilon --emit`; the three-dimensional system with
/// parameter 1 also carries the reference hierarchy members.
fn emitted(st: &StructureSpec, eps: &Rational) -> SpecFile {
    let forms = if st.n == 3 && *eps == Rational::from_integer(1.into()) { Golden::epsilon3().forms } else { Vec::new() };
    SpecFile::from_structure(st, forms)
}

fn hierarchy_verify(spec: &Spec, labels: &[String], report: &mut Report, timings: &mut Vec<Timing>) -> Result<(), CliError> {
    let st = spec.structure()?;
    let m = spec.metric()?;
    let forms = labels.iter().map(|l| spec.form(l)).collect::<Result<Vec<_>, _>>()?;
    let members = forms.iter().map(hierarchy).collect::<Result<Vec<_>, _>>()?;
    let names = &spec.coords;
    let flows: Vec<_> = forms
        .par_iter()
        .map(|f| apply_p(m, &f.form))
        .collect::<Result<Vec<_>, _>>()?;
    let mut jobs: Vec<(String, Job<'_>)> = Vec::new();
    for k in 1..forms.len() {
        let (prev, next) = (&members[k - 1], &members[k]);
        let name = format!("recursion {} -> {}", forms[k - 1].label, forms[k].label);
        let st = &st;
        jobs.push((
            name.clone(),
            job(move || Ok(Check::new(name.clone(), report::from_defect(&loopform::verify_form_recursion(st, next, prev)?, names)))),
        ));
    }
    for a in 0..forms.len() {
        for b in a + 1..forms.len() {
            let name = format!("involution {}, {}", forms[a].label, forms[b].label);
            let (ma, mb) = (&members[a], &members[b]);
            jobs.push((
                name.clone(),
                job(move || Ok(Check::new(name.clone(), report::from_form(&loopform::involution_check(m, ma, mb)?, names)))),
            ));
            let name = format!("commuting flows {}, {}", forms[a].label, forms[b].label);
            let (fa, fb) = (&flows[a], &flows[b]);
            jobs.push((name.clone(), job(move || Ok(Check::new(name.clone(), report::from_field(&ev_commutator(fa, fb)?, names))))));
        }
    }
    for f in &forms {
        let name = format!("exactness {}", f.label);
        jobs.push((
            name.clone(),
            job(move || Ok(Check::new(name.clone(), report::from_matrix(&exactness_defect(&f.form)?, names)).informational())),
        ));
    }
    run_jobs(report, timings, jobs)?;
    for (f, xi) in forms.iter().zip(&flows) {
        report.output(format!("P {}", f.label), report::field_components(xi, names));
    }
    Ok(())
}

fn casimir_check(spec: &Spec, form: &str, report: &mut Report, timings: &mut Vec<Timing>) -> Result<(), CliError> {
    let m = spec.metric()?;
    let f = spec.form(form)?;
    let n = spec.n();
    let names = &spec.coords;
    let xi = apply_p(m, &f.form)?;
    let mut jobs: Vec<(String, Job<'_>)> = Vec::new();
    for i in 0..n {
        let name = format!("casimir {}", names[i]);
        jobs.push((
            name.clone(),
            job(move || Ok(Check::new(name.clone(), report::from_field(&apply_p(m, &coordinate_covector(n, i))?, names)))),
        ));
        let name = format!("tangency of P {} to the level sets of {}", f.label, names[i]);
        let xi = &xi;
        jobs.push((
            name.clone(),
            job(move || {
                let density = pairing(&coordinate_covector(n, i), xi)?;
                let defects = if is_total_derivative(density.density()) {
                    Vec::new()
                } else {
                    report::from_form(&OneForm::from_components(variational_derivative(density.density()))?, names)
                };
                Ok(Check::new(name.clone(), defects))
            }),
        ));
    }
    run_jobs(report, timings, jobs)?;
    report.output(format!("P {}", f.label), report::field_components(&xi, names));
    Ok(())
}

/// The invocation as shown in reports, without output-only flags.
fn command_line(cli: &Cli) -> String {
    let quote = |p: &Path| p.display().to_string();
    match &cli.command {
        Command::CheckStructure { spec } => format!("check-structure {}", quote(spec)),
        Command::Bracket { mode, spec, a, b, expect_zero } => {
            format!("bracket --mode {} {} {} {}{}", mode, quote(spec), a, b, if *expect_zero { " --expect-zero" } else { "" })
        }
        Command::Reduce { form } => format!("reduce {}", quote(form)),
        Command::ApplyP { spec, form } => format!("apply-p {} {}", quote(spec), form),
        Command::Jacobi { spec, forms, random } => random_line("jacobi", spec, forms, random),
        Command::Cartan { spec, forms, random } => random_line("cartan", spec, forms, random),
        Command::HierarchyVerify { spec, forms } => format!("hierarchy-verify {} {}", quote(spec), forms.join(" ")),
        Command::Epsilon { n, eps, emit } => {
            let emit = match emit {
                Some(p) if p.as_os_str() == "-" => String::from(" --emit"),
                Some(p) => format!(" --emit {}", quote(p)),
                None => String::new(),
            };
            format!("epsilon --n {} --eps {}{}", n, eps, emit)
        }
        Command::CasimirCheck { spec, form } => format!("casimir-check {} {}", quote(spec), form),
    }
}

fn random_line(name: &str, spec: &Path, forms: &[String], r: &RandomArgs) -> String {
    if forms.is_empty() {
        format!("{} {} --seed {} --count {} --order {} --degree {}", name, spec.display(), r.seed, r.count, r.order, r.degree)
    } else {
        format!("{} {} {}", name, spec.display(), forms.join(" "))
    }
}

/// Parses the arguments, runs the command and renders its report.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { stdout: String::new(), stderr: text, code: 2 }
            } else {
                Outcome { stdout: text, stderr: String::new(), code: 0 }
            };
        }
    };
    let result = match cli.threads {
        Some(0) => Err(CliError::Input(String::from("--threads must be at least 1"))),
        Some(k) => match rayon::ThreadPoolBuilder::new().num_threads(k).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(CliError::Input(format!("cannot start {} threads: {}", k, e))),
        },
        None => execute(&cli),
    };
    match result {
        Ok(Produced::Report(r)) => {
            let stdout = if cli.json { r.to_json() } else { r.to_text() };
            Outcome { stdout, stderr: String::new(), code: r.exit_code }
        }
        Ok(Produced::Document(text)) => Outcome { stdout: text, stderr: String::new(), code: 0 },
        Err(e) => Outcome { stdout: String::new(), stderr: format!("loopform: {}: {}\n", e.kind(), e), code: 2 },
    }
}
