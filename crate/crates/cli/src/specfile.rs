//! JSON structure specs and form files, validated against the bundled
//! schemas and assembled into core structures.

use std::path::Path;
use std::sync::OnceLock;

use loopform::fmanifold::{jacobian, FlatMap, StructureSpec};
use loopform::{ConnectionData, JetExpression, Matrix, MetricData, OneForm, ProductStructure, RatFun, Tensor3};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;
use crate::parse::{default_names, parse_expr, parse_ratfun, show_ratfun, valid_name};

pub const SPEC_VERSION: u32 = 1;
pub const SPEC_SCHEMA: &str = include_str!("../schema/spec.schema.json");
pub const FORM_SCHEMA: &str = include_str!("../schema/form.schema.json");
const SPEC_SCHEMA_ID: &str = "https://loopform.invalid/schema/spec-1.json";

/// Top-level structure spec document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub spec_version: u32,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<MetricEntry>,
    /// Christoffel symbols `Gamma^i_{jk}`, completed symmetrically in `j, k`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connection: Option<Vec<TensorEntry>>,
    /// Structure constants `c^i_{jk}`, taken as given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub product: Option<Vec<TensorEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<MapEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub forms: Vec<FormEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "lowercase")]
pub enum MetricEntry {
    Contravariant(Vec<Vec<String>>),
    Covariant(Vec<Vec<String>>),
}

/// Tensor component with a 1-based index `[i, j, k]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorEntry {
    pub index: [usize; 3],
    pub value: String,
}

/// Flat coordinates `t^a(u)` and the constant metric `eta` they flatten to.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapEntry {
    pub t: Vec<String>,
    pub eta: Vec<Vec<String>>,
}

/// Coefficient of `delta u^coord_(order)` in a general 1-form; `coord` is 1-based.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlotEntry {
    pub coord: usize,
    pub order: u32,
    pub value: String,
}

/// Labelled 1-form inside a spec; exactly one of `components` (reduced form)
/// and `entries` (general form) is present.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormEntry {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<SlotEntry>>,
}

/// Standalone form document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormFile {
    pub spec_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<SlotEntry>>,
}

/// A parsed 1-form with its label and optional hierarchy indices.
#[derive(Clone, Debug)]
pub struct NamedForm {
    pub label: String,
    pub p: Option<u32>,
    pub alpha: Option<u32>,
    pub form: OneForm,
}

/// A loaded spec: everything parsed, the metric assembled when possible.
#[derive(Clone, Debug)]
pub struct Spec {
    pub source: String,
    pub coords: Vec<String>,
    pub metric: Option<MetricData>,
    /// The supplied connection, or the Levi-Civita connection of the metric.
    pub connection: Option<Tensor3>,
    pub product: Option<ProductStructure>,
    pub map: Option<FlatMap>,
    pub forms: Vec<NamedForm>,
}

fn validator(which: &str) -> &'static jsonschema::Validator {
    static SPEC: OnceLock<jsonschema::Validator> = OnceLock::new();
    static FORM: OnceLock<jsonschema::Validator> = OnceLock::new();
    let (cell, text) = if which == "spec" { (&SPEC, SPEC_SCHEMA) } else { (&FORM, FORM_SCHEMA) };
    cell.get_or_init(|| {
        let spec: Value = serde_json::from_str(SPEC_SCHEMA).expect("bundled schema is valid JSON");
        let schema: Value = serde_json::from_str(text).expect("bundled schema is valid JSON");
        let registry = jsonschema::Registry::new()
            .add(SPEC_SCHEMA_ID, spec)
            .and_then(|r| r.prepare())
            .expect("bundled schema registers");
        jsonschema::options().with_registry(&registry).build(&schema).expect("bundled schema compiles")
    })
}

fn validate(which: &str, source: &str, doc: &Value) -> Result<(), CliError> {
    let errors: Vec<String> = validator(which)
        .iter_errors(doc)
        .map(|e| {
            let at = e.instance_path().to_string();
            format!("{}: {}", if at.is_empty() { "/" } else { &at }, e)
        })
        .collect();
    if errors.is_empty() {
        Ok(())
    } else {
        Err(CliError::Schema { file: source.to_string(), errors })
    }
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
    serde_json::from_str(&text).map_err(|e| CliError::Json { file: path.display().to_string(), message: e.to_string() })
}

fn decode<T: serde::de::DeserializeOwned>(which: &str, source: &str, doc: Value) -> Result<T, CliError> {
    validate(which, source, &doc)?;
    serde_json::from_value(doc).map_err(|e| CliError::Json { file: source.to_string(), message: e.to_string() })
}

struct Ctx<'a> {
    source: &'a str,
    names: &'a [String],
}

impl Ctx<'_> {
    fn expr(&self, at: &str, text: &str) -> Result<JetExpression, CliError> {
        parse_expr(text, self.names).map_err(|error| CliError::Parse { file: self.source.to_string(), at: at.to_string(), error })
    }

    fn ratfun(&self, at: &str, text: &str) -> Result<RatFun, CliError> {
        parse_ratfun(text, self.names).map_err(|error| CliError::Parse { file: self.source.to_string(), at: at.to_string(), error })
    }

    fn input(&self, message: String) -> CliError {
        CliError::Input(format!("{}: {}", self.source, message))
    }

    fn matrix(&self, at: &str, rows: &[Vec<String>]) -> Result<Matrix, CliError> {
        let n = self.names.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(self.input(format!("{} must be a {}x{} matrix", at, n, n)));
        }
        let mut out = Vec::with_capacity(n);
        for (i, row) in rows.iter().enumerate() {
            let mut r = Vec::with_capacity(n);
            for (j, v) in row.iter().enumerate() {
                r.push(self.ratfun(&format!("{}/{}/{}", at, i, j), v)?);
            }
            out.push(r);
        }
        Matrix::from_rows(out).map_err(CliError::Core)
    }

    fn tensor(&self, at: &str, entries: &[TensorEntry], symmetric: bool) -> Result<Tensor3, CliError> {
        let n = self.names.len();
        let mut parsed = Vec::with_capacity(entries.len());
        for (k, e) in entries.iter().enumerate() {
            if e.index.iter().any(|&i| i == 0 || i > n) {
                return Err(self.input(format!("{}/{}: index {:?} out of range 1..{}", at, k, e.index, n)));
            }
            let v = self.ratfun(&format!("{}/{}/value", at, k), &e.value)?;
            parsed.push((e.index[0] - 1, e.index[1] - 1, e.index[2] - 1, v));
        }
        Tensor3::from_entries(n, parsed, symmetric).map_err(|e| self.input(format!("{}: {}", at, e)))
    }

    fn form(&self, at: &str, components: &Option<Vec<String>>, entries: &Option<Vec<SlotEntry>>) -> Result<OneForm, CliError> {
        let n = self.names.len();
        match (components, entries) {
            (Some(comps), None) => {
                if comps.len() != n {
                    return Err(self.input(format!("{}: {} components for {} coordinates", at, comps.len(), n)));
                }
                let mut out = Vec::with_capacity(n);
                for (i, c) in comps.iter().enumerate() {
                    out.push(self.expr(&format!("{}/components/{}", at, i), c)?);
                }
                OneForm::from_components(out).map_err(CliError::Core)
            }
            (None, Some(slots)) => {
                let mut out = Vec::with_capacity(slots.len());
                for (k, s) in slots.iter().enumerate() {
                    if s.coord == 0 || s.coord > n {
                        return Err(self.input(format!("{}/entries/{}: coordinate {} out of range 1..{}", at, k, s.coord, n)));
                    }
                    out.push((s.coord - 1, s.order, self.expr(&format!("{}/entries/{}/value", at, k), &s.value)?));
                }
                OneForm::from_general(n, out).map_err(CliError::Core)
            }
            _ => Err(self.input(format!("{}: give exactly one of 'components' and 'entries'", at))),
        }
    }
}

fn check_names(source: &str, names: &[String]) -> Result<(), CliError> {
    for (i, a) in names.iter().enumerate() {
        if !valid_name(a) {
            return Err(CliError::Input(format!("{}: invalid coordinate name '{}'", source, a)));
        }
        if names[..i].contains(a) {
            return Err(CliError::Input(format!("{}: duplicate coordinate name '{}'", source, a)));
        }
    }
    Ok(())
}

fn resolve_names(source: &str, n: usize, coords: &Option<Vec<String>>) -> Result<Vec<String>, CliError> {
    let names = match coords {
        Some(c) if c.len() != n => {
            return Err(CliError::Input(format!("{}: {} coordinate names for n = {}", source, c.len(), n)));
        }
        Some(c) => c.clone(),
        None => default_names(n),
    };
    check_names(source, &names)?;
    Ok(names)
}

/// Covariant metric `J^T eta J` of a flat-coordinate map.
pub fn pullback_covariant(t: &[RatFun], eta: &Matrix) -> Result<Matrix, CliError> {
    let j = jacobian(t);
    let g = j.transpose().mul(eta).and_then(|a| a.mul(&j)).map_err(CliError::Core)?;
    Ok(g)
}

impl Spec {
    pub fn load(path: &Path) -> Result<Spec, CliError> {
        let doc = read_json(path)?;
        Spec::from_value(&path.display().to_string(), doc)
    }

    pub fn from_value(source: &str, doc: Value) -> Result<Spec, CliError> {
        let file: SpecFile = decode("spec", source, doc)?;
        Spec::from_file(source, &file)
    }

    pub fn from_file(source: &str, file: &SpecFile) -> Result<Spec, CliError> {
        if file.spec_version != SPEC_VERSION {
            return Err(CliError::Input(format!("{}: unsupported spec_version {}", source, file.spec_version)));
        }
        let coords = resolve_names(source, file.n, &file.coords)?;
        let ctx = Ctx { source, names: &coords };
        let explicit = match &file.connection {
            Some(entries) => Some(ctx.tensor("/connection", entries, true)?),
            None => None,
        };
        let product = match &file.product {
            Some(entries) => Some(ProductStructure { c: ctx.tensor("/product", entries, false)? }),
            None => None,
        };
        let map = match &file.map {
            Some(m) => {
                if m.t.len() != file.n {
                    return Err(ctx.input(format!("/map/t: {} functions for n = {}", m.t.len(), file.n)));
                }
                let mut t = Vec::with_capacity(m.t.len());
                for (a, v) in m.t.iter().enumerate() {
                    t.push(ctx.ratfun(&format!("/map/t/{}", a), v)?);
                }
                let eta = ctx.matrix("/map/eta", &m.eta)?;
                if !eta.is_constant() {
                    return Err(ctx.input(String::from("/map/eta: entries must be constants")));
                }
                Some(FlatMap { t, eta })
            }
            None => None,
        };
        let contravariant = match &file.metric {
            Some(MetricEntry::Contravariant(rows)) => Some(ctx.matrix("/metric/contravariant", rows)?),
            Some(MetricEntry::Covariant(rows)) => {
                Some(ctx.matrix("/metric/covariant", rows)?.inverse().map_err(|e| ctx.input(format!("/metric/covariant: {}", e)))?)
            }
            None => match &map {
                Some(m) => Some(
                    pullback_covariant(&m.t, &m.eta)?
                        .inverse()
                        .map_err(|e| ctx.input(format!("/map: the pulled-back metric is degenerate ({})", e)))?,
                ),
                None => None,
            },
        };
        let metric = match (contravariant, &explicit) {
            (Some(g), Some(conn)) => Some(MetricData::with_connection(g, conn.clone()).map_err(|e| ctx.input(e.to_string()))?),
            (Some(g), None) if g.is_constant() => Some(MetricData::constant(g).map_err(|e| ctx.input(e.to_string()))?),
            (Some(g), None) => Some(MetricData::from_contravariant(g).map_err(|e| ctx.input(e.to_string()))?),
            (None, _) => None,
        };
        let connection = explicit.or_else(|| metric.as_ref().map(|m| m.levi_civita().clone()));
        let mut forms = Vec::with_capacity(file.forms.len());
        for (k, f) in file.forms.iter().enumerate() {
            if forms.iter().any(|g: &NamedForm| g.label == f.label) {
                return Err(ctx.input(format!("duplicate form label '{}'", f.label)));
            }
            let form = ctx.form(&format!("/forms/{}", k), &f.components, &f.entries)?;
            forms.push(NamedForm { label: f.label.clone(), p: f.p, alpha: f.alpha, form });
        }
        Ok(Spec { source: source.to_string(), coords, metric, connection, product, map, forms })
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn metric(&self) -> Result<&MetricData, CliError> {
        self.metric.as_ref().ok_or_else(|| CliError::Input(format!("{}: the spec defines no metric", self.source)))
    }

    /// The structure for F-manifold and hierarchy checks; needs a connection
    /// and a product.
    pub fn structure(&self) -> Result<StructureSpec, CliError> {
        let conn = self.connection.clone().ok_or_else(|| {
            CliError::Input(format!("{}: the spec defines neither a connection nor a metric", self.source))
        })?;
        let product = self.product.clone().ok_or_else(|| CliError::Input(format!("{}: the spec defines no product", self.source)))?;
        let connection = ConnectionData::new(conn).map_err(|e| CliError::Input(format!("{}: {}", self.source, e)))?;
        StructureSpec::new(self.coords.clone(), connection, product, self.metric.clone(), self.map.clone())
            .map_err(|e| CliError::Input(format!("{}: {}", self.source, e)))
    }

    /// Resolves a form argument: a label of the spec first, then a file path.
    pub fn form(&self, arg: &str) -> Result<NamedForm, CliError> {
        if let Some(f) = self.forms.iter().find(|f| f.label == arg) {
            return Ok(f.clone());
        }
        let path = Path::new(arg);
        if !path.exists() {
            return Err(CliError::Input(format!("'{}' is neither a form label of {} nor a file", arg, self.source)));
        }
        load_form(path, Some(&self.coords))
    }
}

/// Loads a form file; with `coords`, the form is read over those coordinates.
pub fn load_form(path: &Path, coords: Option<&[String]>) -> Result<NamedForm, CliError> {
    let source = path.display().to_string();
    form_from_value(&source, read_json(path)?, coords)
}

pub fn form_from_value(source: &str, doc: Value, coords: Option<&[String]>) -> Result<NamedForm, CliError> {
    let file: FormFile = decode("form", source, doc)?;
    if file.spec_version != SPEC_VERSION {
        return Err(CliError::Input(format!("{}: unsupported spec_version {}", source, file.spec_version)));
    }
    let own = match (file.n, &file.coords) {
        (Some(n), c) => Some(resolve_names(source, n, c)?),
        (None, Some(c)) => Some(resolve_names(source, c.len(), &file.coords)?),
        (None, None) => None,
    };
    let names = match (coords, own, &file.components) {
        (Some(c), Some(o), _) if c != o.as_slice() => {
            return Err(CliError::Input(format!("{}: coordinates {:?} differ from the spec's {:?}", source, o, c)));
        }
        (Some(c), _, _) => c.to_vec(),
        (None, Some(o), _) => o,
        (None, None, Some(comps)) => default_names(comps.len()),
        (None, None, None) => {
            return Err(CliError::Input(format!("{}: give 'n' or 'coords' for a form with general entries", source)));
        }
    };
    let ctx = Ctx { source, names: &names };
    let form = ctx.form("", &file.components, &file.entries)?;
    let label = file.label.unwrap_or_else(|| source.to_string());
    Ok(NamedForm { label, p: file.p, alpha: file.alpha, form })
}

/// Coordinate names used by a standalone form file.
pub fn form_names(form: &NamedForm, coords: Option<&[String]>) -> Vec<String> {
    coords.map(|c| c.to_vec()).unwrap_or_else(|| default_names(form.form.n()))
}

fn tensor_entries(t: &Tensor3, names: &[String], lower_symmetric: bool) -> Vec<TensorEntry> {
    t.nonzero()
        .filter(|((_, j, k), _)| !lower_symmetric || j <= k)
        .map(|((i, j, k), v)| TensorEntry { index: [i + 1, j + 1, k + 1], value: show_ratfun(v, names) })
        .collect()
}

impl SpecFile {
    /// Serializes a structure; the metric is left to be rebuilt from the map.
    pub fn from_structure(spec: &StructureSpec, forms: Vec<FormEntry>) -> SpecFile {
        let names = &spec.coords;
        let map = spec.map.as_ref().map(|m| MapEntry {
            t: m.t.iter().map(|f| show_ratfun(f, names)).collect(),
            eta: (0..m.eta.rows()).map(|i| (0..m.eta.cols()).map(|j| show_ratfun(&m.eta[(i, j)], names)).collect()).collect(),
        });
        SpecFile {
            spec_version: SPEC_VERSION,
            n: spec.n,
            coords: Some(names.clone()),
            metric: None,
            connection: Some(tensor_entries(spec.connection.gamma(), names, true)),
            product: Some(tensor_entries(&spec.product.c, names, false)),
            map,
            forms,
        }
    }
}
