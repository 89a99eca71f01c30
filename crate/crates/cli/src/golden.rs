//! Reference data for the three-dimensional epsilon-system.

use loopform::{EvField, HierarchyForm, Matrix, RatFun};
use serde::Deserialize;

use crate::error::CliError;
use crate::parse::{parse_expr, parse_ratfun};
use crate::specfile::FormEntry;

pub const EPSILON3_GOLDEN: &str = include_str!("../data/epsilon3_golden.json");

/// Symmetric-matrix component with a 1-based index `[i, j]`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixEntry {
    pub index: [usize; 2],
    pub value: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenMetric {
    pub covariant: Vec<MatrixEntry>,
    pub contravariant: Vec<MatrixEntry>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenFlow {
    pub form: String,
    pub components: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Golden {
    pub description: String,
    pub coords: Vec<String>,
    pub metric: GoldenMetric,
    pub forms: Vec<FormEntry>,
    pub flows: Vec<GoldenFlow>,
}

fn parse_err(at: String) -> impl FnOnce(crate::parse::ParseError) -> CliError {
    move |error| CliError::Parse { file: String::from("epsilon3 reference data"), at, error }
}

impl Golden {
    pub fn epsilon3() -> Golden {
        serde_json::from_str(EPSILON3_GOLDEN).expect("bundled reference data is valid")
    }

    /// The listed components as `(i, j, value)` with 0-based indices.
    pub fn listed(&self, entries: &[MatrixEntry]) -> Result<Vec<(usize, usize, RatFun)>, CliError> {
        entries
            .iter()
            .map(|e| {
                let at = format!("metric[{},{}]", e.index[0], e.index[1]);
                Ok((e.index[0] - 1, e.index[1] - 1, parse_ratfun(&e.value, &self.coords).map_err(parse_err(at))?))
            })
            .collect()
    }

    /// Symmetric matrix filled from the listed upper-triangular components.
    pub fn matrix(&self, entries: &[MatrixEntry]) -> Result<Matrix, CliError> {
        let n = self.coords.len();
        let mut m = Matrix::zeros(n, n, n);
        for (i, j, v) in self.listed(entries)? {
            m[(j, i)] = v.clone();
            m[(i, j)] = v;
        }
        Ok(m)
    }

    pub fn form_entry(&self, label: &str) -> &FormEntry {
        self.forms.iter().find(|f| f.label == label).expect("reference form exists")
    }

    pub fn hierarchy_form(&self, label: &str) -> Result<HierarchyForm, CliError> {
        let f = self.form_entry(label);
        let comps = f.components.as_ref().expect("reference forms list components");
        let parsed = comps
            .iter()
            .enumerate()
            .map(|(i, c)| parse_ratfun(c, &self.coords).map_err(parse_err(format!("{}[{}]", label, i + 1))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(HierarchyForm::new(f.p.unwrap_or(0), f.alpha.unwrap_or(0), parsed))
    }

    pub fn flow(&self, label: &str) -> Result<EvField, CliError> {
        let f = self.flows.iter().find(|f| f.form == label).expect("reference flow exists");
        let comps = f
            .components
            .iter()
            .enumerate()
            .map(|(i, c)| parse_expr(c, &self.coords).map_err(parse_err(format!("flow {}[{}]", label, i + 1))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(EvField::new(comps)?)
    }
}
