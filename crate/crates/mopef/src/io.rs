//! JSON file formats.
//!
//! Instances: `{"p": 2, "points": [{"label": "a", "f": [0, 3]}]}`. Entries
//! may also be `null` or strings such as `"NaN"` so that non-finite data is
//! reported by validation rather than rejected by the parser.
//!
//! Analytic instances: `{"variables": [{"name": "x", "lo": -1, "hi": 0}],
//! "objectives": ["x^2", "x"], "samples": 1001}`; a `null` or missing bound
//! marks an unbounded side.
//!
//! Transforms: `{"kind": "componentwise", "components": ["y^2", "y^4"],
//! "domain": [[0, 1], [0, 1]]}` with optional `inverse` and
//! `inverse_domain`; `null` bounds are infinite.

use std::fs;
use std::io::{ErrorKind, Write};
use std::path::Path;

use mopef_core::analytic::Variable;
use mopef_core::instance::{validate_instance, RawInstance};
use mopef_core::transform::{TransformKind, TransformSpec};
use mopef_core::{AnalyticInstance, DiscreteInstance, Expression};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const DEFAULT_SAMPLES: usize = 1001;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Number(f64),
    Text(String),
    Null,
}

impl Entry {
    fn value(&self) -> Result<f64, String> {
        match self {
            Self::Number(v) => Ok(*v),
            Self::Null => Ok(f64::NAN),
            Self::Text(t) => t.trim().parse().map_err(|_| format!("`{t}` is not a number")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointFile {
    pub label: String,
    pub f: Vec<Entry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub p: usize,
    pub points: Vec<PointFile>,
}

impl InstanceFile {
    pub fn into_instance(self) -> CliResult<DiscreteInstance> {
        let mut points = Vec::with_capacity(self.points.len());
        for pt in self.points {
            let f = pt
                .f
                .iter()
                .map(Entry::value)
                .collect::<Result<Vec<f64>, _>>()
                .map_err(|m| CliError::Usage(format!("point `{}`: {m}", pt.label)))?;
            points.push((pt.label, f));
        }
        validate_instance(RawInstance { p: self.p, points }).map_err(CliError::InvalidInstance)
    }

    pub fn from_instance(instance: &DiscreteInstance) -> Self {
        Self {
            p: instance.p(),
            points: instance
                .points()
                .iter()
                .map(|pt| PointFile { label: pt.label.clone(), f: pt.f.iter().map(|&v| Entry::Number(v)).collect() })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariableFile {
    pub name: String,
    #[serde(default)]
    pub lo: Option<f64>,
    #[serde(default)]
    pub hi: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyticFile {
    pub variables: Vec<VariableFile>,
    pub objectives: Vec<Expression>,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_samples() -> usize {
    DEFAULT_SAMPLES
}

impl AnalyticFile {
    pub fn into_analytic(self) -> CliResult<AnalyticInstance> {
        let vars = self.variables.into_iter().map(|v| Variable::new(v.name, v.lo, v.hi)).collect();
        Ok(AnalyticInstance::new(vars, self.objectives, self.samples)?)
    }

    pub fn from_analytic(analytic: &AnalyticInstance) -> Self {
        Self {
            variables: analytic
                .variables()
                .iter()
                .map(|v| VariableFile { name: v.name.clone(), lo: v.lo, hi: v.hi })
                .collect(),
            objectives: analytic.objectives().to_vec(),
            samples: analytic.default_samples(),
        }
    }
}

type Interval = [Option<f64>; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformFile {
    pub kind: TransformKind,
    pub components: Vec<Expression>,
    pub domain: Vec<Interval>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse: Option<Vec<Expression>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse_domain: Option<Vec<Interval>>,
}

fn interval(i: &Interval) -> (f64, f64) {
    (i[0].unwrap_or(f64::NEG_INFINITY), i[1].unwrap_or(f64::INFINITY))
}

impl TransformFile {
    pub fn into_spec(self) -> CliResult<TransformSpec> {
        let domain = self.domain.iter().map(interval).collect();
        let spec = TransformSpec::new(self.kind, self.components, domain)?;
        Ok(match self.inverse {
            Some(inv) => {
                let dom = self.inverse_domain.map(|d| d.iter().map(interval).collect());
                spec.with_inverse(inv, dom)?
            }
            None => spec,
        })
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read { path: path.into(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.into(), source })
}

pub fn load_instance(path: &Path) -> CliResult<DiscreteInstance> {
    read_json::<InstanceFile>(path)?.into_instance()
}

pub fn load_analytic(path: &Path) -> CliResult<AnalyticInstance> {
    read_json::<AnalyticFile>(path)?.into_analytic()
}

pub fn load_transform(path: &Path) -> CliResult<TransformSpec> {
    read_json::<TransformFile>(path)?.into_spec()
}

/// Writes `text` to `path`, or to stdout when `path` is `None`. A newline
/// is appended unless `text` already ends with one.
pub fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    let mut owned;
    let mut text = text;
    if !text.ends_with('\n') {
        owned = String::with_capacity(text.len() + 1);
        owned.push_str(text);
        owned.push('\n');
        text = &owned;
    }
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Write { path: p.into(), source }),
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
                // a closed reader (e.g. `| head`) is not an error of ours
                Err(e) if e.kind() != ErrorKind::BrokenPipe => {
                    Err(CliError::Write { path: "<stdout>".into(), source: e })
                }
                _ => Ok(()),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_round_trip() {
        let text = r#"{"p":2,"points":[{"label":"a","f":[0,3]},{"label":"b","f":[1,1]}]}"#;
        let file: InstanceFile = serde_json::from_str(text).unwrap();
        let inst = file.into_instance().unwrap();
        assert_eq!(inst.len(), 2);
        let back = serde_json::to_string(&InstanceFile::from_instance(&inst)).unwrap();
        assert_eq!(back, r#"{"p":2,"points":[{"label":"a","f":[0.0,3.0]},{"label":"b","f":[1.0,1.0]}]}"#);
    }

    #[test]
    fn non_finite_entries_reach_validation() {
        let text = r#"{"p":2,"points":[{"label":"a","f":[0,"NaN"]},{"label":"b","f":[null,1]}]}"#;
        let file: InstanceFile = serde_json::from_str(text).unwrap();
        match file.into_instance() {
            Err(CliError::InvalidInstance(v)) => assert_eq!(v.len(), 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn transform_with_null_bounds() {
        let text = r#"{"kind":"general","components":["sqrt(y1)","y2"],"domain":[[0,null],[null,null]]}"#;
        let spec = serde_json::from_str::<TransformFile>(text).unwrap().into_spec().unwrap();
        assert_eq!(spec.domain()[0], (0.0, f64::INFINITY));
        assert_eq!(spec.domain()[1], (f64::NEG_INFINITY, f64::INFINITY));
    }

    #[test]
    fn analytic_defaults() {
        let text = r#"{"variables":[{"name":"x","lo":null}],"objectives":["-exp(x)","-exp(-x)"]}"#;
        let a = serde_json::from_str::<AnalyticFile>(text).unwrap().into_analytic().unwrap();
        assert_eq!(a.default_samples(), DEFAULT_SAMPLES);
        assert!(a.has_unbounded_side());
    }
}
