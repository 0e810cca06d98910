use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::Expression;
use crate::error::{Error, Result};
use crate::instance::DiscreteInstance;
use crate::math;

/// Sampled problems are kept at desk scale.
pub const MAX_DIMENSION: usize = 3;

/// A decision variable with optional bounds; `None` marks an unbounded side.
#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
}

impl Variable {
    pub fn new(name: impl Into<String>, lo: Option<f64>, hi: Option<f64>) -> Self {
        Self { name: name.into(), lo, hi }
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_some() && self.hi.is_some()
    }

    fn contains(&self, x: f64) -> bool {
        self.lo.map_or(true, |lo| x >= lo) && self.hi.map_or(true, |hi| x <= hi)
    }
}

/// Objectives given as expressions over a (possibly unbounded) box.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticInstance {
    variables: Vec<Variable>,
    objectives: Vec<Expression>,
    default_samples: usize,
}

/// How finely each axis is sampled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Resolution {
    /// Points per axis, endpoints included.
    Points(usize),
    /// Target spacing; the point count is `round(width / h) + 1`.
    Spacing(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleSpec {
    pub resolution: Resolution,
    /// Radius used in place of missing bounds.
    pub truncation: Option<f64>,
}

/// A sampled instance together with the decision-space node of every point.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledInstance {
    pub instance: DiscreteInstance,
    pub nodes: Vec<Vec<f64>>,
}

impl SampledInstance {
    /// Index of the node nearest to `x` (Euclidean; first on ties).
    pub fn nearest(&self, x: &[f64]) -> usize {
        let dist = |node: &[f64]| node.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (k, node) in self.nodes.iter().enumerate() {
            let d = dist(node);
            if d < best_d {
                best = k;
                best_d = d;
            }
        }
        best
    }
}

impl AnalyticInstance {
    pub fn new(variables: Vec<Variable>, objectives: Vec<Expression>, default_samples: usize) -> Result<Self> {
        if objectives.len() < 2 {
            return Err(Error::Sampling(format!(
                "at least two objectives are required, got {}",
                objectives.len()
            )));
        }
        if variables.is_empty() {
            return Err(Error::Sampling("no decision variables".into()));
        }
        for (k, v) in variables.iter().enumerate() {
            if variables[..k].iter().any(|w| w.name == v.name) {
                return Err(Error::Sampling(format!("duplicate variable `{}`", v.name)));
            }
            let finite = |b: Option<f64>| b.map_or(true, f64::is_finite);
            if !finite(v.lo) || !finite(v.hi) {
                return Err(Error::Sampling(format!("bounds of `{}` must be finite or absent", v.name)));
            }
            if let (Some(lo), Some(hi)) = (v.lo, v.hi) {
                if !(lo < hi) {
                    return Err(Error::Sampling(format!("empty interval for `{}`", v.name)));
                }
            }
        }
        for (i, obj) in objectives.iter().enumerate() {
            for name in obj.variables() {
                if !variables.iter().any(|v| v.name == name) {
                    return Err(Error::Sampling(format!("objective {i} uses undeclared variable `{name}`")));
                }
            }
        }
        Ok(Self { variables, objectives, default_samples })
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn objectives(&self) -> &[Expression] {
        &self.objectives
    }

    pub fn p(&self) -> usize {
        self.objectives.len()
    }

    pub fn default_samples(&self) -> usize {
        self.default_samples
    }

    pub fn has_unbounded_side(&self) -> bool {
        self.variables.iter().any(|v| !v.is_bounded())
    }

    /// Whether `x` satisfies the declared bounds.
    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.variables.len() && self.variables.iter().zip(x).all(|(v, &xi)| v.contains(xi))
    }

    /// Same box, new objectives.
    pub fn with_objectives(&self, objectives: Vec<Expression>) -> Result<Self> {
        Self::new(self.variables.clone(), objectives, self.default_samples)
    }

    /// Evaluates all objectives at `x`.
    pub fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>, super::EvalError> {
        let bindings: Vec<(&str, f64)> = self.variables.iter().map(|v| v.name.as_str()).zip(x.iter().copied()).collect();
        self.objectives.iter().map(|o| o.eval(&bindings)).collect()
    }

    /// Sampling interval of every axis under the given truncation.
    pub fn sample_box(&self, truncation: Option<f64>) -> Result<Vec<(f64, f64)>> {
        if let Some(t) = truncation {
            if !(t > 0.0) || !t.is_finite() {
                return Err(Error::Sampling(format!("truncation must be positive, got {t}")));
            }
        }
        self.variables
            .iter()
            .map(|v| {
                let need = || {
                    truncation.ok_or_else(|| {
                        Error::Sampling(format!("variable `{}` is unbounded; a truncation is required", v.name))
                    })
                };
                let lo = match v.lo {
                    Some(lo) => lo,
                    None => -need()?,
                };
                let hi = match v.hi {
                    Some(hi) => hi,
                    None => need()?,
                };
                if lo >= hi {
                    return Err(Error::Sampling(format!("truncated interval of `{}` is empty", v.name)));
                }
                Ok((lo, hi))
            })
            .collect()
    }

    /// Uniform grid with `n` points per axis, both endpoints included.
    pub fn sample(&self, n: usize, truncation: Option<f64>) -> Result<SampledInstance> {
        self.sample_with(&SampleSpec { resolution: Resolution::Points(n), truncation })
    }

    pub fn sample_with(&self, spec: &SampleSpec) -> Result<SampledInstance> {
        if self.variables.len() > MAX_DIMENSION {
            return Err(Error::Sampling(format!(
                "{} decision variables exceed the supported maximum of {MAX_DIMENSION}",
                self.variables.len()
            )));
        }
        let bounds = self.sample_box(spec.truncation)?;
        let axes: Vec<Vec<f64>> = bounds
            .iter()
            .map(|&(lo, hi)| {
                let n = match spec.resolution {
                    Resolution::Points(n) => n,
                    Resolution::Spacing(h) => {
                        if !(h > 0.0) || !h.is_finite() {
                            return Err(Error::Sampling(format!("spacing must be positive, got {h}")));
                        }
                        (math::round((hi - lo) / h) as usize).saturating_add(1)
                    }
                };
                if n < 2 {
                    return Err(Error::Sampling(format!("need at least 2 points per axis, got {n}")));
                }
                Ok(axis(lo, hi, n))
            })
            .collect::<Result<_>>()?;

        let total: usize = axes.iter().map(Vec::len).product();
        let mut nodes = Vec::with_capacity(total);
        let mut labels = Vec::with_capacity(total);
        let mut vectors = Vec::with_capacity(total);
        let mut index = alloc::vec![0usize; axes.len()];
        for _ in 0..total {
            let node: Vec<f64> = index.iter().zip(&axes).map(|(&k, ax)| ax[k]).collect();
            let label = self.label(&index);
            let f = self.evaluate(&node).map_err(|e| Error::eval(format!("at grid node {label}"), e))?;
            labels.push(label);
            vectors.push(f);
            nodes.push(node);
            // odometer, last axis fastest
            for d in (0..index.len()).rev() {
                index[d] += 1;
                if index[d] < axes[d].len() {
                    break;
                }
                index[d] = 0;
            }
        }
        let instance = DiscreteInstance::new(self.p(), labels.into_iter().zip(vectors))?;
        Ok(SampledInstance { instance, nodes })
    }

    fn label(&self, index: &[usize]) -> String {
        let mut out = String::new();
        for (d, (v, k)) in self.variables.iter().zip(index).enumerate() {
            if d > 0 {
                out.push(',');
            }
            out.push_str(&format!("{}[{k}]", v.name));
        }
        out
    }
}

pub(crate) fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let last = (n - 1) as f64;
    (0..n)
        .map(|k| if k == n - 1 { hi } else { lo + (hi - lo) * (k as f64) / last })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::parse_expression;
    use alloc::vec;
    use proptest::prelude::*;

    fn xsq() -> AnalyticInstance {
        AnalyticInstance::new(
            vec![Variable::new("x", Some(-1.0), Some(0.0))],
            vec![parse_expression("x^2").unwrap(), parse_expression("x").unwrap()],
            1001,
        )
        .unwrap()
    }

    fn exp_pair() -> AnalyticInstance {
        AnalyticInstance::new(
            vec![Variable::new("x", None, None)],
            vec![parse_expression("-exp(x)").unwrap(), parse_expression("-exp(-x)").unwrap()],
            1001,
        )
        .unwrap()
    }

    #[test]
    fn three_point_grid() {
        let s = xsq().sample(3, None).unwrap();
        let fs: Vec<&[f64]> = s.instance.points().iter().map(|p| p.f.as_slice()).collect();
        assert_eq!(fs, vec![&[1.0, -1.0][..], &[0.25, -0.5][..], &[0.0, 0.0][..]]);
        assert_eq!(s.instance.points()[1].label, "x[1]");
    }

    #[test]
    fn truncated_unbounded_grid() {
        let s = exp_pair().sample(11, Some(5.0)).unwrap();
        let xs: Vec<f64> = s.nodes.iter().map(|n| n[0]).collect();
        assert_eq!(xs, (-5..=5).map(f64::from).collect::<Vec<_>>());
        let first = s.instance.points()[0].f.as_slice();
        assert_eq!(first, &[-libm::exp(-5.0), -libm::exp(5.0)]);
    }

    #[test]
    fn sampling_errors() {
        assert!(xsq().sample(1, None).is_err());
        assert!(exp_pair().sample(11, None).is_err());
        assert!(exp_pair().sample(11, Some(0.0)).is_err());
        let bad = AnalyticInstance::new(
            vec![Variable::new("x", Some(-1.0), Some(1.0))],
            vec![parse_expression("sqrt(x)").unwrap(), parse_expression("x").unwrap()],
            3,
        )
        .unwrap();
        let err = bad.sample(3, None).unwrap_err();
        assert!(alloc::format!("{err}").contains("x[0]"));
    }

    #[test]
    fn construction_is_validated() {
        let one = AnalyticInstance::new(vec![Variable::new("x", Some(0.0), Some(1.0))], vec![parse_expression("x").unwrap()], 3);
        assert!(one.is_err());
        let undeclared = AnalyticInstance::new(
            vec![Variable::new("x", Some(0.0), Some(1.0))],
            vec![parse_expression("x").unwrap(), parse_expression("y").unwrap()],
            3,
        );
        assert!(undeclared.is_err());
        let four = AnalyticInstance::new(
            ["a", "b", "c", "d"].iter().map(|n| Variable::new(*n, Some(0.0), Some(1.0))).collect(),
            vec![parse_expression("a+b").unwrap(), parse_expression("c+d").unwrap()],
            2,
        )
        .unwrap();
        assert!(four.sample(2, None).is_err());
    }

    #[test]
    fn spacing_and_two_dimensional_labels() {
        let inst = AnalyticInstance::new(
            vec![Variable::new("x", Some(0.0), Some(1.0)), Variable::new("y", Some(0.0), Some(2.0))],
            vec![parse_expression("x").unwrap(), parse_expression("y").unwrap()],
            3,
        )
        .unwrap();
        let s = inst.sample_with(&SampleSpec { resolution: Resolution::Spacing(0.5), truncation: None }).unwrap();
        assert_eq!(s.instance.len(), 3 * 5);
        assert_eq!(s.instance.points()[6].label, "x[1],y[1]");
        assert_eq!(s.nodes[6], vec![0.5, 0.5]);
        assert_eq!(s.nearest(&[0.49, 0.52]), 6);
    }

    proptest! {
        #[test]
        fn endpoints_always_present(lo in -5.0f64..0.0, width in 0.1f64..5.0, n in 2usize..60) {
            let ax = axis(lo, lo + width, n);
            prop_assert_eq!(ax[0], lo);
            prop_assert_eq!(ax[n - 1], lo + width);
        }

        #[test]
        fn refinement_gives_superset(m in 2usize..20, factor in 1usize..6) {
            let coarse = axis(-1.0, 0.0, m);
            let fine = axis(-1.0, 0.0, (m - 1) * factor + 1);
            for c in coarse {
                prop_assert!(fine.iter().any(|f| (f - c).abs() <= 1e-12));
            }
        }
    }
}
