//! Parametric sweeps of scalarizations and the conic coverage construction.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::certify::certify_henig;
use crate::error::{Error, Result};
use crate::instance::{efficient_set, DiscreteInstance};
use crate::real::ExtendedReal;
use crate::scalarize::{
    check_param_validity, solve_scalarization, ScalarizationSpec, Scalarizer, SolveResult, ValidityVerdict,
};

/// Cap on the Henig parameter used by [`cover_conic`].
pub const DELTA_CAP: f64 = 1e3;

/// A scalarization parameter that a grid axis can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum AxisName {
    Lambda,
    Alpha,
    Exponent,
    Reference,
    Utopia,
    AnchorA,
    DirectionR,
    Bound,
}

impl AxisName {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Lambda => "lambda",
            Self::Alpha => "alpha",
            Self::Exponent => "exponent",
            Self::Reference => "reference",
            Self::Utopia => "utopia",
            Self::AnchorA => "anchor_a",
            Self::DirectionR => "direction_r",
            Self::Bound => "bound",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(untagged))]
pub enum AxisValue {
    Scalar(f64),
    Vector(Vec<f64>),
}

impl AxisValue {
    fn as_slice(&self) -> &[f64] {
        match self {
            Self::Scalar(v) => core::slice::from_ref(v),
            Self::Vector(v) => v,
        }
    }

    fn total_cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (self.as_slice(), other.as_slice());
        for (x, y) in a.iter().zip(b) {
            match x.total_cmp(y) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        a.len().cmp(&b.len())
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GridAxis {
    pub name: AxisName,
    pub values: Vec<AxisValue>,
}

/// A base spec and axes whose cartesian product overrides its parameters.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ParamGrid {
    #[cfg_attr(feature = "serde", serde(flatten))]
    pub base: ScalarizationSpec,
    pub axes: Vec<GridAxis>,
}

/// One grid point: the chosen axis values, in axis-name order, and the spec.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GridPoint {
    pub params: Vec<(AxisName, AxisValue)>,
    pub spec: ScalarizationSpec,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SweepRow {
    pub params: Vec<(AxisName, AxisValue)>,
    pub spec: ScalarizationSpec,
    pub validity: ValidityVerdict,
    pub result: SolveResult,
}

fn wrong_kind(name: AxisName, expected: &str) -> Error {
    Error::InvalidGrid(format!("axis `{}` takes {expected} values", name.as_str()))
}

fn set_param(spec: &mut ScalarizationSpec, name: AxisName, value: &AxisValue) -> Result<()> {
    let vector = || match value {
        AxisValue::Vector(v) => Ok(v.clone()),
        AxisValue::Scalar(_) => Err(wrong_kind(name, "vector")),
    };
    let scalar = || match value {
        AxisValue::Scalar(v) => Ok(*v),
        AxisValue::Vector(_) => Err(wrong_kind(name, "scalar")),
    };
    let method = spec.method();
    let slot_missing =
        || Error::InvalidGrid(format!("method `{method}` has no parameter `{}`", name.as_str()));
    if name == AxisName::Bound {
        spec.bound = Some(vector()?);
        return Ok(());
    }
    match (&mut spec.function, name) {
        (Scalarizer::WeightedSum { lambda }, AxisName::Lambda)
        | (Scalarizer::Compromise { lambda, .. }, AxisName::Lambda)
        | (Scalarizer::Conic { lambda, .. }, AxisName::Lambda)
        | (Scalarizer::TchebycheffMod { lambda, .. }, AxisName::Lambda) => *lambda = vector()?,
        (Scalarizer::Conic { alpha, .. }, AxisName::Alpha)
        | (Scalarizer::TchebycheffMod { alpha, .. }, AxisName::Alpha) => *alpha = scalar()?,
        (Scalarizer::Compromise { exponent, .. }, AxisName::Exponent) => *exponent = scalar()?,
        (Scalarizer::Conic { reference, .. }, AxisName::Reference) => *reference = vector()?,
        (Scalarizer::Compromise { utopia, .. }, AxisName::Utopia)
        | (Scalarizer::TchebycheffMod { utopia, .. }, AxisName::Utopia) => *utopia = Some(vector()?),
        (Scalarizer::PascolettiSerafini { anchor_a, .. }, AxisName::AnchorA) => *anchor_a = vector()?,
        (Scalarizer::PascolettiSerafini { direction_r, .. }, AxisName::DirectionR) => *direction_r = vector()?,
        _ => return Err(slot_missing()),
    }
    Ok(())
}

fn canonical_cmp(a: &[(AxisName, AxisValue)], b: &[(AxisName, AxisValue)]) -> Ordering {
    for ((na, va), (nb, vb)) in a.iter().zip(b) {
        match na.cmp(nb).then_with(|| va.total_cmp(vb)) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

impl ParamGrid {
    /// Every grid point, validated against `p`, in canonical order (axes by
    /// name, then values lexicographically), whatever the axis order.
    pub fn points(&self, p: usize) -> Result<Vec<GridPoint>> {
        let mut axes: Vec<&GridAxis> = self.axes.iter().collect();
        axes.sort_by_key(|a| a.name);
        for w in axes.windows(2) {
            if w[0].name == w[1].name {
                return Err(Error::InvalidGrid(format!("axis `{}` appears twice", w[0].name.as_str())));
            }
        }
        if let Some(empty) = axes.iter().find(|a| a.values.is_empty()) {
            return Err(Error::InvalidGrid(format!("axis `{}` has no values", empty.name.as_str())));
        }
        let total: usize = axes.iter().map(|a| a.values.len()).product();
        let mut out = Vec::with_capacity(total);
        let mut index = alloc::vec![0usize; axes.len()];
        for _ in 0..total {
            let mut spec = self.base.clone();
            let mut params = Vec::with_capacity(axes.len());
            for (axis, &k) in axes.iter().zip(&index) {
                set_param(&mut spec, axis.name, &axis.values[k])?;
                params.push((axis.name, axis.values[k].clone()));
            }
            spec.validate(p).map_err(|e| Error::InvalidGrid(format!("{e}")))?;
            out.push(GridPoint { params, spec });
            for d in (0..index.len()).rev() {
                index[d] += 1;
                if index[d] < axes[d].values.len() {
                    break;
                }
                index[d] = 0;
            }
        }
        out.sort_by(|a, b| canonical_cmp(&a.params, &b.params));
        Ok(out)
    }
}

/// Solves one grid point.
pub fn solve_point(instance: &DiscreteInstance, point: GridPoint) -> Result<SweepRow> {
    let result = solve_scalarization(&point.spec, instance)?;
    let validity = check_param_validity(&point.spec, instance);
    Ok(SweepRow { params: point.params, spec: point.spec, validity, result })
}

pub fn sweep(instance: &DiscreteInstance, grid: &ParamGrid) -> Result<Vec<SweepRow>> {
    grid.points(instance.p())?.into_iter().map(|pt| solve_point(instance, pt)).collect()
}

/// Union of minimizer sets over the rows.
pub fn generated_frontier(rows: &[SweepRow]) -> BTreeSet<String> {
    rows.iter().flat_map(|r| r.result.minimizers.iter().cloned()).collect()
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ConicWitness {
    pub spec: ScalarizationSpec,
    pub alpha: f64,
    /// Henig supremum of the point.
    pub delta_sup: ExtendedReal,
    /// `min(delta_sup, DELTA_CAP)`.
    pub delta: f64,
    /// Open interval `(1 / (2δ + 1), 1)` the construction draws `α` from.
    pub alpha_interval: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CoverageReport {
    pub efficient_labels: BTreeSet<String>,
    pub covered: BTreeMap<String, ConicWitness>,
    pub uncovered: BTreeSet<String>,
    pub coverage_ratio: f64,
}

/// The conic construction for one point: `λ = e`, `y^r = f(x̂)` and `α` the
/// midpoint of `(1 / (2δ + 1), 1)` with `δ` the capped Henig supremum.
pub fn conic_witness(instance: &DiscreteInstance, label: &str) -> Result<ConicWitness> {
    let henig = certify_henig(instance, label)?;
    let delta = match henig.delta_sup {
        ExtendedReal::Finite(d) => d.min(DELTA_CAP),
        _ => DELTA_CAP,
    };
    let lo = 1.0 / (2.0 * delta + 1.0);
    let alpha = 0.5 * (lo + 1.0);
    let spec = ScalarizationSpec::new(Scalarizer::Conic {
        lambda: alloc::vec![1.0; instance.p()],
        alpha,
        reference: instance.get(label)?.f.to_vec(),
    });
    Ok(ConicWitness { spec, alpha, delta_sup: henig.delta_sup, delta, alpha_interval: (lo, 1.0) })
}

/// Runs the conic construction for every efficient point and records which
/// points are among the minimizers (ties included) of their own spec.
pub fn cover_conic(instance: &DiscreteInstance) -> Result<CoverageReport> {
    let efficient_labels = efficient_set(instance);
    let mut covered = BTreeMap::new();
    let mut uncovered = BTreeSet::new();
    for label in &efficient_labels {
        let witness = conic_witness(instance, label)?;
        if solve_scalarization(&witness.spec, instance)?.minimizers.contains(label) {
            covered.insert(label.clone(), witness);
        } else {
            uncovered.insert(label.clone());
        }
    }
    let coverage_ratio = covered.len() as f64 / efficient_labels.len() as f64;
    Ok(CoverageReport { efficient_labels, covered, uncovered, coverage_ratio })
}

/// Fraction of efficient points that minimize at least one of `specs`.
pub fn coverage_of_specs(instance: &DiscreteInstance, specs: &[ScalarizationSpec]) -> Result<f64> {
    let efficient = efficient_set(instance);
    let mut hit = BTreeSet::new();
    for spec in specs {
        for label in solve_scalarization(spec, instance)?.minimizers {
            if efficient.contains(&label) {
                hit.insert(label);
            }
        }
    }
    Ok(hit.len() as f64 / efficient.len() as f64)
}

/// Fraction of efficient points that minimize at least one grid point.
pub fn coverage_ratio(instance: &DiscreteInstance, grid: &ParamGrid) -> Result<f64> {
    let specs: Vec<ScalarizationSpec> = grid.points(instance.p())?.into_iter().map(|g| g.spec).collect();
    coverage_of_specs(instance, &specs)
}
