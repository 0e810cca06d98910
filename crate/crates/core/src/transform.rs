//! Objective-space transformations `φ` and audits of the conditions under
//! which minimizing `φ ∘ f` keeps the properly efficient solutions of `f`.
//!
//! All derivative-based audits use single finite-difference Jacobians on
//! grids, so they describe smooth maps only.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::analytic::{AnalyticInstance, Expression, SampledInstance};
use crate::certify::{
    divergence_over_samples, geoffrion_constant, validate_schedule, Classification, DivergenceReport, Refinement,
    SampleControl,
};
use crate::diff::{self, Stencil};
use crate::error::{Error, Result};
use crate::instance::{efficient_indices, efficient_set, objective_ranges, DiscreteInstance};
use crate::math;
use crate::order::ObjectiveVector;

/// Entries with magnitude at most this count as zero in Jacobian audits.
pub const ZERO_TOL: f64 = 1e-9;

/// Grid size per component for the increasing-transform conditions.
pub const ZAREPISHEH_GRID: usize = 201;

/// A derivative counts as positive above this fraction of the largest
/// derivative magnitude on the interval.
pub const DERIVATIVE_REL_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum TransformKind {
    /// Output `i` is a function `g_i` of input `i` only, written in `y`.
    Componentwise,
    /// Every output may use all inputs `y1, …, yp`.
    General,
}

/// A transformation with its domain box and an optional declared inverse.
/// Box sides may be infinite.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformSpec {
    kind: TransformKind,
    components: Vec<Expression>,
    domain: Vec<(f64, f64)>,
    inverse: Option<Vec<Expression>>,
    inverse_domain: Vec<(f64, f64)>,
}

fn y_name(i: usize) -> String {
    format!("y{}", i + 1)
}

fn check_box(name: &str, domain: &[(f64, f64)], p: usize) -> Result<()> {
    if domain.len() != p {
        return Err(Error::InvalidTransform(format!("{name} has {} intervals, expected {p}", domain.len())));
    }
    for (i, &(lo, hi)) in domain.iter().enumerate() {
        if lo.is_nan() || hi.is_nan() || !(lo < hi) {
            return Err(Error::InvalidTransform(format!("{name} interval {i} is empty or undefined")));
        }
    }
    Ok(())
}

fn check_variables(kind: TransformKind, exprs: &[Expression]) -> Result<()> {
    let p = exprs.len();
    for (i, e) in exprs.iter().enumerate() {
        for name in e.variables() {
            let ok = match kind {
                TransformKind::Componentwise => name == "y" || name == y_name(i),
                TransformKind::General => (0..p).any(|j| name == y_name(j)),
            };
            if !ok {
                return Err(Error::InvalidTransform(format!("component {i} uses unavailable variable `{name}`")));
            }
        }
    }
    Ok(())
}

impl TransformSpec {
    pub fn new(kind: TransformKind, components: Vec<Expression>, domain: Vec<(f64, f64)>) -> Result<Self> {
        let p = components.len();
        if p < 2 {
            return Err(Error::InvalidTransform(format!("at least two components are required, got {p}")));
        }
        check_box("domain", &domain, p)?;
        check_variables(kind, &components)?;
        let unbounded = alloc::vec![(f64::NEG_INFINITY, f64::INFINITY); p];
        Ok(Self { kind, components, domain, inverse: None, inverse_domain: unbounded })
    }

    /// Componentwise map with the same `g` in every slot.
    pub fn uniform(g: Expression, p: usize, domain: (f64, f64)) -> Result<Self> {
        Self::new(TransformKind::Componentwise, alloc::vec![g; p], alloc::vec![domain; p])
    }

    /// Attaches a declared inverse with its domain (defaults to all of `R^p`).
    pub fn with_inverse(mut self, inverse: Vec<Expression>, domain: Option<Vec<(f64, f64)>>) -> Result<Self> {
        let p = self.p();
        if inverse.len() != p {
            return Err(Error::InvalidTransform(format!("inverse has {} components, expected {p}", inverse.len())));
        }
        check_variables(self.kind, &inverse)?;
        if let Some(d) = domain {
            check_box("inverse domain", &d, p)?;
            self.inverse_domain = d;
        }
        self.inverse = Some(inverse);
        Ok(self)
    }

    pub fn p(&self) -> usize {
        self.components.len()
    }

    pub fn kind(&self) -> TransformKind {
        self.kind
    }

    pub fn components(&self) -> &[Expression] {
        &self.components
    }

    pub fn domain(&self) -> &[(f64, f64)] {
        &self.domain
    }

    pub fn inverse(&self) -> Option<&[Expression]> {
        self.inverse.as_deref()
    }

    pub fn inverse_domain(&self) -> &[(f64, f64)] {
        &self.inverse_domain
    }

    /// The declared inverse as a transform on its own domain.
    pub fn inverse_spec(&self) -> Option<Self> {
        let inverse = self.inverse.clone()?;
        Some(Self {
            kind: self.kind,
            components: inverse,
            domain: self.inverse_domain.clone(),
            inverse: Some(self.components.clone()),
            inverse_domain: self.domain.clone(),
        })
    }

    /// Component `i` as an expression over `y1, …, yp`.
    pub fn component_expression(&self, i: usize) -> Expression {
        normalized(self.kind, &self.components[i], i)
    }

    pub fn in_domain(&self, y: &[f64]) -> bool {
        y.len() == self.p() && y.iter().zip(&self.domain).all(|(v, (lo, hi))| *v >= *lo && *v <= *hi)
    }

    /// `φ(y)`, without the domain check.
    pub fn eval(&self, y: &[f64]) -> Result<Vec<f64>> {
        eval_components(self.kind, &self.components, y)
    }

    /// `φ^{-1}(z)` via the declared inverse.
    pub fn eval_inverse(&self, z: &[f64]) -> Result<Vec<f64>> {
        let inverse = self
            .inverse
            .as_ref()
            .ok_or_else(|| Error::InvalidTransform("no inverse declared".into()))?;
        eval_components(self.kind, inverse, z)
    }

    fn dimension(&self, p: usize) -> Result<()> {
        if p != self.p() {
            return Err(Error::DimensionMismatch { expected: self.p(), found: p });
        }
        Ok(())
    }
}

fn normalized(kind: TransformKind, e: &Expression, i: usize) -> Expression {
    match kind {
        TransformKind::Componentwise => e.substitute(&[("y", &Expression::Variable(y_name(i)))]),
        TransformKind::General => e.clone(),
    }
}

fn eval_components(kind: TransformKind, exprs: &[Expression], y: &[f64]) -> Result<Vec<f64>> {
    if y.len() != exprs.len() {
        return Err(Error::DimensionMismatch { expected: exprs.len(), found: y.len() });
    }
    let names: Vec<String> = (0..y.len()).map(y_name).collect();
    exprs
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let ctx = || format!("transform component {i} at {y:?}");
            match kind {
                TransformKind::Componentwise => e.eval(&[("y", y[i]), (names[i].as_str(), y[i])]),
                TransformKind::General => {
                    let b: Vec<(&str, f64)> = names.iter().map(String::as_str).zip(y.iter().copied()).collect();
                    e.eval(&b)
                }
            }
            .map_err(|err| Error::eval(ctx(), err))
        })
        .collect()
}

/// Pointwise image of a finite instance; labels are kept.
pub fn apply_transform(tspec: &TransformSpec, instance: &DiscreteInstance) -> Result<DiscreteInstance> {
    tspec.dimension(instance.p())?;
    let mut out = Vec::with_capacity(instance.len());
    for pt in instance.points() {
        if !tspec.in_domain(&pt.f) {
            return Err(Error::Domain(format!(
                "point `{}` with f = {:?} lies outside the transform domain",
                pt.label,
                pt.f.as_slice()
            )));
        }
        let z = tspec
            .eval(&pt.f)
            .map_err(|e| Error::Domain(format!("point `{}`: {e}", pt.label)))?;
        out.push(ObjectiveVector::new(z)?);
    }
    Ok(instance.with_vectors(out))
}

/// The analytic instance with objectives `φ(f(x))` as composed expressions.
pub fn apply_transform_analytic(tspec: &TransformSpec, analytic: &AnalyticInstance) -> Result<AnalyticInstance> {
    tspec.dimension(analytic.p())?;
    let names: Vec<String> = (0..tspec.p()).map(y_name).collect();
    let replacements: Vec<(&str, &Expression)> =
        names.iter().map(String::as_str).zip(analytic.objectives().iter()).collect();
    let composed = (0..tspec.p()).map(|i| tspec.component_expression(i).substitute(&replacements)).collect();
    analytic.with_objectives(composed)
}

fn sampled_image(tspec: &TransformSpec, sample: &SampledInstance) -> Result<SampledInstance> {
    Ok(SampledInstance { instance: apply_transform(tspec, &sample.instance)?, nodes: sample.nodes.clone() })
}

/// `max_i |φ^{-1}(φ(y))_i - y_i|`.
pub fn round_trip_error(tspec: &TransformSpec, y: &[f64]) -> Result<f64> {
    let back = tspec.eval_inverse(&tspec.eval(y)?)?;
    Ok(back.iter().zip(y).map(|(a, b)| math::abs(a - b)).fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum JacobianCondition {
    NegativeEntry,
    ZeroColumn,
    ZeroDiagonal,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct JacobianWitness {
    pub condition: JacobianCondition,
    pub node: Vec<f64>,
    pub jacobian: Vec<Vec<f64>>,
    /// A nonzero `d >= 0` with `M d = 0` when the kernel condition fails.
    pub kernel_direction: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct JacobianAudit {
    pub nonneg: bool,
    /// `None` when `nonneg` fails: the zero-column test is only sound for
    /// nonnegative matrices.
    #[cfg_attr(feature = "serde", serde(serialize_with = "not_evaluated"))]
    pub kernel_trivial: Option<bool>,
    pub nodes_checked: usize,
    /// First witness per failed condition.
    pub witnesses: Vec<JacobianWitness>,
}

#[cfg(feature = "serde")]
fn not_evaluated<S: serde::Serializer>(v: &Option<bool>, s: S) -> core::result::Result<S::Ok, S::Error> {
    match v {
        Some(b) => s.serialize_bool(*b),
        None => s.serialize_str("not-evaluated"),
    }
}

/// Whether some nonzero `d >= 0` has `M d = 0`, for `M >= 0`: exactly when
/// a column of `M` vanishes. Returns that unit direction.
pub fn nonneg_kernel_direction(m: &[Vec<f64>], zero_tol: f64) -> Option<Vec<f64>> {
    let n = m.first().map_or(0, Vec::len);
    (0..n).find(|&j| m.iter().all(|row| math::abs(row[j]) <= zero_tol)).map(|j| {
        let mut d = alloc::vec![0.0; n];
        d[j] = 1.0;
        d
    })
}

/// Finite-difference Jacobians on a closed grid over the (finite) domain
/// box: checks `M >= 0` everywhere and `ker M ∩ R^p_+ = {0}`.
pub fn check_jacobian_conditions(tspec: &TransformSpec, density: usize) -> Result<JacobianAudit> {
    let p = tspec.p();
    if density < 2 {
        return Err(Error::Domain("grid density must be at least 2".into()));
    }
    if tspec.domain.iter().any(|(lo, hi)| !lo.is_finite() || !hi.is_finite()) {
        return Err(Error::Domain("the Jacobian audit needs a finite domain box".into()));
    }
    let axes: Vec<Vec<f64>> =
        tspec.domain.iter().map(|&(lo, hi)| crate::analytic::sample::axis(lo, hi, density)).collect();
    let total: usize = axes.iter().map(Vec::len).product();
    let mut nonneg = true;
    let mut kernel_ok = true;
    let mut witnesses: Vec<JacobianWitness> = Vec::new();
    let record = |w: JacobianWitness, witnesses: &mut Vec<JacobianWitness>| {
        if !witnesses.iter().any(|v| v.condition == w.condition) {
            witnesses.push(w);
        }
    };
    let mut index = alloc::vec![0usize; p];
    for _ in 0..total {
        let node: Vec<f64> = index.iter().zip(&axes).map(|(&k, ax)| ax[k]).collect();
        let m = diff::jacobian(|y| tspec.eval(y), &node, &tspec.domain)?;
        if m.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite derivative at node {node:?}")));
        }
        if m.iter().flatten().any(|&v| v < -ZERO_TOL) {
            nonneg = false;
            let w = JacobianWitness {
                condition: JacobianCondition::NegativeEntry,
                node: node.clone(),
                jacobian: m.clone(),
                kernel_direction: None,
            };
            record(w, &mut witnesses);
        }
        let failure = match tspec.kind {
            TransformKind::Componentwise => (0..p).find(|&i| !(m[i][i] > ZERO_TOL)).map(|i| {
                let mut d = alloc::vec![0.0; p];
                d[i] = 1.0;
                (JacobianCondition::ZeroDiagonal, d)
            }),
            TransformKind::General => {
                nonneg_kernel_direction(&m, ZERO_TOL).map(|d| (JacobianCondition::ZeroColumn, d))
            }
        };
        if let Some((condition, d)) = failure {
            kernel_ok = false;
            record(JacobianWitness { condition, node, jacobian: m, kernel_direction: Some(d) }, &mut witnesses);
        }
        for d in (0..p).rev() {
            index[d] += 1;
            if index[d] < axes[d].len() {
                break;
            }
            index[d] = 0;
        }
    }
    Ok(JacobianAudit { nonneg, kernel_trivial: nonneg.then_some(kernel_ok), nodes_checked: total, witnesses })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ComponentConditions {
    pub component: usize,
    pub interval: (f64, f64),
    /// Values finite and grid jumps shrinking under refinement.
    pub continuous: bool,
    /// Derivative positive on the closed interval, one-sided at the ends.
    pub positive_derivative: bool,
    /// Values strictly increasing and derivative non-decreasing.
    pub increasing: bool,
    pub min_derivative: f64,
    /// Node where the first failing check failed.
    pub witness: Option<f64>,
}

impl ComponentConditions {
    pub fn pass(&self) -> bool {
        self.continuous && self.positive_derivative && self.increasing
    }
}

fn max_jump(values: &[f64]) -> f64 {
    values.windows(2).map(|w| math::abs(w[1] - w[0])).fold(0.0, f64::max)
}

fn component_conditions(g: impl Fn(f64) -> Result<f64>, component: usize, lo: f64, hi: f64) -> Result<ComponentConditions> {
    let grid = |n: usize| if lo < hi { crate::analytic::sample::axis(lo, hi, n) } else { alloc::vec![lo] };
    let coarse = grid(ZAREPISHEH_GRID);
    let fine = grid(2 * ZAREPISHEH_GRID - 1);
    let values: Vec<f64> = coarse.iter().map(|&s| g(s)).collect::<Result<_>>()?;
    let fine_values: Vec<f64> = fine.iter().map(|&s| g(s)).collect::<Result<_>>()?;
    let mut witness = None;

    // a jump discontinuity keeps its size under refinement; smooth steps halve
    let (jc, jf) = (max_jump(&values), max_jump(&fine_values));
    let continuous = jc == 0.0 || jf <= 0.75 * jc;
    if !continuous {
        let k = fine_values
            .windows(2)
            .position(|w| math::abs(w[1] - w[0]) == jf)
            .unwrap_or(0);
        witness = Some(fine[k]);
    }

    let mut derivs = Vec::with_capacity(coarse.len());
    let mut smooth = Vec::with_capacity(coarse.len());
    for (k, &s) in coarse.iter().enumerate() {
        let kind = if coarse.len() == 1 {
            Stencil::Central
        } else if k == 0 {
            Stencil::Forward
        } else if k + 1 == coarse.len() {
            Stencil::Backward
        } else {
            Stencil::Central
        };
        let d = diff::derivative(&g, s, kind)?;
        let mut ok = true;
        if kind == Stencil::Central {
            let fwd = diff::derivative(&g, s, Stencil::Forward)?;
            let bwd = diff::derivative(&g, s, Stencil::Backward)?;
            ok = math::abs(fwd - bwd) <= 1e-3 * math::abs(d).max(1.0);
        }
        derivs.push(d);
        smooth.push(ok);
    }
    // a one-sided difference of a flat start is O(step), not zero
    let scale = derivs.iter().fold(0.0f64, |m, d| m.max(math::abs(*d)));
    let floor = ZERO_TOL.max(DERIVATIVE_REL_TOL * scale);
    let mut positive = true;
    for (k, &s) in coarse.iter().enumerate() {
        if !(derivs[k] > floor && smooth[k]) {
            positive = false;
            witness.get_or_insert(s);
            break;
        }
    }

    let mut increasing = true;
    for k in 1..coarse.len() {
        let slack = 1e-6 * math::abs(derivs[k]).max(math::abs(derivs[k - 1])).max(1.0);
        if !(values[k] > values[k - 1]) || derivs[k] < derivs[k - 1] - slack {
            increasing = false;
            witness.get_or_insert(coarse[k]);
            break;
        }
    }
    let min_derivative = derivs.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(ComponentConditions {
        component,
        interval: (lo, hi),
        continuous,
        positive_derivative: positive,
        increasing,
        min_derivative,
        witness,
    })
}

/// Continuity, positive derivative, and increasing value and derivative of
/// each `g_i` on the closed interval `[min f_i, max f_i]` of the instance.
pub fn zarepisheh_conditions(tspec: &TransformSpec, instance: &DiscreteInstance) -> Result<Vec<ComponentConditions>> {
    tspec.dimension(instance.p())?;
    zarepisheh_on_intervals(tspec, &objective_ranges(instance))
}

/// As [`zarepisheh_conditions`] on explicit closed intervals.
pub fn zarepisheh_on_intervals(tspec: &TransformSpec, intervals: &[(f64, f64)]) -> Result<Vec<ComponentConditions>> {
    if tspec.kind != TransformKind::Componentwise {
        return Err(Error::InvalidTransform("these conditions apply to componentwise transforms only".into()));
    }
    tspec.dimension(intervals.len())?;
    intervals
        .iter()
        .enumerate()
        .map(|(i, &(lo, hi))| {
            let g = |s: f64| {
                tspec.components[i].eval(&[("y", s), (y_name(i).as_str(), s)]).map_err(|e| Error::eval(format!("g{} at {s}", i + 1), e))
            };
            component_conditions(g, i, lo, hi)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Verdict {
    Preserved,
    Changed,
    DiagnosticDivergenceChanged,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct AnchorComparison {
    pub before: DivergenceReport,
    pub after: DivergenceReport,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PreservationReport {
    pub efficient_before: BTreeSet<String>,
    pub efficient_after: BTreeSet<String>,
    /// Least Geoffrion constant per label efficient before or after.
    #[cfg_attr(feature = "serde", serde(rename = "M_before"))]
    pub m_before: BTreeMap<String, Option<f64>>,
    #[cfg_attr(feature = "serde", serde(rename = "M_after"))]
    pub m_after: BTreeMap<String, Option<f64>>,
    /// Whether the efficient sets agree at each refinement (one entry for
    /// finite instances).
    pub efficient_sets_equal: Vec<bool>,
    pub divergence: Vec<AnchorComparison>,
    pub verdict: Verdict,
    /// The verdict rests on sampled divergence behaviour, not on the exact
    /// efficient sets.
    pub diagnostic: bool,
}

fn m_map(instance: &DiscreteInstance, labels: &BTreeSet<String>) -> BTreeMap<String, Option<f64>> {
    labels
        .iter()
        .map(|l| {
            let idx = instance.index_of(l).expect("labels are shared");
            (l.clone(), geoffrion_constant(instance, idx))
        })
        .collect()
}

fn flipped(a: Classification, b: Classification) -> bool {
    use Classification::*;
    matches!((a, b), (Bounded, Diverging) | (Diverging, Bounded))
}

fn verdict(sets_equal: &[bool], divergence: &[AnchorComparison]) -> (Verdict, bool) {
    if sets_equal.iter().any(|&e| !e) {
        return (Verdict::Changed, false);
    }
    let pairs = || divergence.iter().map(|c| (c.before.classification, c.after.classification));
    if pairs().any(|(a, b)| flipped(a, b)) {
        (Verdict::Changed, true)
    } else if pairs().any(|(a, b)| a != b) {
        (Verdict::DiagnosticDivergenceChanged, true)
    } else {
        (Verdict::Preserved, !divergence.is_empty())
    }
}

fn compare_samples(before: &DiscreteInstance, after: &DiscreteInstance) -> (BTreeSet<String>, BTreeSet<String>, bool) {
    let eb = efficient_set(before);
    let ea = efficient_set(after);
    let equal = eb == ea;
    (eb, ea, equal)
}

/// Exact before/after comparison on a finite instance.
pub fn compare_proper_sets(tspec: &TransformSpec, instance: &DiscreteInstance) -> Result<PreservationReport> {
    let after = apply_transform(tspec, instance)?;
    let (efficient_before, efficient_after, equal) = compare_samples(instance, &after);
    let union: BTreeSet<String> = efficient_before.union(&efficient_after).cloned().collect();
    let (verdict, diagnostic) = verdict(&[equal], &[]);
    Ok(PreservationReport {
        m_before: m_map(instance, &union),
        m_after: m_map(&after, &union),
        efficient_before,
        efficient_after,
        efficient_sets_equal: alloc::vec![equal],
        divergence: Vec::new(),
        verdict,
        diagnostic,
    })
}

/// Samples the analytic instance along `schedule`, transforms each sample
/// pointwise, compares efficient sets at every refinement and divergence
/// behaviour at every anchor. Geoffrion constants are reported for the
/// finest sample.
pub fn compare_proper_sets_analytic(
    tspec: &TransformSpec,
    analytic: &AnalyticInstance,
    schedule: &[Refinement],
    anchors: &[Vec<f64>],
    control: &SampleControl,
) -> Result<PreservationReport> {
    tspec.dimension(analytic.p())?;
    validate_schedule(schedule)?;
    for anchor in anchors {
        if !analytic.contains(anchor) {
            return Err(Error::Domain(format!("anchor {anchor:?} lies outside the variable domain")));
        }
    }
    let before: Vec<SampledInstance> = schedule
        .iter()
        .map(|&s| analytic.sample_with(&control.sample_spec(s)))
        .collect::<Result<_>>()?;
    let after: Vec<SampledInstance> = before.iter().map(|s| sampled_image(tspec, s)).collect::<Result<_>>()?;
    let efficient_sets_equal: Vec<bool> = before
        .iter()
        .zip(&after)
        .map(|(b, a)| efficient_indices(&b.instance) == efficient_indices(&a.instance))
        .collect();
    let divergence: Vec<AnchorComparison> = anchors
        .iter()
        .map(|anchor| AnchorComparison {
            before: divergence_over_samples(anchor, schedule, &before),
            after: divergence_over_samples(anchor, schedule, &after),
        })
        .collect();
    let finest_before = &before[before.len() - 1].instance;
    let finest_after = &after[after.len() - 1].instance;
    let (efficient_before, efficient_after, _) = compare_samples(finest_before, finest_after);
    let union: BTreeSet<String> = efficient_before.union(&efficient_after).cloned().collect();
    let (verdict, diagnostic) = verdict(&efficient_sets_equal, &divergence);
    Ok(PreservationReport {
        m_before: m_map(finest_before, &union),
        m_after: m_map(finest_after, &union),
        efficient_before,
        efficient_after,
        efficient_sets_equal,
        divergence,
        verdict,
        diagnostic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{parse_expression, Variable};
    use alloc::vec;

    fn e(s: &str) -> Expression {
        parse_expression(s).unwrap()
    }

    fn componentwise(parts: &[&str], domain: (f64, f64)) -> TransformSpec {
        TransformSpec::new(
            TransformKind::Componentwise,
            parts.iter().map(|s| e(s)).collect(),
            vec![domain; parts.len()],
        )
        .unwrap()
    }

    #[test]
    fn apply_examples() {
        let inst = DiscreteInstance::new(2, [("u", vec![1.0, 2.0]), ("v", vec![2.0, 1.0])]).unwrap();
        let sq = componentwise(&["y^2", "y^2"], (0.0, f64::INFINITY));
        let out = apply_transform(&sq, &inst).unwrap();
        assert_eq!(out.get("u").unwrap().f.as_slice(), &[1.0, 4.0]);
        assert_eq!(out.get("v").unwrap().f.as_slice(), &[4.0, 1.0]);

        let id = componentwise(&["y", "y"], (f64::NEG_INFINITY, f64::INFINITY));
        assert_eq!(apply_transform(&id, &inst).unwrap(), inst);

        let tight = componentwise(&["y", "y"], (0.0, 1.5));
        assert!(matches!(apply_transform(&tight, &inst), Err(Error::Domain(m)) if m.contains("`u`")));
    }

    #[test]
    fn apply_to_sampled_parabola() {
        let analytic = AnalyticInstance::new(
            vec![Variable::new("x", Some(-1.0), Some(0.0))],
            vec![e("x^2"), e("x")],
            11,
        )
        .unwrap();
        let phi = TransformSpec::new(
            TransformKind::General,
            vec![e("sqrt(y1)"), e("y2")],
            vec![(0.0, f64::INFINITY), (f64::NEG_INFINITY, f64::INFINITY)],
        )
        .unwrap();
        let sample = analytic.sample(11, None).unwrap();
        let out = apply_transform(&phi, &sample.instance).unwrap();
        for (pt, node) in out.points().iter().zip(&sample.nodes) {
            assert!((pt.f[0] + node[0]).abs() < 1e-15 && pt.f[1] == node[0]);
        }
        let composed = apply_transform_analytic(&phi, &analytic).unwrap();
        assert_eq!(composed.objectives()[0], e("sqrt(x^2)"));
    }

    #[test]
    fn jacobian_examples() {
        let exp = componentwise(&["exp(y)", "exp(y)"], (-3.0, 1.0));
        let a = check_jacobian_conditions(&exp, 9).unwrap();
        assert!(a.nonneg && a.kernel_trivial == Some(true) && a.witnesses.is_empty());

        let flat = TransformSpec::new(TransformKind::General, vec![e("y1"), e("0*y2")], vec![(0.0, 1.0); 2]).unwrap();
        let a = check_jacobian_conditions(&flat, 5).unwrap();
        assert_eq!(a.kernel_trivial, Some(false));
        assert_eq!(a.witnesses[0].kernel_direction, Some(vec![0.0, 1.0]));

        let pw = componentwise(&["y^2", "y^4"], (0.0, 1.0));
        let a = check_jacobian_conditions(&pw, 5).unwrap();
        assert!(a.nonneg);
        assert_eq!(a.kernel_trivial, Some(false));
        assert_eq!(a.witnesses[0].condition, JacobianCondition::ZeroDiagonal);

        let neg = componentwise(&["-y", "y"], (0.0, 1.0));
        let a = check_jacobian_conditions(&neg, 3).unwrap();
        assert!(!a.nonneg && a.kernel_trivial.is_none());
    }

    #[test]
    fn zarepisheh_examples() {
        let cube = componentwise(&["y^3", "y^3"], (f64::NEG_INFINITY, f64::INFINITY));
        let r = zarepisheh_on_intervals(&cube, &[(1.0, 2.0), (1.0, 2.0)]).unwrap();
        assert!(r.iter().all(ComponentConditions::pass));
        let slow = componentwise(&["1e-7 * y", "y"], (f64::NEG_INFINITY, f64::INFINITY));
        assert!(zarepisheh_on_intervals(&slow, &[(0.0, 1.0), (0.0, 1.0)]).unwrap()[0].positive_derivative);

        let quart = componentwise(&["y^2", "y^4"], (f64::NEG_INFINITY, f64::INFINITY));
        let r = zarepisheh_on_intervals(&quart, &[(0.0, 1.0), (0.0, 1.0)]).unwrap();
        for c in &r {
            assert!(!c.positive_derivative);
            assert_eq!(c.witness, Some(0.0));
        }
        assert!(r[1].continuous && r[1].increasing);

        let ex = componentwise(&["exp(y)", "exp(y)"], (f64::NEG_INFINITY, f64::INFINITY));
        let r = zarepisheh_on_intervals(&ex, &[(-4.0, 3.0), (0.5, 0.75)]).unwrap();
        assert!(r.iter().all(ComponentConditions::pass));

        let step = componentwise(&["y + (abs(y - 0.5001) / (y - 0.5001) + 1)", "y"], (f64::NEG_INFINITY, f64::INFINITY));
        let r = zarepisheh_on_intervals(&step, &[(0.0, 1.0), (0.0, 1.0)]).unwrap();
        assert!(!r[0].continuous);
    }

    #[test]
    fn compare_finite_power() {
        let inst = DiscreteInstance::new(2, [("u", vec![1.0, 2.0]), ("v", vec![2.0, 1.0])]).unwrap();
        let cube = componentwise(&["y^3", "y^3"], (0.0, f64::INFINITY));
        let r = compare_proper_sets(&cube, &inst).unwrap();
        assert_eq!(r.verdict, Verdict::Preserved);
        assert!(!r.diagnostic);
        assert!(r.m_before.values().chain(r.m_after.values()).all(|m| m.is_some_and(f64::is_finite)));
    }

    #[test]
    fn compare_analytic_examples() {
        let control = SampleControl { samples: 101, spacing: None, truncation: None };
        let schedule = [Refinement::Spacing(1e-1), Refinement::Spacing(1e-2), Refinement::Spacing(1e-3)];
        let xsq = AnalyticInstance::new(vec![Variable::new("x", Some(-1.0), Some(0.0))], vec![e("x^2"), e("x")], 11)
            .unwrap();
        let phi = TransformSpec::new(
            TransformKind::General,
            vec![e("sqrt(y1)"), e("y2")],
            vec![(0.0, f64::INFINITY), (f64::NEG_INFINITY, f64::INFINITY)],
        )
        .unwrap();
        let r = compare_proper_sets_analytic(&phi, &xsq, &schedule, &[vec![0.0]], &control).unwrap();
        assert_eq!(r.divergence[0].before.classification, Classification::Diverging);
        assert_eq!(r.divergence[0].after.classification, Classification::Bounded);
        assert_eq!(r.verdict, Verdict::Changed);
        assert!(r.diagnostic);

        let line = AnalyticInstance::new(vec![Variable::new("x", Some(0.0), Some(1.0))], vec![e("x"), e("1-x")], 11)
            .unwrap();
        let pw = componentwise(&["y^2", "y^4"], (0.0, 1.0));
        let r = compare_proper_sets_analytic(&pw, &line, &schedule, &[vec![1.0]], &control).unwrap();
        assert_eq!(r.divergence[0].before.classification, Classification::Bounded);
        assert_eq!(r.divergence[0].after.classification, Classification::Diverging);
        for (m, h) in r.divergence[0].after.m_values.iter().zip([1e-1, 1e-2, 1e-3]) {
            let expected = (2.0 * h - h * h) / (h * h * h * h);
            assert!((m.unwrap() - expected).abs() <= 1e-6 * expected);
        }
        assert_eq!(r.verdict, Verdict::Changed);
    }

    #[test]
    fn inverse_round_trip() {
        let t = componentwise(&["exp(y)", "y^3"], (f64::NEG_INFINITY, f64::INFINITY))
            .with_inverse(vec![e("log(y)"), e("y")], None)
            .unwrap();
        assert!(round_trip_error(&t, &[0.3, 2.0]).unwrap() > 1e-3);
        let t = componentwise(&["exp(y)", "y^3"], (f64::NEG_INFINITY, f64::INFINITY))
            .with_inverse(vec![e("log(y)"), e("y^(1/3)")], Some(vec![(0.0, f64::INFINITY); 2]))
            .unwrap();
        assert!(round_trip_error(&t, &[0.3, 2.0]).unwrap() < 1e-12);
        assert!(t.inverse_spec().unwrap().inverse().is_some());
    }

    #[test]
    fn spec_validation() {
        assert!(TransformSpec::new(TransformKind::Componentwise, vec![e("y")], vec![(0.0, 1.0)]).is_err());
        assert!(TransformSpec::new(TransformKind::Componentwise, vec![e("y2"), e("y")], vec![(0.0, 1.0); 2]).is_err());
        assert!(TransformSpec::new(TransformKind::General, vec![e("y1"), e("y")], vec![(0.0, 1.0); 2]).is_err());
        assert!(TransformSpec::new(TransformKind::General, vec![e("y1"), e("y2")], vec![(1.0, 0.0); 2]).is_err());
    }
}
