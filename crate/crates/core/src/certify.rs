//! Certificates of proper efficiency on finite instances.
//!
//! On a finite instance every efficient point is properly efficient in all
//! three senses, so the certifiers mostly matter for their quantitative
//! witnesses: the least Geoffrion trade-off bound `M`, the supremum of the
//! Henig cone parameter `δ`, and an explicit direction when the Benson
//! condition fails. For sampled continuous problems, [`divergence_study`]
//! tracks how `M` grows as the sample is refined.

use alloc::string::String;
use alloc::vec::Vec;

use crate::analytic::{AnalyticInstance, Resolution, SampleSpec, SampledInstance};
use crate::error::{Error, Result};
use crate::instance::{is_efficient_at, DiscreteInstance};
use crate::lp;
use crate::math;
use crate::real::ExtendedReal;

/// Default tolerance for LP feasibility decisions.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Relative tolerance for reporting ties among binding trade-off pairs.
const TIE_REL: f64 = 1e-12;

/// A competitor/objective pair realizing the Geoffrion bound.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BindingPair {
    pub competitor: String,
    /// Objective index (0-based) the competitor improves.
    pub improving: usize,
    /// Objective index (0-based) it worsens.
    pub worsening: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GeoffrionCertificate {
    pub efficient: bool,
    /// Least admissible `M`; `None` for inefficient points.
    #[cfg_attr(feature = "serde", serde(rename = "M_min", serialize_with = "ser::not_applicable"))]
    pub m_min: Option<f64>,
    pub binding_pairs: Vec<BindingPair>,
}

/// A cone generator: a competitor difference `f(x) - f(x̄)` or a unit vector.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Generator {
    Competitor(String),
    Unit(usize),
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GeneratorWeight {
    pub generator: Generator,
    pub vector: Vec<f64>,
    pub weight: f64,
}

/// A nonzero nonpositive direction `d` (normalized to `Σ|d_i| = 1`, entries
/// exact up to rounding of the reconstruction) in the
/// closed cone of `f(X) + R^p_+ - f(x̄)`, with the multipliers producing it.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BensonViolation {
    pub direction: Vec<f64>,
    pub multipliers: Vec<GeneratorWeight>,
}

impl BensonViolation {
    /// `Σ weight · vector`.
    pub fn reconstruct(&self) -> Vec<f64> {
        let p = self.direction.len();
        let mut out = alloc::vec![0.0; p];
        for gw in &self.multipliers {
            for (o, v) in out.iter_mut().zip(&gw.vector) {
                *o += gw.weight * v;
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BensonCertificate {
    pub proper: bool,
    pub violation: Option<BensonViolation>,
    /// Optimal phase-1 objective of the cone/orthant intersection system.
    pub infeasibility: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct HenigCertificate {
    pub proper: bool,
    /// Largest `δ` such that no competitor lies in `f(x̄) - C_δ` for smaller
    /// values; `0` for inefficient points.
    pub delta_sup: ExtendedReal,
    pub blocking: Option<String>,
}

/// Membership of `y` in `C_δ = { y : y_i + δ Σ_j y_j >= 0 for all i }`.
pub fn cone_membership(y: &[f64], delta: f64) -> Result<bool> {
    if !(delta >= 0.0) {
        return Err(Error::NegativeDelta(delta));
    }
    let sum: f64 = y.iter().sum();
    Ok(y.iter().all(|&yi| yi + delta * sum >= 0.0))
}

/// Smallest `δ >= 0` with `d ∈ C_δ`, or `None` if `d` is in no `C_δ`.
///
/// With `S = Σ d_j > 0` the condition `d_i + δS >= 0` holds for all `i` iff
/// `δ >= max_i(-d_i) / S`; with `S <= 0` and some `d_i < 0` it never holds.
pub fn henig_threshold(d: &[f64]) -> Option<f64> {
    let sum: f64 = d.iter().sum();
    let worst = d.iter().map(|v| -v).fold(f64::NEG_INFINITY, f64::max);
    if worst <= 0.0 {
        return Some(0.0);
    }
    if sum > 0.0 {
        Some(worst / sum)
    } else {
        None
    }
}

fn improving_worst_case(ybar: &[f64], y: &[f64], i: usize) -> Option<(f64, usize)> {
    // least ratio over worsening objectives j, for a competitor improving i
    let gain = ybar[i] - y[i];
    let mut best: Option<(f64, usize)> = None;
    for j in 0..ybar.len() {
        let loss = y[j] - ybar[j];
        if loss > 0.0 {
            let r = gain / loss;
            if best.map_or(true, |(b, _)| r < b) {
                best = Some((r, j));
            }
        }
    }
    best
}

/// Least Geoffrion constant of point `idx`, or `None` if it is inefficient.
/// A point no competitor improves on gets `0`.
pub fn geoffrion_constant(instance: &DiscreteInstance, idx: usize) -> Option<f64> {
    if !is_efficient_at(instance, idx) {
        return None;
    }
    let ybar = &instance.points()[idx].f;
    let mut m = 0.0f64;
    for (k, pt) in instance.points().iter().enumerate() {
        if k == idx {
            continue;
        }
        for i in 0..ybar.len() {
            if pt.f[i] < ybar[i] {
                let (r, _) = improving_worst_case(ybar, &pt.f, i).expect("efficient point has a worsening index");
                m = m.max(r);
            }
        }
    }
    Some(m)
}

pub fn certify_geoffrion(instance: &DiscreteInstance, label: &str) -> Result<GeoffrionCertificate> {
    let idx = instance.index_of(label)?;
    let Some(m) = geoffrion_constant(instance, idx) else {
        return Ok(GeoffrionCertificate { efficient: false, m_min: None, binding_pairs: Vec::new() });
    };
    let ybar = &instance.points()[idx].f;
    let mut binding = Vec::new();
    for (k, pt) in instance.points().iter().enumerate() {
        if k == idx {
            continue;
        }
        for i in 0..ybar.len() {
            if pt.f[i] >= ybar[i] {
                continue;
            }
            let (least, _) = improving_worst_case(ybar, &pt.f, i).expect("efficient");
            if !math::close(least, m, TIE_REL) {
                continue;
            }
            let gain = ybar[i] - pt.f[i];
            for j in 0..ybar.len() {
                let loss = pt.f[j] - ybar[j];
                if loss > 0.0 && math::close(gain / loss, least, TIE_REL) {
                    binding.push(BindingPair {
                        competitor: pt.label.clone(),
                        improving: i,
                        worsening: j,
                        ratio: gain / loss,
                    });
                }
            }
        }
    }
    binding.sort_by(|a, b| {
        a.competitor
            .cmp(&b.competitor)
            .then(a.improving.cmp(&b.improving))
            .then(a.worsening.cmp(&b.worsening))
    });
    Ok(GeoffrionCertificate { efficient: true, m_min: Some(m), binding_pairs: binding })
}

/// Benson's condition on a finite instance.
///
/// The cone in the definition is the ray cone `{t s : t >= 0}`. Over a finite
/// image its closure is the union, over competitors `x`, of the finitely
/// generated cones spanned by `f(x) - f(x̄)` and the unit vectors. The
/// condition fails iff one of those pieces admits
/// `μ_0 g + Σ μ_i e^i = d`, `μ >= 0`, `d <= 0`, `Σ(-d_i) = 1`; each piece is
/// decided by [`lp::phase_one`] with feasibility tolerance `tol`.
/// `infeasibility` is the smallest phase-1 objective over the pieces.
pub fn certify_benson(instance: &DiscreteInstance, label: &str, tol: f64) -> Result<BensonCertificate> {
    let idx = instance.index_of(label)?;
    let p = instance.p();
    let ybar = &instance.points()[idx].f;

    let units: Vec<(Generator, Vec<f64>)> = (0..p)
        .map(|i| {
            let mut e = alloc::vec![0.0; p];
            e[i] = 1.0;
            (Generator::Unit(i), e)
        })
        .collect();
    let competitors: Vec<(Generator, Vec<f64>)> = instance
        .points()
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != idx)
        .map(|(_, pt)| {
            let g: Vec<f64> = pt.f.iter().zip(ybar.iter()).map(|(a, b)| a - b).collect();
            (Generator::Competitor(pt.label.clone()), g)
        })
        .filter(|(_, g)| g.iter().any(|&v| v != 0.0))
        .collect();

    let mut infeasibility = f64::INFINITY;
    if competitors.is_empty() {
        let (_, value) = benson_piece(units.clone(), p, tol);
        infeasibility = value;
    }
    for competitor in competitors {
        let mut generators = alloc::vec![competitor];
        generators.extend(units.iter().cloned());
        let (violation, value) = benson_piece(generators, p, tol);
        infeasibility = infeasibility.min(value);
        if let Some(violation) = violation {
            return Ok(BensonCertificate { proper: false, violation: Some(violation), infeasibility });
        }
    }
    Ok(BensonCertificate { proper: true, violation: None, infeasibility })
}

/// Phase-1 test of one finitely generated piece; returns the violation when
/// the piece meets `-R^p_+` outside the origin.
fn benson_piece(generators: Vec<(Generator, Vec<f64>)>, p: usize, tol: f64) -> (Option<BensonViolation>, f64) {
    // columns are scaled to unit max-norm; the cone does not change
    let scales: Vec<f64> = generators
        .iter()
        .map(|(_, g)| g.iter().fold(0.0f64, |m, v| m.max(math::abs(*v))))
        .collect();
    let ng = generators.len();
    let mut rows = alloc::vec![alloc::vec![0.0; ng + p]; p + 1];
    for (c, ((_, g), s)) in generators.iter().zip(&scales).enumerate() {
        for i in 0..p {
            rows[i][c] = g[i] / s;
        }
    }
    for i in 0..p {
        rows[i][ng + i] = 1.0;
        rows[p][ng + i] = 1.0;
    }
    let mut rhs = alloc::vec![0.0; p + 1];
    rhs[p] = 1.0;
    let out = lp::phase_one(&rows, &rhs);
    if !out.feasible(tol) {
        return (None, out.infeasibility);
    }

    let multipliers: Vec<GeneratorWeight> = generators
        .into_iter()
        .zip(&scales)
        .zip(&out.solution[..ng])
        .filter(|(_, &mu)| mu > 0.0)
        .map(|(((generator, vector), s), &mu)| GeneratorWeight { generator, vector, weight: mu / s })
        .collect();
    let mut violation = BensonViolation { direction: alloc::vec![0.0; p], multipliers };
    let raw = violation.reconstruct();
    let mass: f64 = raw.iter().map(|v| -v).sum();
    if !(mass > 0.0) {
        // numerically feasible but no usable direction; treat as proper
        return (None, out.infeasibility);
    }
    for gw in &mut violation.multipliers {
        gw.weight /= mass;
    }
    violation.direction = violation.reconstruct();
    (Some(violation), out.infeasibility)
}

pub fn certify_henig(instance: &DiscreteInstance, label: &str) -> Result<HenigCertificate> {
    let idx = instance.index_of(label)?;
    let ybar = &instance.points()[idx].f;
    let mut best: Option<(f64, &str)> = None;
    for (k, pt) in instance.points().iter().enumerate() {
        if k == idx {
            continue;
        }
        let d: Vec<f64> = ybar.iter().zip(pt.f.iter()).map(|(a, b)| a - b).collect();
        if d.iter().all(|&v| v == 0.0) {
            continue;
        }
        if let Some(t) = henig_threshold(&d) {
            let better = match best {
                None => true,
                Some((b, l)) => t < b || (t == b && pt.label.as_str() < l),
            };
            if better {
                best = Some((t, pt.label.as_str()));
            }
        }
    }
    Ok(match best {
        None => HenigCertificate { proper: true, delta_sup: ExtendedReal::PosInfinity, blocking: None },
        Some((t, l)) => HenigCertificate {
            proper: t > 0.0,
            delta_sup: ExtendedReal::Finite(t),
            blocking: Some(l.into()),
        },
    })
}

/// Two-objective link between the certificates: `M_min = 1 + 1/δ_sup`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TradeoffIdentity {
    #[cfg_attr(feature = "serde", serde(rename = "M_min"))]
    pub m_min: f64,
    pub delta_sup: f64,
    /// `1 + 1/δ_sup`.
    pub predicted: f64,
    pub residual: f64,
    pub holds: bool,
}

/// Checks `M_min = 1 + 1/δ_sup` within `tol` for an efficient point of a
/// two-objective instance. `None` when `p != 2`, the point is inefficient,
/// or `δ_sup` is infinite.
///
/// For a competitor gaining `b` in one objective and losing `a` in the
/// other, the trade-off ratio is `b/a` and, when `b > a`, the Henig entry
/// threshold is `a/(b - a)`, so `1 + 1/threshold = b/a`.
pub fn two_objective_identity(
    geoffrion: &GeoffrionCertificate,
    henig: &HenigCertificate,
    p: usize,
    tol: f64,
) -> Option<TradeoffIdentity> {
    if p != 2 || !geoffrion.efficient {
        return None;
    }
    let m_min = geoffrion.m_min?;
    let delta_sup = henig.delta_sup.finite()?;
    if !(delta_sup > 0.0) {
        return None;
    }
    let predicted = 1.0 + 1.0 / delta_sup;
    let residual = math::abs(m_min - predicted);
    Some(TradeoffIdentity { m_min, delta_sup, predicted, residual, holds: residual <= tol })
}

/// One step of a refinement schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Refinement {
    /// Grid spacing `h`; refining means decreasing.
    Spacing(f64),
    /// Truncation radius `T` for unbounded sides; refining means increasing.
    Truncation(f64),
}

impl Refinement {
    pub fn value(self) -> f64 {
        match self {
            Self::Spacing(v) | Self::Truncation(v) => v,
        }
    }
}

/// Sampling settings not fixed by the schedule itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleControl {
    /// Points per axis when the schedule does not fix the resolution.
    pub samples: usize,
    /// Spacing used for truncation schedules; overrides `samples`.
    pub spacing: Option<f64>,
    /// Truncation used for spacing schedules on unbounded domains.
    pub truncation: Option<f64>,
}

impl SampleControl {
    pub fn sample_spec(&self, step: Refinement) -> SampleSpec {
        match step {
            Refinement::Spacing(h) => SampleSpec { resolution: Resolution::Spacing(h), truncation: self.truncation },
            Refinement::Truncation(t) => SampleSpec {
                resolution: self.spacing.map_or(Resolution::Points(self.samples), Resolution::Spacing),
                truncation: Some(t),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Classification {
    Bounded,
    Diverging,
    Inconclusive,
}

/// Total growth factor a monotone sequence needs to count as diverging.
pub const DIVERGENCE_FACTOR: f64 = 1e2;
/// Max/min ratio below which a sequence counts as bounded.
pub const BOUNDED_RATIO: f64 = 2.0;
/// Relative slack on both thresholds, so that values meeting a threshold
/// exactly up to rounding are classified by it.
pub const THRESHOLD_SLACK: f64 = 1e-9;

/// Heuristic classification of a sequence of Geoffrion constants.
///
/// Diverging: non-decreasing with `last >= 100 * first > 0`, up to
/// [`THRESHOLD_SLACK`]. Bounded: all
/// zero, or positive with `max / min <= 2`. Anything else, including a
/// missing value (anchor inefficient at some refinement), is inconclusive.
pub fn classify_growth(values: &[Option<f64>]) -> Classification {
    let Some(vals) = values.iter().copied().collect::<Option<Vec<f64>>>() else {
        return Classification::Inconclusive;
    };
    if vals.is_empty() {
        return Classification::Inconclusive;
    }
    let first = vals[0];
    let last = vals[vals.len() - 1];
    let monotone = vals.windows(2).all(|w| w[1] >= w[0]);
    if vals.len() >= 2 && monotone && first > 0.0 && last >= DIVERGENCE_FACTOR * first * (1.0 - THRESHOLD_SLACK) {
        return Classification::Diverging;
    }
    let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
    if max == 0.0 || (min > 0.0 && max / min <= BOUNDED_RATIO * (1.0 + THRESHOLD_SLACK)) {
        return Classification::Bounded;
    }
    Classification::Inconclusive
}

/// Least-squares slope of `ln M` against `ln(refinement value)`.
pub fn growth_slope(schedule: &[Refinement], values: &[Option<f64>]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = schedule
        .iter()
        .zip(values)
        .filter_map(|(r, v)| match v {
            Some(m) if *m > 0.0 => Some((math::ln(r.value()), math::ln(*m))),
            _ => None,
        })
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        None
    } else {
        Some(sxy / sxx)
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DivergenceReport {
    pub anchor: Vec<f64>,
    pub schedule: Vec<Refinement>,
    /// Label of the sample point nearest the anchor, per refinement.
    pub anchor_labels: Vec<String>,
    /// Least Geoffrion constant per refinement; `None` if the anchor sample
    /// is inefficient there.
    #[cfg_attr(feature = "serde", serde(rename = "M_values"))]
    pub m_values: Vec<Option<f64>>,
    pub classification: Classification,
    pub growth_slope: Option<f64>,
}

/// Checks that a schedule is nonempty, of one kind, and strictly refining.
pub fn validate_schedule(schedule: &[Refinement]) -> Result<()> {
    if schedule.is_empty() {
        return Err(Error::Schedule("empty schedule".into()));
    }
    for step in schedule {
        let v = step.value();
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::Schedule(alloc::format!("refinement values must be positive, got {v}")));
        }
    }
    for w in schedule.windows(2) {
        let ok = match (w[0], w[1]) {
            (Refinement::Spacing(a), Refinement::Spacing(b)) => b < a,
            (Refinement::Truncation(a), Refinement::Truncation(b)) => b > a,
            _ => return Err(Error::Schedule("spacings and truncations cannot be mixed".into())),
        };
        if !ok {
            return Err(Error::Schedule("schedule must be strictly refining".into()));
        }
    }
    Ok(())
}

/// Geoffrion constants at the sample nearest `anchor`, across a schedule of
/// refinements of an analytic instance.
pub fn divergence_study(
    analytic: &AnalyticInstance,
    anchor: &[f64],
    schedule: &[Refinement],
    control: &SampleControl,
) -> Result<DivergenceReport> {
    if anchor.len() != analytic.variables().len() {
        return Err(Error::DimensionMismatch { expected: analytic.variables().len(), found: anchor.len() });
    }
    if !analytic.contains(anchor) {
        return Err(Error::Domain(alloc::format!("anchor {anchor:?} lies outside the variable domain")));
    }
    validate_schedule(schedule)?;
    for &step in schedule {
        let bounds = analytic.sample_box(control.sample_spec(step).truncation)?;
        if anchor.iter().zip(&bounds).any(|(&a, &(lo, hi))| a < lo || a > hi) {
            return Err(Error::Domain(alloc::format!(
                "anchor {anchor:?} lies outside the sampled box at refinement {step:?}"
            )));
        }
    }
    let samples: Vec<SampledInstance> = schedule
        .iter()
        .map(|&step| analytic.sample_with(&control.sample_spec(step)))
        .collect::<Result<_>>()?;
    Ok(divergence_over_samples(anchor, schedule, &samples))
}

/// Divergence report over already sampled instances, one per schedule step.
pub fn divergence_over_samples(anchor: &[f64], schedule: &[Refinement], samples: &[SampledInstance]) -> DivergenceReport {
    let mut anchor_labels = Vec::with_capacity(samples.len());
    let mut m_values = Vec::with_capacity(samples.len());
    for sample in samples {
        let idx = sample.nearest(anchor);
        anchor_labels.push(sample.instance.points()[idx].label.clone());
        m_values.push(geoffrion_constant(&sample.instance, idx));
    }
    DivergenceReport {
        anchor: anchor.to_vec(),
        schedule: schedule.to_vec(),
        anchor_labels,
        classification: classify_growth(&m_values),
        growth_slope: growth_slope(schedule, &m_values),
        m_values,
    }
}


#[cfg(feature = "serde")]
pub(crate) mod ser {
    use serde::Serializer;

    pub fn not_applicable<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(m) => s.serialize_f64(*m),
            None => s.serialize_str("not-applicable"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{parse_expression, Variable};
    use alloc::vec;

    fn three() -> DiscreteInstance {
        DiscreteInstance::new(2, [("a", vec![0.0, 3.0]), ("b", vec![1.0, 1.0]), ("c", vec![3.0, 0.0])]).unwrap()
    }

    /// Enumerates every (competitor, i, j) triple and keeps, per (competitor,
    /// i), the smallest ratio; returns the largest of those.
    fn brute_force_m(points: &[Vec<f64>], idx: usize) -> f64 {
        let ybar = &points[idx];
        let mut m = 0.0f64;
        for (k, y) in points.iter().enumerate() {
            if k == idx {
                continue;
            }
            for i in 0..ybar.len() {
                if y[i] < ybar[i] {
                    let mut least = f64::INFINITY;
                    for j in 0..ybar.len() {
                        if y[j] > ybar[j] {
                            least = least.min((ybar[i] - y[i]) / (y[j] - ybar[j]));
                        }
                    }
                    m = m.max(least);
                }
            }
        }
        m
    }

    #[test]
    fn geoffrion_on_tradeoff_triple() {
        let cert = certify_geoffrion(&three(), "b").unwrap();
        assert!(cert.efficient);
        assert_eq!(cert.m_min, Some(0.5));
        let pts: Vec<Vec<f64>> = three().points().iter().map(|p| p.f.to_vec()).collect();
        assert_eq!(brute_force_m(&pts, 1), 0.5);
        assert_eq!(
            cert.binding_pairs,
            vec![
                BindingPair { competitor: "a".into(), improving: 0, worsening: 1, ratio: 0.5 },
                BindingPair { competitor: "c".into(), improving: 1, worsening: 0, ratio: 0.5 },
            ]
        );
    }

    #[test]
    fn geoffrion_single_point_convention() {
        let inst = DiscreteInstance::new(2, [("s", vec![1.0, 2.0])]).unwrap();
        let cert = certify_geoffrion(&inst, "s").unwrap();
        assert!(cert.efficient);
        assert_eq!(cert.m_min, Some(0.0));
        assert!(cert.binding_pairs.is_empty());
    }

    #[test]
    fn geoffrion_inefficient_and_unknown() {
        let inst = DiscreteInstance::new(2, [("lo", vec![0.0, 0.0]), ("hi", vec![1.0, 1.0])]).unwrap();
        let cert = certify_geoffrion(&inst, "hi").unwrap();
        assert!(!cert.efficient);
        assert_eq!(cert.m_min, None);
        assert_eq!(certify_geoffrion(&inst, "nope"), Err(Error::UnknownLabel("nope".into())));
    }

    #[test]
    fn geoffrion_on_sampled_parabola() {
        let h = 1e-3;
        let analytic = AnalyticInstance::new(
            vec![Variable::new("x", Some(-1.0), Some(0.0))],
            vec![parse_expression("x^2").unwrap(), parse_expression("x").unwrap()],
            1001,
        )
        .unwrap();
        let sample = analytic.sample(1001, None).unwrap();
        let idx = sample.nearest(&[0.0]);
        let cert = certify_geoffrion(&sample.instance, &sample.instance.points()[idx].label).unwrap();
        let m = cert.m_min.unwrap();
        assert!((m - 1.0 / h).abs() <= 1e-9 * 1e3, "{m}");
        let pts: Vec<Vec<f64>> = sample.instance.points().iter().map(|p| p.f.to_vec()).collect();
        assert_eq!(brute_force_m(&pts, idx), m);
    }

    #[test]
    fn benson_examples() {
        let cert = certify_benson(&three(), "b", DEFAULT_TOL).unwrap();
        assert!(cert.proper && cert.violation.is_none());

        let inst = DiscreteInstance::new(2, [("lo", vec![0.0, 0.0]), ("hi", vec![1.0, 1.0])]).unwrap();
        let cert = certify_benson(&inst, "hi", DEFAULT_TOL).unwrap();
        assert!(!cert.proper);
        let v = cert.violation.unwrap();
        assert!(v.direction.iter().all(|&d| d <= 0.0));
        assert!((v.direction.iter().map(|d| d.abs()).sum::<f64>() - 1.0).abs() < 1e-12);
        for (a, b) in v.reconstruct().iter().zip(&v.direction) {
            assert!((a - b).abs() <= 1e-9);
        }

        let single = DiscreteInstance::new(2, [("s", vec![0.0, 0.0])]).unwrap();
        assert!(certify_benson(&single, "s", DEFAULT_TOL).unwrap().proper);
    }

    #[test]
    fn benson_unsupported_point_is_proper() {
        // (0, 0) lies above the segment joining the other two points, yet no
        // single competitor dominates it
        let inst = DiscreteInstance::new(2, [("m", vec![0.0, 0.0]), ("l", vec![-2.0, 1.0]), ("r", vec![1.0, -2.0])]).unwrap();
        assert!(certify_benson(&inst, "m", DEFAULT_TOL).unwrap().proper);
    }

    #[test]
    fn benson_weakly_dominated_point() {
        // (1, 1) vs (1, 0): only the second objective improves
        let inst = DiscreteInstance::new(2, [("a", vec![1.0, 0.0]), ("b", vec![1.0, 1.0]), ("c", vec![0.0, 5.0])]).unwrap();
        let cert = certify_benson(&inst, "b", DEFAULT_TOL).unwrap();
        assert!(!cert.proper);
        let v = cert.violation.unwrap();
        for (a, b) in v.reconstruct().iter().zip(&v.direction) {
            assert!((a - b).abs() <= 1e-9);
        }
    }

    #[test]
    fn cone_membership_examples() {
        assert!(cone_membership(&[1.0, 1.0], 0.0).unwrap());
        assert!(cone_membership(&[1.0, 1.0], 7.5).unwrap());
        assert!(!cone_membership(&[3.0, -1.0], 0.4).unwrap());
        assert!(cone_membership(&[3.0, -1.0], 0.6).unwrap());
        assert!(cone_membership(&[0.0, 0.0, 0.0], 0.3).unwrap());
        assert_eq!(cone_membership(&[1.0, 1.0], -0.1), Err(Error::NegativeDelta(-0.1)));
    }

    /// Smallest grid δ at which `d` enters `C_δ`, scanning the membership
    /// predicate directly.
    fn grid_scan(d: &[f64], grid: &[f64]) -> Option<f64> {
        grid.iter().copied().find(|&delta| cone_membership(d, delta).unwrap())
    }

    #[test]
    fn henig_single_competitor_threshold() {
        // competitor at f(x̄) - (3, -1)
        let inst = DiscreteInstance::new(2, [("xbar", vec![0.0, 0.0]), ("z", vec![-3.0, 1.0])]).unwrap();
        let cert = certify_henig(&inst, "xbar").unwrap();
        assert_eq!(cert.delta_sup, ExtendedReal::Finite(0.5));
        assert_eq!(cert.blocking.as_deref(), Some("z"));
        let grid: Vec<f64> = (0..=10_000).map(|k| k as f64 * 1e-4).collect();
        let scanned = grid_scan(&[3.0, -1.0], &grid).unwrap();
        assert!((scanned - 0.5).abs() <= 1e-4);
    }

    #[test]
    fn henig_never_entering_competitors() {
        let cert = certify_henig(&three(), "b").unwrap();
        assert_eq!(cert.delta_sup, ExtendedReal::PosInfinity);
        assert!(cert.proper);
        let grid: Vec<f64> = (0..=60).map(|k| 10f64.powf(k as f64 / 10.0) - 1.0).collect();
        assert!(*grid.last().unwrap() >= 1e6 - 1.0);
        assert_eq!(grid_scan(&[1.0, -2.0], &grid), None);
        assert_eq!(grid_scan(&[-2.0, 1.0], &grid), None);
    }

    #[test]
    fn henig_inefficient_point() {
        let inst = DiscreteInstance::new(2, [("lo", vec![0.0, 0.0]), ("hi", vec![1.0, 1.0])]).unwrap();
        let cert = certify_henig(&inst, "hi").unwrap();
        assert!(!cert.proper);
        assert_eq!(cert.delta_sup, ExtendedReal::Finite(0.0));
    }

    #[test]
    fn membership_monotone_in_delta() {
        let y = [2.0, -0.7, 0.1];
        let mut entered = false;
        for k in 0..2000 {
            let m = cone_membership(&y, k as f64 * 0.001).unwrap();
            assert!(!(entered && !m));
            entered |= m;
        }
        assert!(entered);
    }

    #[test]
    fn classification_rules() {
        use Classification::*;
        assert_eq!(classify_growth(&[Some(10.0), Some(100.0), Some(1000.0)]), Diverging);
        assert_eq!(classify_growth(&[Some(1.0), Some(1.0), Some(1.0)]), Bounded);
        assert_eq!(classify_growth(&[Some(1.0), Some(3.0)]), Inconclusive);
        assert_eq!(classify_growth(&[Some(1.0), None]), Inconclusive);
        assert_eq!(classify_growth(&[Some(0.0), Some(0.0)]), Bounded);
        assert_eq!(classify_growth(&[Some(10.0), Some(5.0), Some(5000.0)]), Inconclusive);
        assert_eq!(classify_growth(&[]), Inconclusive);
    }

    #[test]
    fn schedule_validation() {
        use Refinement::*;
        assert!(validate_schedule(&[]).is_err());
        assert!(validate_schedule(&[Spacing(0.1), Spacing(0.2)]).is_err());
        assert!(validate_schedule(&[Spacing(0.1), Truncation(5.0)]).is_err());
        assert!(validate_schedule(&[Truncation(5.0), Truncation(10.0)]).is_ok());
        assert!(validate_schedule(&[Spacing(0.1), Spacing(0.01)]).is_ok());
    }

    #[test]
    fn divergence_on_parabola_and_line() {
        let control = SampleControl { samples: 1001, spacing: None, truncation: None };
        let schedule = [Refinement::Spacing(1e-1), Refinement::Spacing(1e-2), Refinement::Spacing(1e-3)];
        let xsq = AnalyticInstance::new(
            vec![Variable::new("x", Some(-1.0), Some(0.0))],
            vec![parse_expression("x^2").unwrap(), parse_expression("x").unwrap()],
            1001,
        )
        .unwrap();
        let report = divergence_study(&xsq, &[0.0], &schedule, &control).unwrap();
        for (m, expected) in report.m_values.iter().zip([10.0, 100.0, 1000.0]) {
            assert!((m.unwrap() - expected).abs() <= 1e-9 * expected);
        }
        assert_eq!(report.classification, Classification::Diverging);
        assert!((report.growth_slope.unwrap() + 1.0).abs() < 1e-6);

        let line = AnalyticInstance::new(
            vec![Variable::new("x", Some(0.0), Some(1.0))],
            vec![parse_expression("x").unwrap(), parse_expression("1-x").unwrap()],
            1001,
        )
        .unwrap();
        let report = divergence_study(&line, &[1.0], &schedule, &control).unwrap();
        for m in &report.m_values {
            assert!((m.unwrap() - 1.0).abs() < 1e-9);
        }
        assert_eq!(report.classification, Classification::Bounded);
    }

    #[test]
    fn divergence_on_exponential_pair() {
        let inst = AnalyticInstance::new(
            vec![Variable::new("x", None, None)],
            vec![parse_expression("-exp(x)").unwrap(), parse_expression("-exp(-x)").unwrap()],
            1001,
        )
        .unwrap();
        let control = SampleControl { samples: 1001, spacing: None, truncation: None };
        let report =
            divergence_study(&inst, &[0.0], &[Refinement::Truncation(5.0), Refinement::Truncation(10.0)], &control)
                .unwrap();
        for (m, expected) in report.m_values.iter().zip([148.41, 22026.47]) {
            assert!((m.unwrap() - expected).abs() <= 0.05 * expected);
        }
        assert_eq!(report.classification, Classification::Diverging);
    }

    #[test]
    fn divergence_errors() {
        let control = SampleControl { samples: 11, spacing: None, truncation: None };
        let line = AnalyticInstance::new(
            vec![Variable::new("x", Some(0.0), Some(1.0))],
            vec![parse_expression("x").unwrap(), parse_expression("1-x").unwrap()],
            11,
        )
        .unwrap();
        assert!(matches!(
            divergence_study(&line, &[2.0], &[Refinement::Spacing(0.1)], &control),
            Err(Error::Domain(_))
        ));
        assert!(matches!(divergence_study(&line, &[0.5], &[], &control), Err(Error::Schedule(_))));
    }
}
