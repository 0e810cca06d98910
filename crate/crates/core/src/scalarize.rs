//! Scalarization functions, their exact minimization over finite instances,
//! and the conditions under which minimizers are properly efficient.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::analytic::{AnalyticInstance, Expression};
use crate::certify::{Refinement, SampleControl};
use crate::diff;
use crate::error::{Error, Result};
use crate::instance::{ideal_point, DiscreteInstance};
use crate::math;
use crate::real::ExtendedReal;

/// Relative tolerance for ties among scalarized values.
pub const TIE_REL: f64 = 1e-12;

/// A scalarizing function `g: R^p -> R ∪ {+∞}`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "method", rename_all = "kebab-case"))]
pub enum Scalarizer {
    /// `λᵀy`.
    WeightedSum { lambda: Vec<f64> },
    /// `(Σ λ_i (y_i - u_i)^q)^(1/q)` with utopia `u`.
    Compromise {
        lambda: Vec<f64>,
        #[cfg_attr(feature = "serde", serde(default = "default_exponent"))]
        exponent: f64,
        #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
        utopia: Option<Vec<f64>>,
    },
    /// `Σ λ_i (y_i - r_i) + α Σ |y_i - r_i|`.
    Conic { lambda: Vec<f64>, alpha: f64, reference: Vec<f64> },
    /// `max_i λ_i (y_i - u_i) + α Σ (y_i - u_i)`.
    TchebycheffMod {
        lambda: Vec<f64>,
        alpha: f64,
        #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
        utopia: Option<Vec<f64>>,
    },
    /// `min { t : y ≦ a + t r }`.
    PascolettiSerafini { anchor_a: Vec<f64>, direction_r: Vec<f64> },
    /// `Σ y_i`.
    BensonSum,
    /// An expression over `y1, …, yp`.
    CustomG { expression: Expression },
}

#[cfg(feature = "serde")]
fn default_exponent() -> f64 {
    2.0
}

impl Scalarizer {
    pub fn method(&self) -> &'static str {
        match self {
            Self::WeightedSum { .. } => "weighted-sum",
            Self::Compromise { .. } => "compromise",
            Self::Conic { .. } => "conic",
            Self::TchebycheffMod { .. } => "tchebycheff-mod",
            Self::PascolettiSerafini { .. } => "pascoletti-serafini",
            Self::BensonSum => "benson-sum",
            Self::CustomG { .. } => "custom-g",
        }
    }
}

/// A scalarizing function plus the optional constraints of the scalarized
/// problem: `f(x) ≦ bound` and `f(x) ≦ f(anchor_point)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScalarizationSpec {
    #[cfg_attr(feature = "serde", serde(flatten))]
    pub function: Scalarizer,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub bound: Option<Vec<f64>>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub anchor_point: Option<String>,
}

impl From<Scalarizer> for ScalarizationSpec {
    fn from(function: Scalarizer) -> Self {
        Self { function, bound: None, anchor_point: None }
    }
}

fn check_len(name: &str, v: &[f64], p: usize) -> Result<()> {
    if v.len() != p {
        return Err(Error::InvalidSpec(format!("`{name}` has {} entries, expected {p}", v.len())));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidSpec(format!("`{name}` must be finite")));
    }
    Ok(())
}

fn check_nonneg(name: &str, v: &[f64]) -> Result<()> {
    if v.iter().any(|&x| x < 0.0) {
        return Err(Error::InvalidSpec(format!("`{name}` must be nonnegative")));
    }
    Ok(())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidSpec(format!("`alpha` must be a nonnegative real, got {alpha}")));
    }
    Ok(())
}

fn y_name(i: usize) -> String {
    format!("y{}", i + 1)
}

impl ScalarizationSpec {
    pub fn new(function: Scalarizer) -> Self {
        function.into()
    }

    pub fn with_bound(mut self, bound: Vec<f64>) -> Self {
        self.bound = Some(bound);
        self
    }

    pub fn with_anchor(mut self, label: impl Into<String>) -> Self {
        self.anchor_point = Some(label.into());
        self
    }

    pub fn method(&self) -> &'static str {
        self.function.method()
    }

    /// Structural checks against the number of objectives `p`.
    pub fn validate(&self, p: usize) -> Result<()> {
        match &self.function {
            Scalarizer::WeightedSum { lambda } => {
                check_len("lambda", lambda, p)?;
                check_nonneg("lambda", lambda)?;
            }
            Scalarizer::Compromise { lambda, exponent, utopia } => {
                check_len("lambda", lambda, p)?;
                check_nonneg("lambda", lambda)?;
                if !(*exponent > 0.0) || !exponent.is_finite() {
                    return Err(Error::InvalidSpec(format!("`exponent` must be positive, got {exponent}")));
                }
                if let Some(u) = utopia {
                    check_len("utopia", u, p)?;
                }
            }
            Scalarizer::Conic { lambda, alpha, reference } => {
                check_len("lambda", lambda, p)?;
                check_nonneg("lambda", lambda)?;
                check_alpha(*alpha)?;
                check_len("reference", reference, p)?;
            }
            Scalarizer::TchebycheffMod { lambda, alpha, utopia } => {
                check_len("lambda", lambda, p)?;
                check_nonneg("lambda", lambda)?;
                check_alpha(*alpha)?;
                if let Some(u) = utopia {
                    check_len("utopia", u, p)?;
                }
            }
            Scalarizer::PascolettiSerafini { anchor_a, direction_r } => {
                check_len("anchor_a", anchor_a, p)?;
                check_len("direction_r", direction_r, p)?;
                check_nonneg("direction_r", direction_r)?;
                if direction_r.iter().all(|&r| r == 0.0) {
                    return Err(Error::InvalidSpec("`direction_r` must not be the zero vector".into()));
                }
            }
            Scalarizer::BensonSum => {}
            Scalarizer::CustomG { expression } => {
                for name in expression.variables() {
                    if !(0..p).any(|i| y_name(i) == name) {
                        return Err(Error::InvalidSpec(format!(
                            "custom-g uses `{name}`; only y1..y{p} are available"
                        )));
                    }
                }
            }
        }
        if let Some(b) = &self.bound {
            check_len("bound", b, p)?;
        }
        Ok(())
    }

    /// Fills a missing utopia with `ideal - 1`.
    pub fn resolved(&self, instance: &DiscreteInstance) -> Self {
        let mut out = self.clone();
        let fill = |u: &mut Option<Vec<f64>>| {
            if u.is_none() {
                *u = Some(ideal_point(instance).iter().map(|v| v - 1.0).collect());
            }
        };
        match &mut out.function {
            Scalarizer::Compromise { utopia, .. } | Scalarizer::TchebycheffMod { utopia, .. } => fill(utopia),
            _ => {}
        }
        out
    }

    /// Value of the scalarizing function at `y`; `+∞` only for
    /// Pascoletti–Serafini outside its reachable set.
    pub fn value(&self, y: &[f64]) -> Result<f64> {
        let missing_utopia = || Error::InvalidSpec("utopia must be resolved before evaluation".into());
        match &self.function {
            Scalarizer::WeightedSum { lambda } => Ok(lambda.iter().zip(y).map(|(l, v)| l * v).sum()),
            Scalarizer::Compromise { lambda, exponent, utopia } => {
                let u = utopia.as_ref().ok_or_else(missing_utopia)?;
                let mut acc = 0.0;
                for i in 0..y.len() {
                    let d = y[i] - u[i];
                    if d < 0.0 {
                        return Err(Error::Domain(format!(
                            "compromise needs y >= utopia, but y{} = {} < {}",
                            i + 1,
                            y[i],
                            u[i]
                        )));
                    }
                    acc += lambda[i] * math::pow(d, *exponent);
                }
                Ok(math::pow(acc, 1.0 / exponent))
            }
            Scalarizer::Conic { lambda, alpha, reference } => {
                let linear: f64 = lambda.iter().zip(y).zip(reference).map(|((l, v), r)| l * (v - r)).sum();
                let spread: f64 = y.iter().zip(reference).map(|(v, r)| math::abs(v - r)).sum();
                Ok(linear + alpha * spread)
            }
            Scalarizer::TchebycheffMod { lambda, alpha, utopia } => {
                let u = utopia.as_ref().ok_or_else(missing_utopia)?;
                let total: f64 = y.iter().zip(u).map(|(v, w)| v - w).sum();
                let peak = lambda
                    .iter()
                    .zip(y)
                    .zip(u)
                    .map(|((l, v), w)| l * (v - w))
                    .fold(f64::NEG_INFINITY, f64::max);
                Ok(peak + alpha * total)
            }
            Scalarizer::PascolettiSerafini { anchor_a, direction_r } => {
                let mut t = f64::NEG_INFINITY;
                for i in 0..y.len() {
                    if direction_r[i] > 0.0 {
                        t = t.max((y[i] - anchor_a[i]) / direction_r[i]);
                    } else if y[i] > anchor_a[i] {
                        return Ok(f64::INFINITY);
                    }
                }
                Ok(t)
            }
            Scalarizer::BensonSum => Ok(y.iter().sum()),
            Scalarizer::CustomG { expression } => {
                let names: Vec<String> = (0..y.len()).map(y_name).collect();
                let bindings: Vec<(&str, f64)> = names.iter().map(String::as_str).zip(y.iter().copied()).collect();
                expression.eval(&bindings).map_err(|e| Error::eval("custom-g", e))
            }
        }
    }
}

/// Validates `spec` against `y.len()` and evaluates it.
pub fn eval_scalarization(spec: &ScalarizationSpec, y: &[f64]) -> Result<ExtendedReal> {
    spec.validate(y.len())?;
    let v = spec.value(y)?;
    Ok(ExtendedReal::from_f64(v).unwrap_or(ExtendedReal::PosInfinity))
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SolveResult {
    pub minimizers: BTreeSet<String>,
    /// `+∞` when no point is feasible or every feasible value is `+∞`.
    pub value: ExtendedReal,
    pub feasible_count: usize,
}

fn below(y: &[f64], cap: &[f64]) -> bool {
    y.iter().zip(cap).all(|(a, b)| a <= b)
}

/// Exact minimization over the points satisfying the spec's constraints.
/// Values within [`TIE_REL`] of the minimum are all reported.
pub fn solve_scalarization(spec: &ScalarizationSpec, instance: &DiscreteInstance) -> Result<SolveResult> {
    spec.validate(instance.p())?;
    let spec = spec.resolved(instance);
    let anchor = match &spec.anchor_point {
        Some(label) => Some(instance.get(label)?.f.to_vec()),
        None => None,
    };
    let mut feasible_count = 0;
    let mut scored = Vec::new();
    for pt in instance.points() {
        if spec.bound.as_ref().is_some_and(|b| !below(&pt.f, b)) {
            continue;
        }
        if anchor.as_ref().is_some_and(|a| !below(&pt.f, a)) {
            continue;
        }
        feasible_count += 1;
        let v = spec.value(&pt.f)?;
        if v.is_finite() {
            scored.push((pt.label.as_str(), v));
        }
    }
    let best = scored.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
    if !best.is_finite() {
        return Ok(SolveResult { minimizers: BTreeSet::new(), value: ExtendedReal::PosInfinity, feasible_count });
    }
    let minimizers = scored
        .iter()
        .filter(|(_, v)| math::close(*v, best, TIE_REL))
        .map(|(l, _)| String::from(*l))
        .collect();
    Ok(SolveResult { minimizers, value: ExtendedReal::Finite(best), feasible_count })
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ValidityVerdict {
    pub guaranteed_proper: bool,
    pub reason: String,
}

impl ValidityVerdict {
    fn yes(reason: impl Into<String>) -> Self {
        Self { guaranteed_proper: true, reason: reason.into() }
    }

    fn no(reason: impl Into<String>) -> Self {
        Self { guaranteed_proper: false, reason: reason.into() }
    }
}

/// Whether every minimizer of `spec` over `instance` is guaranteed to be
/// properly efficient, i.e. whether `g` is subdifferential-positive on the
/// image set. Utopia conditions are checked against the instance ideal.
pub fn check_param_validity(spec: &ScalarizationSpec, instance: &DiscreteInstance) -> ValidityVerdict {
    if let Err(e) = spec.validate(instance.p()) {
        return ValidityVerdict::no(format!("{e}"));
    }
    let spec = spec.resolved(instance);
    let ideal = ideal_point(instance);
    let positive = |l: &[f64]| l.iter().all(|&v| v > 0.0);
    let below_ideal = |u: &[f64]| u.iter().zip(ideal.iter()).all(|(a, b)| a < b);
    match &spec.function {
        Scalarizer::WeightedSum { lambda } => {
            if positive(lambda) {
                ValidityVerdict::yes("lambda > 0: gradient is lambda, componentwise positive")
            } else {
                ValidityVerdict::no("lambda has a zero entry, so the gradient is not strictly positive")
            }
        }
        Scalarizer::Compromise { lambda, exponent, utopia } => {
            let u = utopia.as_deref().unwrap_or_default();
            if !positive(lambda) {
                ValidityVerdict::no("lambda has a zero entry")
            } else if !(*exponent > 1.0) {
                ValidityVerdict::no(format!("exponent {exponent} is not greater than 1"))
            } else if !below_ideal(u) {
                ValidityVerdict::no("utopia is not strictly below the ideal point")
            } else {
                ValidityVerdict::yes("lambda > 0, exponent > 1 and utopia strictly below the ideal point")
            }
        }
        Scalarizer::Conic { lambda, alpha, .. } => {
            let min = lambda.iter().copied().fold(f64::INFINITY, f64::min);
            if *alpha < min {
                ValidityVerdict::yes(format!("0 <= alpha = {alpha} < min lambda = {min}"))
            } else {
                ValidityVerdict::no(format!("alpha = {alpha} is not below min lambda = {min}"))
            }
        }
        Scalarizer::TchebycheffMod { lambda, alpha, utopia } => {
            let u = utopia.as_deref().unwrap_or_default();
            if !positive(lambda) {
                ValidityVerdict::no("lambda has a zero entry")
            } else if !(*alpha > 0.0) {
                ValidityVerdict::no("alpha must be positive")
            } else if !below_ideal(u) {
                ValidityVerdict::no("utopia is not strictly below the ideal point")
            } else {
                ValidityVerdict::yes("lambda > 0, alpha > 0 and utopia strictly below the ideal point")
            }
        }
        Scalarizer::PascolettiSerafini { .. } => ValidityVerdict::no(
            "the target-direction function is not subdifferential-positive; use it for unboundedness diagnostics",
        ),
        Scalarizer::BensonSum => ValidityVerdict::no(
            "the anchored sum serves unboundedness diagnostics and carries no properness guarantee",
        ),
        Scalarizer::CustomG { .. } => {
            ValidityVerdict::no("no closed-form condition for custom functions; run the gradient check")
        }
    }
}

/// Ranges `[lo_i, hi_i]` containing every gradient of the built-in function
/// wherever it is differentiable; `None` where the range depends on `y`.
pub fn gradient_bounds(spec: &ScalarizationSpec, p: usize) -> Option<Vec<(f64, f64)>> {
    match &spec.function {
        Scalarizer::WeightedSum { lambda } => Some(lambda.iter().map(|&l| (l, l)).collect()),
        Scalarizer::Conic { lambda, alpha, .. } => Some(lambda.iter().map(|&l| (l - alpha, l + alpha)).collect()),
        Scalarizer::TchebycheffMod { lambda, alpha, .. } => Some(lambda.iter().map(|&l| (*alpha, l + alpha)).collect()),
        Scalarizer::BensonSum => Some(alloc::vec![(1.0, 1.0); p]),
        _ => None,
    }
}

/// Placement of gradient-check nodes inside the region.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridPlacement {
    /// `density` nodes per axis including both endpoints.
    Closed,
    /// `density` nodes per axis at `lo + (k + θ) h`, `h = (hi - lo) / density`,
    /// with `θ` the fractional part of `(seed + 1)` times the golden ratio.
    /// Nodes are interior and avoid rational kink locations.
    Jittered { seed: u64 },
}

impl GridPlacement {
    fn axis(self, lo: f64, hi: f64, density: usize) -> Vec<f64> {
        match self {
            Self::Closed => crate::analytic::sample::axis(lo, hi, density),
            Self::Jittered { seed } => {
                const GOLDEN: f64 = 0.618_033_988_749_894_8;
                let x = GOLDEN * (seed as f64 + 1.0);
                let theta = x - math::floor(x);
                let h = (hi - lo) / density as f64;
                (0..density).map(|k| lo + (k as f64 + theta) * h).collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GradientWitness {
    pub node: Vec<f64>,
    pub gradient: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SubdiffReport {
    pub pass: bool,
    pub nodes_checked: usize,
    /// Componentwise minimum over all node gradients; with a positive
    /// result this is an empirical lower bound `ε` on the region.
    pub min_gradient: Vec<f64>,
    pub max_gradient: Vec<f64>,
    /// First node (odometer order) with a component below `eps - tol`.
    pub witness: Option<GradientWitness>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubdiffOptions {
    pub placement: GridPlacement,
    pub tol: f64,
}

impl Default for SubdiffOptions {
    fn default() -> Self {
        Self { placement: GridPlacement::Closed, tol: 1e-6 }
    }
}

/// Central finite-difference gradients of `g` on a grid over `region`;
/// passes iff every component is at least `eps_i - tol` at every node.
pub fn check_subdiff_positive(
    g: impl Fn(&[f64]) -> Result<f64>,
    region: &[(f64, f64)],
    density: usize,
    eps: &[f64],
    options: SubdiffOptions,
) -> Result<SubdiffReport> {
    let p = region.len();
    if eps.len() != p {
        return Err(Error::DimensionMismatch { expected: p, found: eps.len() });
    }
    if region.iter().any(|&(lo, hi)| !(lo < hi) || !lo.is_finite() || !hi.is_finite()) {
        return Err(Error::Domain("region must be a finite nondegenerate box".into()));
    }
    if eps.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::Domain("eps must be componentwise positive".into()));
    }
    let min_density = if options.placement == GridPlacement::Closed { 2 } else { 1 };
    if density < min_density {
        return Err(Error::Domain(format!("grid density must be at least {min_density}")));
    }
    let axes: Vec<Vec<f64>> = region.iter().map(|&(lo, hi)| options.placement.axis(lo, hi, density)).collect();
    let checked_g = |y: &[f64]| -> Result<f64> {
        let v = g(y)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Domain(format!("g is not finite near node {y:?}")))
        }
    };
    let total = axes.iter().map(Vec::len).product();
    let mut min_gradient = alloc::vec![f64::INFINITY; p];
    let mut max_gradient = alloc::vec![f64::NEG_INFINITY; p];
    let mut witness = None;
    let mut index = alloc::vec![0usize; p];
    for _ in 0..total {
        let node: Vec<f64> = index.iter().zip(&axes).map(|(&k, ax)| ax[k]).collect();
        let grad = diff::gradient(checked_g, &node)?;
        for i in 0..p {
            min_gradient[i] = min_gradient[i].min(grad[i]);
            max_gradient[i] = max_gradient[i].max(grad[i]);
        }
        if witness.is_none() && grad.iter().zip(eps).any(|(g, e)| *g < e - options.tol) {
            witness = Some(GradientWitness { node, gradient: grad });
        }
        for d in (0..p).rev() {
            index[d] += 1;
            if index[d] < axes[d].len() {
                break;
            }
            index[d] = 0;
        }
    }
    Ok(SubdiffReport { pass: witness.is_none(), nodes_checked: total, min_gradient, max_gradient, witness })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum UnboundedClass {
    Diverging,
    Bounded,
    Inconclusive,
    /// The bound excludes every sample at every truncation.
    Vacuous,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct UnboundedReport {
    pub truncations: Vec<f64>,
    pub values: Vec<ExtendedReal>,
    pub classification: UnboundedClass,
    /// Set when the scalarized problem looks unbounded below, which rules
    /// out properly efficient solutions.
    pub no_proper_solution: bool,
    pub conclusion: String,
}

/// Classifies optimal values over growing truncations. Diverging: finite,
/// non-increasing, with `last <= -100 * max(|first|, 1)`. Bounded: finite
/// with spread at most `max(|first|, 1)`.
pub fn classify_values(values: &[ExtendedReal]) -> UnboundedClass {
    if values.is_empty() {
        return UnboundedClass::Inconclusive;
    }
    if values.iter().all(|v| *v == ExtendedReal::PosInfinity) {
        return UnboundedClass::Vacuous;
    }
    let Some(vals) = values.iter().map(|v| v.finite()).collect::<Option<Vec<f64>>>() else {
        return UnboundedClass::Inconclusive;
    };
    let first = vals[0];
    let last = vals[vals.len() - 1];
    let scale = math::abs(first).max(1.0);
    let monotone = vals.windows(2).all(|w| w[1] <= w[0]);
    if vals.len() >= 2 && monotone && last <= -crate::certify::DIVERGENCE_FACTOR * scale * (1.0 - crate::certify::THRESHOLD_SLACK) {
        return UnboundedClass::Diverging;
    }
    let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
    if max - min <= scale {
        UnboundedClass::Bounded
    } else {
        UnboundedClass::Inconclusive
    }
}

/// Solves the constrained scalarized problem on samples truncated at each
/// radius in `truncations` and classifies the optimal values.
///
/// Bounded domains are accepted; the truncation then has no effect.
pub fn check_unbounded(
    analytic: &AnalyticInstance,
    spec: &ScalarizationSpec,
    truncations: &[f64],
    control: &SampleControl,
) -> Result<UnboundedReport> {
    spec.validate(analytic.p())?;
    let schedule: Vec<Refinement> = truncations.iter().map(|&t| Refinement::Truncation(t)).collect();
    crate::certify::validate_schedule(&schedule)?;
    let mut values = Vec::with_capacity(schedule.len());
    for &step in &schedule {
        let sample = analytic.sample_with(&control.sample_spec(step))?;
        values.push(solve_scalarization(spec, &sample.instance)?.value);
    }
    let classification = classify_values(&values);
    let conclusion = match classification {
        UnboundedClass::Diverging => "no properly efficient solution: the scalarized problem is unbounded below",
        UnboundedClass::Bounded => {
            "optimal values stay bounded; this does not establish proper efficiency"
        }
        UnboundedClass::Inconclusive => "values neither diverge nor stabilize over the schedule; nothing follows",
        UnboundedClass::Vacuous => "the bound excludes every sample at every truncation; nothing follows",
    };
    Ok(UnboundedReport {
        truncations: truncations.to_vec(),
        values,
        classification,
        no_proper_solution: classification == UnboundedClass::Diverging,
        conclusion: conclusion.into(),
    })
}
