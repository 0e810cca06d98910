//! Finite instances: labeled points in objective space.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, InstanceViolation, Result};
use crate::order::{dominates_unchecked, DominanceOrder, ObjectiveVector};

/// A labeled point of a finite instance.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Point {
    pub label: String,
    pub f: ObjectiveVector,
}

/// Unvalidated instance data, as read from a file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawInstance {
    pub p: usize,
    pub points: Vec<(String, Vec<f64>)>,
}

/// A finite set of labeled points, all in the same `p`-dimensional objective
/// space (`p >= 2`), with unique labels.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DiscreteInstance {
    p: usize,
    points: Vec<Point>,
}

/// Checks every invariant of `raw` and reports all violations at once.
pub fn validate_instance(raw: RawInstance) -> core::result::Result<DiscreteInstance, Vec<InstanceViolation>> {
    let mut violations = Vec::new();
    if raw.p < 2 {
        violations.push(InstanceViolation::TooFewObjectives { p: raw.p });
    }
    if raw.points.is_empty() {
        violations.push(InstanceViolation::NoPoints);
    }
    let mut seen = BTreeSet::new();
    for (label, values) in &raw.points {
        if !seen.insert(label.as_str()) {
            violations.push(InstanceViolation::DuplicateLabel { label: label.clone() });
        }
        if values.len() != raw.p {
            violations.push(InstanceViolation::LengthMismatch {
                label: label.clone(),
                expected: raw.p,
                found: values.len(),
            });
        }
        for (index, v) in values.iter().enumerate() {
            if !v.is_finite() {
                violations.push(InstanceViolation::NonFinite { label: label.clone(), index });
            }
        }
    }
    if !violations.is_empty() {
        return Err(violations);
    }
    let points = raw
        .points
        .into_iter()
        .map(|(label, values)| Point { label, f: ObjectiveVector::new(values).expect("validated") })
        .collect();
    Ok(DiscreteInstance { p: raw.p, points })
}

impl DiscreteInstance {
    pub fn new<L: Into<String>>(p: usize, points: impl IntoIterator<Item = (L, Vec<f64>)>) -> Result<Self> {
        let raw = RawInstance { p, points: points.into_iter().map(|(l, v)| (l.into(), v)).collect() };
        validate_instance(raw).map_err(Error::InvalidInstance)
    }

    /// Labels the vectors `"0"`, `"1"`, ... in order.
    pub fn from_vectors(p: usize, vectors: impl IntoIterator<Item = Vec<f64>>) -> Result<Self> {
        Self::new(p, vectors.into_iter().enumerate().map(|(k, v)| (alloc::format!("{k}"), v)))
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.points
            .iter()
            .position(|pt| pt.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.into()))
    }

    pub fn get(&self, label: &str) -> Result<&Point> {
        Ok(&self.points[self.index_of(label)?])
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.points.iter().map(|pt| pt.label.as_str())
    }

    /// Same labels, new objective vectors. Used by transformations.
    pub(crate) fn with_vectors(&self, vectors: Vec<ObjectiveVector>) -> Self {
        debug_assert_eq!(vectors.len(), self.points.len());
        let p = vectors.first().map_or(self.p, |v| v.len());
        let points = self
            .points
            .iter()
            .zip(vectors)
            .map(|(pt, f)| Point { label: pt.label.clone(), f })
            .collect();
        Self { p, points }
    }

    /// Instance without the points at the given indices.
    pub fn without(&self, drop: &BTreeSet<usize>) -> Self {
        let points = self
            .points
            .iter()
            .enumerate()
            .filter(|(k, _)| !drop.contains(k))
            .map(|(_, pt)| pt.clone())
            .collect();
        Self { p: self.p, points }
    }
}

/// Whether no other point strict-partially dominates point `idx`.
pub fn is_efficient_at(instance: &DiscreteInstance, idx: usize) -> bool {
    let y = &instance.points[idx].f;
    !instance
        .points
        .iter()
        .any(|other| dominates_unchecked(&other.f, y, DominanceOrder::StrictPartial))
}

/// Indices of efficient points, ascending.
///
/// Bi-objective instances use a sort-and-sweep in `O(n log n)`; larger `p`
/// falls back to the pairwise scan.
pub fn efficient_indices(instance: &DiscreteInstance) -> Vec<usize> {
    if instance.p == 2 {
        efficient_indices_biobjective(instance)
    } else {
        (0..instance.len()).filter(|&k| is_efficient_at(instance, k)).collect()
    }
}

fn efficient_indices_biobjective(instance: &DiscreteInstance) -> Vec<usize> {
    let pts = &instance.points;
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&a, &b| {
        let (ya, yb) = (&pts[a].f, &pts[b].f);
        ya[0].total_cmp(&yb[0]).then(ya[1].total_cmp(&yb[1]))
    });
    let mut efficient = Vec::new();
    let mut best_second = f64::INFINITY;
    let mut k = 0;
    while k < order.len() {
        // group of identical vectors
        let head = &pts[order[k]].f;
        let mut end = k + 1;
        while end < order.len() && pts[order[end]].f.as_slice() == head.as_slice() {
            end += 1;
        }
        if head[1] < best_second {
            efficient.extend_from_slice(&order[k..end]);
            best_second = head[1];
        }
        k = end;
    }
    efficient.sort_unstable();
    efficient
}

/// Labels of the efficient points.
pub fn efficient_set(instance: &DiscreteInstance) -> BTreeSet<String> {
    efficient_indices(instance)
        .into_iter()
        .map(|k| instance.points[k].label.clone())
        .collect()
}

/// Componentwise minima over all points.
pub fn ideal_point(instance: &DiscreteInstance) -> ObjectiveVector {
    let mut ideal = alloc::vec![f64::INFINITY; instance.p];
    for pt in &instance.points {
        for (m, v) in ideal.iter_mut().zip(pt.f.iter()) {
            *m = m.min(*v);
        }
    }
    ObjectiveVector::new(ideal).expect("nonempty validated instance")
}

/// `ideal - shift * (1, ..., 1)`.
pub fn utopia_point(instance: &DiscreteInstance, shift: f64) -> Result<ObjectiveVector> {
    if !(shift > 0.0) || !shift.is_finite() {
        return Err(Error::NonPositiveShift(shift));
    }
    let ideal = ideal_point(instance);
    ObjectiveVector::new(ideal.iter().map(|v| v - shift).collect())
}

/// Componentwise `(min, max)` over all points.
pub fn objective_ranges(instance: &DiscreteInstance) -> Vec<(f64, f64)> {
    let mut ranges = alloc::vec![(f64::INFINITY, f64::NEG_INFINITY); instance.p];
    for pt in &instance.points {
        for (r, v) in ranges.iter_mut().zip(pt.f.iter()) {
            r.0 = r.0.min(*v);
            r.1 = r.1.max(*v);
        }
    }
    ranges
}

/// Groups point indices by identical objective vector. Used to check that
/// duplicates share a verdict.
pub fn duplicate_groups(instance: &DiscreteInstance) -> Vec<Vec<usize>> {
    let mut groups: BTreeMap<Vec<u64>, Vec<usize>> = BTreeMap::new();
    for (k, pt) in instance.points.iter().enumerate() {
        let key = pt.f.iter().map(|v| v.to_bits()).collect();
        groups.entry(key).or_default().push(k);
    }
    groups.into_values().filter(|g| g.len() > 1).collect()
}
