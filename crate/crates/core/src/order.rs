//! Objective vectors and the three componentwise orders on them.

use alloc::vec::Vec;
use core::ops::Deref;

use crate::error::{Error, Result};

/// A point of objective space: at least two finite values.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "Vec<f64>", into = "Vec<f64>"))]
pub struct ObjectiveVector(Vec<f64>);

impl ObjectiveVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidVector);
        }
        Ok(Self(values))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for ObjectiveVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for ObjectiveVector {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<ObjectiveVector> for Vec<f64> {
    fn from(v: ObjectiveVector) -> Self {
        v.0
    }
}

/// `Weak` is `≦`, `StrictPartial` is `≤` (weak and not equal) and `Strong`
/// is `<` in every component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum DominanceOrder {
    Weak,
    StrictPartial,
    Strong,
}

/// Whether `a` precedes `b` in the given order. Comparisons are exact.
pub fn dominates(a: &[f64], b: &[f64], order: DominanceOrder) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
    }
    Ok(dominates_unchecked(a, b, order))
}

#[inline]
pub(crate) fn dominates_unchecked(a: &[f64], b: &[f64], order: DominanceOrder) -> bool {
    match order {
        DominanceOrder::Weak => a.iter().zip(b).all(|(x, y)| x <= y),
        DominanceOrder::StrictPartial => {
            let mut strict = false;
            for (x, y) in a.iter().zip(b) {
                if x > y {
                    return false;
                }
                strict |= x < y;
            }
            strict
        }
        DominanceOrder::Strong => a.iter().zip(b).all(|(x, y)| x < y),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use DominanceOrder::*;

    #[test]
    fn reflexivity_and_irreflexivity() {
        assert!(dominates(&[1.0, 1.0], &[1.0, 1.0], Weak).unwrap());
        assert!(!dominates(&[1.0, 1.0], &[1.0, 1.0], StrictPartial).unwrap());
        assert!(!dominates(&[1.0, 1.0], &[1.0, 1.0], Strong).unwrap());
    }

    #[test]
    fn componentwise_examples() {
        assert!(!dominates(&[0.0, 3.0], &[1.0, 1.0], StrictPartial).unwrap());
        assert!(dominates(&[1.0, 1.0], &[1.0, 1.5], StrictPartial).unwrap());
        assert!(!dominates(&[1.0, 1.0], &[1.0, 1.5], Strong).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        assert_eq!(
            dominates(&[1.0, 2.0], &[1.0, 2.0, 3.0], Weak),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        );
    }

    #[test]
    fn vectors_reject_short_or_non_finite_input() {
        assert!(ObjectiveVector::new(alloc::vec![1.0]).is_err());
        assert!(ObjectiveVector::new(alloc::vec![1.0, f64::NAN]).is_err());
        assert!(ObjectiveVector::new(alloc::vec![1.0, f64::INFINITY]).is_err());
        assert!(ObjectiveVector::new(alloc::vec![1.0, -2.0]).is_ok());
    }

    proptest! {
        #[test]
        fn strong_implies_strict_implies_weak(
            a in proptest::collection::vec(-3i8..3, 3),
            b in proptest::collection::vec(-3i8..3, 3),
        ) {
            let a: Vec<f64> = a.into_iter().map(f64::from).collect();
            let b: Vec<f64> = b.into_iter().map(f64::from).collect();
            if dominates_unchecked(&a, &b, Strong) {
                prop_assert!(dominates_unchecked(&a, &b, StrictPartial));
            }
            if dominates_unchecked(&a, &b, StrictPartial) {
                prop_assert!(dominates_unchecked(&a, &b, Weak));
            }
        }
    }
}
