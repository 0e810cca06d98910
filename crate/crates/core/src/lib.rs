//! Proper-efficiency tooling for multi-objective minimization problems.
//!
//! Everything here works on finite point sets in objective space: either a
//! [`DiscreteInstance`] given directly, or the grid sample of an
//! [`AnalyticInstance`] whose objectives are small expressions over a box.
//!
//! * [`instance`] and [`order`]: componentwise orders, efficient sets, ideal and
//!   utopia points.
//! * [`certify`]: Geoffrion, Benson and Henig certificates, plus divergence
//!   studies of the Geoffrion constant under grid refinement.
//! * [`scalarize`]: the classical scalarizing functions, their parameter
//!   conditions and unboundedness diagnostics.
//! * [`sweep`]: parametric sweeps and the conic-scalarization coverage
//!   construction.
//! * [`transform`]: objective transformations and their Jacobian conditions.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![warn(missing_debug_implementations)]
// `!(x > 0.0)` rejects NaN together with the failing values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analytic;
pub mod certify;
pub mod diff;
mod error;
pub mod instance;
pub mod lp;
mod math;
pub mod order;
mod real;
pub mod scalarize;
pub mod sweep;
pub mod transform;

pub use analytic::{AnalyticInstance, Expression};
pub use error::{Error, InstanceViolation, Result};
pub use instance::{DiscreteInstance, Point};
pub use order::{DominanceOrder, ObjectiveVector};
pub use real::ExtendedReal;
