//! Finite-difference derivatives.
//!
//! The step for coordinate `i` is `1e-6 * (1 + |y_i|)`. Central differences
//! are used unless the stencil would leave the closed box, in which case the
//! one-sided difference pointing inward is taken.

use alloc::vec::Vec;

use crate::math;

/// Relative finite-difference step.
pub const FD_STEP: f64 = 1e-6;

pub fn step(y: f64) -> f64 {
    FD_STEP * (1.0 + math::abs(y))
}

/// Which stencil was used for a derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stencil {
    Central,
    Forward,
    Backward,
}

/// Picks the stencil for `y` inside `[lo, hi]`.
pub fn stencil(y: f64, lo: f64, hi: f64) -> Stencil {
    let h = step(y);
    if y - h < lo && y + h <= hi {
        Stencil::Forward
    } else if y + h > hi && y - h >= lo {
        Stencil::Backward
    } else {
        Stencil::Central
    }
}

/// Derivative of a scalar function of one variable.
pub fn derivative<E>(g: impl Fn(f64) -> Result<f64, E>, s: f64, kind: Stencil) -> Result<f64, E> {
    let h = step(s);
    Ok(match kind {
        Stencil::Central => (g(s + h)? - g(s - h)?) / (2.0 * h),
        Stencil::Forward => (g(s + h)? - g(s)?) / h,
        Stencil::Backward => (g(s)? - g(s - h)?) / h,
    })
}

/// Jacobian of `f: R^n -> R^m` at `y`, row-major `m x n`. `bounds` (one per
/// input) selects one-sided stencils at the box boundary; pass infinite
/// bounds for plain central differences.
pub fn jacobian<E>(
    f: impl Fn(&[f64]) -> Result<Vec<f64>, E>,
    y: &[f64],
    bounds: &[(f64, f64)],
) -> Result<Vec<Vec<f64>>, E> {
    let n = y.len();
    let mut columns = Vec::with_capacity(n);
    let mut probe = y.to_vec();
    for j in 0..n {
        let (lo, hi) = bounds.get(j).copied().unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
        let h = step(y[j]);
        let column: Vec<f64> = match stencil(y[j], lo, hi) {
            Stencil::Central => {
                probe[j] = y[j] + h;
                let plus = f(&probe)?;
                probe[j] = y[j] - h;
                let minus = f(&probe)?;
                plus.iter().zip(&minus).map(|(a, b)| (a - b) / (2.0 * h)).collect()
            }
            Stencil::Forward => {
                probe[j] = y[j] + h;
                let plus = f(&probe)?;
                let here = f(y)?;
                plus.iter().zip(&here).map(|(a, b)| (a - b) / h).collect()
            }
            Stencil::Backward => {
                let here = f(y)?;
                probe[j] = y[j] - h;
                let minus = f(&probe)?;
                here.iter().zip(&minus).map(|(a, b)| (a - b) / h).collect()
            }
        };
        probe[j] = y[j];
        columns.push(column);
    }
    let m = columns.first().map_or(0, Vec::len);
    Ok((0..m).map(|i| columns.iter().map(|c| c[i]).collect()).collect())
}

/// Central-difference gradient of a scalar function.
pub fn gradient<E>(g: impl Fn(&[f64]) -> Result<f64, E>, y: &[f64]) -> Result<Vec<f64>, E> {
    let rows = jacobian(|z| g(z).map(|v| alloc::vec![v]), y, &[])?;
    Ok(rows.into_iter().next().unwrap_or_default())
}
