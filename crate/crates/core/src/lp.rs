//! Dense phase-1 simplex for small feasibility problems `A z = b, z >= 0`.
//!
//! Rows with negative right-hand side are negated, one artificial variable is
//! added per row, and the sum of artificials is minimized with Bland's rule
//! (the systems built by the certifiers are highly degenerate).

use alloc::vec::Vec;

const PIVOT_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseOne {
    /// Minimal sum of artificial variables.
    pub infeasibility: f64,
    /// Values of the original variables at the final basis.
    pub solution: Vec<f64>,
    pub pivots: usize,
}

impl PhaseOne {
    pub fn feasible(&self, tol: f64) -> bool {
        self.infeasibility <= tol
    }
}

/// Solves the phase-1 problem for `A z = b`, `A` given as rows.
pub fn phase_one(a: &[Vec<f64>], b: &[f64]) -> PhaseOne {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    assert_eq!(b.len(), m, "row count mismatch");
    let width = n + m + 1;
    let rhs = n + m;

    let mut tab: Vec<Vec<f64>> = Vec::with_capacity(m);
    for (row, &bi) in a.iter().zip(b) {
        assert_eq!(row.len(), n, "ragged constraint matrix");
        let sign = if bi < 0.0 { -1.0 } else { 1.0 };
        let mut t = alloc::vec![0.0; width];
        for (dst, v) in t.iter_mut().zip(row) {
            *dst = sign * v;
        }
        t[rhs] = sign * bi;
        tab.push(t);
    }
    for (i, t) in tab.iter_mut().enumerate() {
        t[n + i] = 1.0;
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // reduced-cost row of the artificial objective, written as "gain per unit"
    let mut gain = alloc::vec![0.0; width];
    for t in &tab {
        for j in 0..n {
            gain[j] += t[j];
        }
        gain[rhs] += t[rhs];
    }

    let max_pivots = 50 * (n + m) + 100;
    let mut pivots = 0;
    while pivots < max_pivots {
        let Some(enter) = (0..n + m).find(|&j| gain[j] > PIVOT_EPS && !basis.contains(&j)) else {
            break;
        };
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for (i, t) in tab.iter().enumerate() {
            if t[enter] > PIVOT_EPS {
                let ratio = t[rhs] / t[enter];
                let better = match leave {
                    None => true,
                    Some(l) => ratio < best || (ratio == best && basis[i] < basis[l]),
                };
                if better {
                    best = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(r) = leave else {
            // unbounded direction cannot happen for a phase-1 objective bounded below
            break;
        };
        pivot(&mut tab, &mut gain, r, enter);
        basis[r] = enter;
        pivots += 1;
    }

    let mut solution = alloc::vec![0.0; n];
    let mut infeasibility = 0.0;
    for (i, &var) in basis.iter().enumerate() {
        let value = tab[i][rhs].max(0.0);
        if var < n {
            solution[var] = value;
        } else {
            infeasibility += value;
        }
    }
    PhaseOne { infeasibility, solution, pivots }
}

fn pivot(tab: &mut [Vec<f64>], gain: &mut [f64], r: usize, c: usize) {
    let p = tab[r][c];
    for v in tab[r].iter_mut() {
        *v /= p;
    }
    let pivot_row = tab[r].clone();
    for (i, row) in tab.iter_mut().enumerate() {
        if i == r {
            continue;
        }
        let factor = row[c];
        if factor != 0.0 {
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v -= factor * pv;
            }
            row[c] = 0.0;
        }
    }
    let factor = gain[c];
    if factor != 0.0 {
        for (v, pv) in gain.iter_mut().zip(&pivot_row) {
            *v -= factor * pv;
        }
        gain[c] = 0.0;
    }
}
