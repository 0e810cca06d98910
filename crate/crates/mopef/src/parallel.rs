//! Data-parallel drivers. Results are collected in input order, so output
//! does not depend on the thread count.

use mopef_core::sweep::{solve_point, ParamGrid, SweepRow};
use mopef_core::{DiscreteInstance, Result};
use rayon::prelude::*;

/// Environment variable fixing the worker count.
pub const THREADS_ENV: &str = "MOPEF_THREADS";

/// Sizes the global pool from [`THREADS_ENV`]; ignored when unset, zero or
/// unparsable, or when the pool already exists.
pub fn configure_threads() {
    let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) else {
        return;
    };
    if n > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// Parallel version of [`mopef_core::sweep::sweep`] with identical output.
pub fn sweep(instance: &DiscreteInstance, grid: &ParamGrid) -> Result<Vec<SweepRow>> {
    grid.points(instance.p())?.into_par_iter().map(|pt| solve_point(instance, pt)).collect()
}

/// Applies `f` to every point index in parallel, preserving order.
pub fn map_points<T: Send>(instance: &DiscreteInstance, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    (0..instance.len()).into_par_iter().map(f).collect()
}
