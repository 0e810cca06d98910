use mopef_core::certify::{
    certify_benson, certify_geoffrion, certify_henig, cone_membership, two_objective_identity, DEFAULT_TOL,
};
use mopef_core::instance::{efficient_set, is_efficient_at};
use mopef_core::{DiscreteInstance, ExtendedReal};
use proptest::prelude::*;

/// Instances with coarse values, so ties and duplicates are common.
fn instances() -> impl Strategy<Value = DiscreteInstance> {
    (2usize..=3, 1usize..=50).prop_flat_map(|(p, n)| {
        let value = prop_oneof![(0i32..8).prop_map(|v| v as f64 * 0.5), -5.0f64..5.0];
        proptest::collection::vec(proptest::collection::vec(value, p), n)
            .prop_map(move |vs| DiscreteInstance::from_vectors(p, vs).unwrap())
    })
}

/// Largest over competitors and improving indices of the smallest
/// gain/loss ratio, by direct enumeration of all triples.
fn ratio_oracle(inst: &DiscreteInstance, idx: usize) -> f64 {
    let ybar = &inst.points()[idx].f;
    let mut m = 0.0f64;
    for (k, pt) in inst.points().iter().enumerate() {
        for i in 0..inst.p() {
            if k == idx || pt.f[i] >= ybar[i] {
                continue;
            }
            let least = (0..inst.p())
                .filter(|&j| pt.f[j] > ybar[j])
                .map(|j| (ybar[i] - pt.f[i]) / (pt.f[j] - ybar[j]))
                .fold(f64::INFINITY, f64::min);
            m = m.max(least);
        }
    }
    m
}

fn delta_grid() -> Vec<f64> {
    let mut grid = vec![0.0];
    let mut d = 1e-6;
    while d <= 1e6 {
        grid.push(d);
        d *= 1.01;
    }
    grid
}

/// Index of the first grid value at which some competitor difference
/// `f(x̄) - f(x)` enters `C_δ`, by testing membership directly.
fn scan_oracle(inst: &DiscreteInstance, idx: usize, grid: &[f64]) -> Option<usize> {
    let ybar = &inst.points()[idx].f;
    let diffs: Vec<Vec<f64>> = inst
        .points()
        .iter()
        .map(|pt| ybar.iter().zip(pt.f.iter()).map(|(a, b)| a - b).collect::<Vec<f64>>())
        .filter(|d| d.iter().any(|&v| v != 0.0))
        .collect();
    grid.iter().position(|&delta| diffs.iter().any(|d| cone_membership(d, delta).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn certifiers_agree(inst in instances()) {
        for (k, pt) in inst.points().iter().enumerate() {
            let efficient = is_efficient_at(&inst, k);
            let g = certify_geoffrion(&inst, &pt.label).unwrap();
            let b = certify_benson(&inst, &pt.label, DEFAULT_TOL).unwrap();
            let h = certify_henig(&inst, &pt.label).unwrap();
            prop_assert_eq!(g.efficient, efficient);
            prop_assert_eq!(b.proper, efficient);
            prop_assert_eq!(h.proper, efficient);
            if let Some(v) = &b.violation {
                prop_assert!(v.direction.iter().all(|&d| d <= 1e-12));
                prop_assert!((v.direction.iter().map(|d| d.abs()).sum::<f64>() - 1.0).abs() < 1e-9);
                for (r, d) in v.reconstruct().iter().zip(&v.direction) {
                    prop_assert!((r - d).abs() <= 1e-9);
                }
            }
            if efficient {
                prop_assert_eq!(g.m_min, Some(ratio_oracle(&inst, k)));
                for pair in &g.binding_pairs {
                    prop_assert!((pair.ratio - g.m_min.unwrap()).abs() <= 1e-12 * pair.ratio.max(1.0));
                }
            }
        }
    }

    #[test]
    fn henig_threshold_matches_scan(inst in instances()) {
        let grid = delta_grid();
        for label in efficient_set(&inst) {
            let idx = inst.index_of(&label).unwrap();
            let h = certify_henig(&inst, &label).unwrap();
            match scan_oracle(&inst, idx, &grid) {
                Some(k) => {
                    let d = h.delta_sup.finite().unwrap();
                    prop_assert!(d <= grid[k] * (1.0 + 1e-12));
                    prop_assert!(k == 0 || d > grid[k - 1]);
                }
                None => prop_assert!(h.delta_sup.to_f64() > *grid.last().unwrap()),
            }
        }
    }

    #[test]
    fn two_objective_identity_against_oracles(
        vs in proptest::collection::vec(proptest::collection::vec(-5.0f64..5.0, 2), 2..40)
    ) {
        let inst = DiscreteInstance::from_vectors(2, vs).unwrap();
        let grid = delta_grid();
        for label in efficient_set(&inst) {
            let idx = inst.index_of(&label).unwrap();
            let g = certify_geoffrion(&inst, &label).unwrap();
            let h = certify_henig(&inst, &label).unwrap();
            // oracle first: enumeration against the grid scan, at grid resolution
            if let Some(k) = scan_oracle(&inst, idx, &grid) {
                if k > 0 {
                    let m = ratio_oracle(&inst, idx);
                    prop_assert!(m >= 1.0 + 1.0 / grid[k] - 1e-9);
                    prop_assert!(m <= 1.0 + 1.0 / grid[k - 1] + 1e-9);
                }
            }
            match h.delta_sup {
                ExtendedReal::Finite(_) => {
                    let id = two_objective_identity(&g, &h, 2, 1e-6).unwrap();
                    prop_assert!(id.holds, "{:?}", id);
                }
                _ => prop_assert!(g.m_min.unwrap() <= 1.0),
            }
        }
    }

    #[test]
    fn membership_is_monotone(y in proptest::collection::vec(-3.0f64..3.0, 2..5), a in 0.0f64..10.0, b in 0.0f64..10.0) {
        prop_assume!(y.iter().sum::<f64>() > 0.0);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        if cone_membership(&y, lo).unwrap() {
            prop_assert!(cone_membership(&y, hi).unwrap());
        }
    }
}

#[test]
fn identity_is_not_claimed_beyond_two_objectives() {
    let inst = DiscreteInstance::from_vectors(3, vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 2.5]]).unwrap();
    let g = certify_geoffrion(&inst, "0").unwrap();
    let h = certify_henig(&inst, "0").unwrap();
    assert!(two_objective_identity(&g, &h, 3, 1e-6).is_none());
}
