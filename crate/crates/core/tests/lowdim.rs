use kdemode::datasets::random_mixture;
use kdemode::oracle::grid_mode;
use kdemode::points::{squared_distance, PointSet};
use kdemode::polysolve::{
    mode_low_dim_with, syspoly_search, truncation_order, LowDimConfig, TruncatedTaylorPoly,
    DEFAULT_S_MAX,
};
use kdemode::{kde_unnormalized, SolveParams};
use proptest::prelude::*;

fn in_ball(center: &[f64], radius: f64, unit: &[f64], scale: f64) -> Vec<f64> {
    let norm = unit.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-12);
    center
        .iter()
        .zip(unit)
        .map(|(c, u)| c + radius * scale * u / norm)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn truncated_sum_stays_within_an_eighth(
        d in 1usize..=2,
        er_idx in 0usize..3,
        q in prop::collection::vec(-3.0f64..3.0, 2),
        dirs in prop::collection::vec((prop::collection::vec(-1.0f64..1.0, 2), 0.0f64..1.0), 1..20),
        probe in (prop::collection::vec(-1.0f64..1.0, 2), 0.0f64..1.0),
    ) {
        let er: f64 = [0.05, 0.1, 0.2][er_idx];
        let (eps, rho) = (0.5, er / 0.5);
        let l = (1.0 / er).ln().sqrt();
        let q = &q[..d];
        let rows: Vec<Vec<f64>> = dirs.iter().map(|(u, s)| in_ball(q, 4.0 * l, &u[..d], *s)).collect();
        let centers = PointSet::new(&rows).unwrap();
        let order = truncation_order(2.0, 4.0, d, eps, rho).unwrap().min(DEFAULT_S_MAX);
        let poly = TruncatedTaylorPoly::new(centers.clone(), order).unwrap();
        let x = in_ball(q, 2.0 * l, &probe.0[..d], probe.1);
        let err = (poly.eval(&x) - kde_unnormalized(&centers, &x).unwrap()).abs();
        prop_assert!(err <= centers.len() as f64 * er / 8.0, "err {err}");
    }
}

/// Maximum of `G_Q` over a ball by a square grid of spacing `h`.
fn dense_density_max(q_set: &PointSet, center: &[f64], radius: f64, h: f64) -> f64 {
    let steps = (2.0 * radius / h).ceil() as i64;
    let mut best = 0.0_f64;
    for i in 0..=steps {
        for j in 0..=steps {
            let x = [
                center[0] - radius + i as f64 * h,
                center[1] - radius + j as f64 * h,
            ];
            if squared_distance(&x, center) <= radius * radius {
                best = best.max(kde_unnormalized(q_set, &x).unwrap());
            }
        }
    }
    best
}

#[test]
fn search_reaches_dense_grid_max_of_neighborhood() {
    let (eps, rho): (f64, f64) = (0.3, 0.2);
    for seed in 0..4 {
        let p = random_mixture(12, 2, 2, 0.4, 0.8, seed).unwrap();
        let q = [0.0, 0.0];
        let rp = 4.0 * (1.0 / (eps * rho)).ln().sqrt();
        let members: Vec<usize> = (0..p.len())
            .filter(|&i| squared_distance(p.point(i), &q) <= rp * rp)
            .collect();
        let q_set = p.select(&members).unwrap();
        let x = syspoly_search(&p, &q, 2.0, 4.0, eps, rho).unwrap();
        let radius = 2.0 * (1.0 / (eps * rho)).ln().sqrt();
        let reference = dense_density_max(&q_set, &q, radius, 0.01);
        let got = kde_unnormalized(&q_set, &x).unwrap();
        assert!(
            got >= reference - p.len() as f64 * eps * rho / 2.0,
            "seed {seed}: {got} vs {reference}"
        );
    }
}

#[test]
fn three_clusters_match_grid_oracle() {
    let p = random_mixture(200, 2, 3, 0.4, 1.5, 21).unwrap();
    let params = SolveParams::new(0.3, 0.2, 0.1, 21).unwrap();
    let report = mode_low_dim_with(&p, &params, &LowDimConfig::default()).unwrap();
    let oracle = grid_mode(&p, &params).unwrap();
    assert!(report.all_certified);
    assert!(report.result.value >= oracle.value - params.eps_rho());
    assert!(report.searched <= report.neighborhoods);
}

#[test]
fn one_dimensional_instances_match_grid_oracle() {
    for seed in 0..6 {
        let p = random_mixture(150, 1, 3, 0.5, 2.0, 100 + seed).unwrap();
        let params = SolveParams::new(0.5, 0.3, 0.1, seed).unwrap();
        let found = mode_low_dim_with(&p, &params, &LowDimConfig::default()).unwrap();
        let oracle = grid_mode(&p, &params).unwrap();
        assert!(
            found.result.value >= oracle.value - params.eps_rho(),
            "seed {seed}"
        );
    }
}

#[test]
fn result_is_deterministic_in_the_seed() {
    let p = random_mixture(60, 2, 2, 0.3, 1.0, 5).unwrap();
    let params = SolveParams::new(0.5, 0.3, 0.1, 9).unwrap();
    let a = mode_low_dim_with(&p, &params, &LowDimConfig::default()).unwrap();
    let b = mode_low_dim_with(&p, &params, &LowDimConfig::default()).unwrap();
    assert_eq!(a.result.x, b.result.x);
    assert_eq!(a.result.value, b.result.value);
}
