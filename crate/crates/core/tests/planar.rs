use kdemode::datasets::{Component, MixtureSpec};
use kdemode::oracle::{grid_mode, max_depth_brute_force};
use kdemode::params::rng_from_seed;
use kdemode::points::distance;
use kdemode::rect2d::{
    depth_at, draw_from, max_depth_point, mode_2d, rect_family, width_levels, Rect, RectFamily,
};
use kdemode::{Error, PointSet, SolveParams};
use proptest::prelude::*;

fn rect_strategy() -> impl Strategy<Value = Rect> {
    (0i32..30, 0i32..30, 0i32..8, 0i32..8).prop_map(|(x, y, w, h)| {
        let (x, y) = (x as f64 * 0.5, y as f64 * 0.5);
        Rect::new([x, y], [x + w as f64 * 0.5, y + h as f64 * 0.5]).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sweepline_matches_corner_grid(rects in prop::collection::vec(rect_strategy(), 1..200)) {
        let family = RectFamily::new(rects);
        let (x, depth) = max_depth_point(&family).unwrap();
        prop_assert_eq!(depth, max_depth_brute_force(&family).unwrap());
        prop_assert_eq!(depth_at(&family, x), depth);
    }

    #[test]
    fn depth_matches_naive_count(
        rects in prop::collection::vec(rect_strategy(), 50),
        x in 0.0f64..18.0,
        y in 0.0f64..18.0,
    ) {
        let family = RectFamily::new(rects);
        let naive = family
            .rects
            .iter()
            .filter(|r| r.lo[0] <= x && x <= r.hi[0] && r.lo[1] <= y && y <= r.hi[1])
            .count();
        prop_assert_eq!(depth_at(&family, [x, y]), naive);
    }
}

#[test]
fn sampled_depth_fraction_matches_implicit_count() {
    let p = PointSet::new(&[[0.0, 0.0], [0.3, -0.2], [1.0, 1.0], [-0.5, 0.4]]).unwrap();
    let levels = width_levels(0.5, 0.5).unwrap();
    let family = rect_family(&p, &levels).unwrap();
    let x = [0.1, 0.05];
    let exact = family.depth_at(x) as f64 / family.total_size() as f64;
    let samples = 10_000;
    let drawn = RectFamily::new(draw_from(&family, samples, &mut rng_from_seed(12)));
    let empirical = depth_at(&drawn, x) as f64 / samples as f64;
    let se = (exact * (1.0 - exact) / samples as f64).sqrt();
    assert!(
        (empirical - exact).abs() <= 3.0 * se,
        "{empirical} vs {exact}"
    );
}

#[test]
fn symmetric_clusters_land_in_a_cluster() {
    let spec = MixtureSpec {
        components: vec![
            Component {
                weight: 1.0,
                mean: vec![-2.0, 0.0],
                scale: 0.2,
            },
            Component {
                weight: 1.0,
                mean: vec![2.0, 0.0],
                scale: 0.2,
            },
        ],
    };
    let p = spec.generate(400, 4).unwrap();
    let params = SolveParams::new(0.3, 0.2, 0.2, 4).unwrap();
    let found = mode_2d(&p, &params).unwrap();
    let oracle = grid_mode(&p, &params).unwrap();
    assert!(found.value >= (1.0 - params.eps) * oracle.value);
    assert!(distance(&found.x, &[-2.0, 0.0]).min(distance(&found.x, &[2.0, 0.0])) < 0.6);
}

#[test]
fn non_planar_input_is_rejected() {
    let p = PointSet::new(&[[0.0, 0.0, 0.0]]).unwrap();
    let params = SolveParams::new(0.3, 0.2, 0.2, 0).unwrap();
    assert!(matches!(
        mode_2d(&p, &params),
        Err(Error::DimensionMismatch {
            expected: 2,
            found: 3
        })
    ));
}
