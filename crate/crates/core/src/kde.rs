//! Gaussian kernel and kernel density evaluation.
//!
//! The kernel has unit bandwidth, `K(x, y) = exp(-|x - y|^2)`. The normalized
//! density of a point set `P` is `kde(P, x) = (1/n) * sum_p K(p, x)`; the
//! unnormalized sum `n * kde(P, x)` is what most of the solvers reason about.

use crate::error::{check_open_unit, Error, Result};
use crate::points::{squared_distance, PointSet};

/// How [`kde_with`] accumulates the per-point kernel values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Summation {
    /// Plain left-to-right sum in point order.
    #[default]
    Naive,
    /// Neumaier-compensated sum, for oracle comparisons.
    Compensated,
}

pub fn kernel(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    Ok((-squared_distance(x, y)).exp())
}

/// `(1/n) * sum_p exp(-|p - x|^2)`.
pub fn kde(points: &PointSet, x: &[f64]) -> Result<f64> {
    kde_with(points, x, Summation::Naive)
}

pub fn kde_unnormalized(points: &PointSet, x: &[f64]) -> Result<f64> {
    kde_unnormalized_with(points, x, Summation::Naive)
}

pub fn kde_with(points: &PointSet, x: &[f64], summation: Summation) -> Result<f64> {
    Ok(kde_unnormalized_with(points, x, summation)? / points.len() as f64)
}

pub fn kde_unnormalized_with(points: &PointSet, x: &[f64], summation: Summation) -> Result<f64> {
    points.check_dim(x)?;
    let terms = points.iter().map(|p| (-squared_distance(p, x)).exp());
    Ok(match summation {
        Summation::Naive => terms.sum(),
        Summation::Compensated => neumaier_sum(terms),
    })
}

pub(crate) fn neumaier_sum(terms: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

/// Radius `sqrt(ln(1/rho))` around the data that must contain the mode
/// whenever the density maximum is at least `rho`: any `x` farther than this
/// from every point has `kde(P, x) < rho`.
pub fn search_radius(rho: f64) -> Result<f64> {
    check_open_unit("rho", rho)?;
    Ok((-rho.ln()).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::E;

    #[test]
    fn kernel_closed_forms() {
        assert_eq!(kernel(&[0.0, 0.0], &[0.0, 0.0]).unwrap(), 1.0);
        assert_relative_eq!(kernel(&[0.0], &[1.0]).unwrap(), 0.36787944117144233);
        assert_relative_eq!(
            kernel(&[3.0, 4.0], &[0.0, 0.0]).unwrap(),
            (-25.0f64).exp(),
            max_relative = 1e-15
        );
        assert!(matches!(
            kernel(&[0.0], &[0.0, 1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn kde_examples() {
        let p = PointSet::new(&[[0.0, 0.0], [2.0, 0.0]]).unwrap();
        assert_relative_eq!(kde(&p, &[1.0, 0.0]).unwrap(), 1.0 / E, max_relative = 1e-15);
        assert_relative_eq!(
            kde_unnormalized(&p, &[1.0, 0.0]).unwrap(),
            2.0 / E,
            max_relative = 1e-15
        );
        let single = PointSet::new(&[[0.0]]).unwrap();
        assert_eq!(kde(&single, &[0.0]).unwrap(), 1.0);
        assert_eq!(kde_unnormalized(&single, &[0.0]).unwrap(), 1.0);
        let line = PointSet::new(&[[0.0], [1.0], [2.0]]).unwrap();
        // (2/e + 1)/3, evaluated with mpmath
        assert_relative_eq!(
            kde(&line, &[1.0]).unwrap(),
            0.578_586_294_114_294_9,
            max_relative = 1e-15
        );
        let five = PointSet::new(&[[0.0, 0.0]; 5]).unwrap();
        assert_eq!(kde_unnormalized(&five, &[0.0, 0.0]).unwrap(), 5.0);
        assert!(kde(&p, &[1.0]).is_err());
    }

    #[test]
    fn compensated_matches_naive_on_small_sets() {
        let p = PointSet::new(&[[0.1], [0.7], [-1.3], [2.2]]).unwrap();
        let a = kde_with(&p, &[0.4], Summation::Naive).unwrap();
        let b = kde_with(&p, &[0.4], Summation::Compensated).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-15);
    }

    #[test]
    fn search_radius_values() {
        assert_relative_eq!(search_radius(1.0 / E).unwrap(), 1.0, max_relative = 1e-15);
        assert_relative_eq!(
            search_radius((-4.0f64).exp()).unwrap(),
            2.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            search_radius(0.5).unwrap(),
            0.832_554_611_157_697_8,
            max_relative = 1e-15
        );
        for bad in [0.0, 1.0, -0.5, 2.0, f64::NAN] {
            assert!(search_radius(bad).is_err());
        }
    }

    fn point_set(d: usize) -> impl Strategy<Value = PointSet> {
        prop::collection::vec(prop::collection::vec(-3.0..3.0f64, d), 1..40)
            .prop_map(|rows| PointSet::new(&rows).unwrap())
    }

    proptest! {
        #[test]
        fn kernel_is_symmetric_and_bounded(
            x in prop::collection::vec(-5.0..5.0f64, 3),
            y in prop::collection::vec(-5.0..5.0f64, 3),
        ) {
            let k = kernel(&x, &y).unwrap();
            prop_assert_eq!(k, kernel(&y, &x).unwrap());
            prop_assert!(k > 0.0 && k <= 1.0);
            prop_assert_eq!(kernel(&x, &x).unwrap(), 1.0);
        }

        #[test]
        fn kde_bounds_and_scaling(p in point_set(2), x in prop::collection::vec(-3.0..3.0f64, 2)) {
            let v = kde(&p, &x).unwrap();
            prop_assert!(v > 0.0 && v <= 1.0);
            let g = kde_unnormalized(&p, &x).unwrap();
            prop_assert!((g - p.len() as f64 * v).abs() <= 1e-12 * g);
        }

        #[test]
        fn kde_is_translation_equivariant(
            p in point_set(3),
            x in prop::collection::vec(-3.0..3.0f64, 3),
            t in prop::collection::vec(-10.0..10.0f64, 3),
        ) {
            let shifted = p.translated(&t).unwrap();
            let xt: Vec<f64> = x.iter().zip(&t).map(|(a, b)| a + b).collect();
            let a = kde(&p, &x).unwrap();
            let b = kde(&shifted, &xt).unwrap();
            prop_assert!((a - b).abs() <= 1e-12);
        }

        #[test]
        fn far_points_fall_below_rho(
            p in point_set(2),
            rho in 0.01..0.99f64,
            dir in prop::collection::vec(-1.0..1.0f64, 2),
            extra in 0.001..2.0f64,
        ) {
            // Push x away from the nearest data point until every point is
            // farther than the search radius.
            let r = search_radius(rho).unwrap();
            let norm = (dir[0] * dir[0] + dir[1] * dir[1]).sqrt().max(1e-9);
            let (lo, hi) = p.bounding_box();
            let diam = ((hi[0] - lo[0]).powi(2) + (hi[1] - lo[1]).powi(2)).sqrt();
            let step = diam + r + extra;
            let x = [lo[0] + dir[0] / norm * step, lo[1] + dir[1] / norm * step];
            let nearest = p.iter().map(|q| squared_distance(q, &x)).fold(f64::INFINITY, f64::min).sqrt();
            prop_assume!(nearest > r);
            prop_assert!(kde(&p, &x).unwrap() < rho);
        }
    }
}
