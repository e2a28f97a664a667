//! Brute-force references used to check the solvers.

use std::time::Instant;

use rand::Rng as _;

use crate::error::{check_positive, Error, Result};
use crate::kde::kde_unnormalized;
use crate::meanshift::{mean_shift, DEFAULT_MAX_ITERS, DEFAULT_TOL};
use crate::params::{derived_rng, ModeResult, SolveParams};
use crate::points::{squared_distance, PointSet};
use crate::polysolve::{Ball, TruncatedTaylorPoly};
use crate::rect2d::{Rect, RectFamily};

pub const DEFAULT_GRID_BUDGET: u128 = 20_000_000;

/// Grid spacing `eps rho sqrt(e/2) / (2 sqrt(d))`.
pub fn grid_spacing(eps: f64, rho: f64, d: usize) -> f64 {
    eps * rho * (std::f64::consts::E / 2.0).sqrt() / (2.0 * (d as f64).sqrt())
}

/// Exhaustive search over a lattice covering the data's bounding box grown
/// by the search radius, followed by a mean-shift polish.
///
/// The normalized density has gradient norm at most `sqrt(2/e)`, so the best
/// lattice point is within `eps rho` of the maximum.
pub fn grid_mode(points: &PointSet, params: &SolveParams) -> Result<ModeResult> {
    grid_mode_with(points, params, DEFAULT_GRID_BUDGET)
}

pub fn grid_mode_with(points: &PointSet, params: &SolveParams, budget: u128) -> Result<ModeResult> {
    let start = Instant::now();
    let d = points.dim();
    let h = grid_spacing(params.eps, params.rho, d);
    let reach = (-params.rho.ln()).max(0.0).sqrt();
    let (lo, hi) = points.bounding_box();
    let counts: Vec<u128> = lo
        .iter()
        .zip(&hi)
        .map(|(l, u)| ((u - l + 2.0 * reach) / h).ceil() as u128 + 1)
        .collect();
    let total = counts
        .iter()
        .try_fold(1u128, |acc, c| acc.checked_mul(*c))
        .unwrap_or(u128::MAX);
    if total > budget {
        return Err(Error::BudgetExceeded {
            what: "grid points",
            needed: total,
            budget,
        });
    }
    let origin: Vec<f64> = lo.iter().map(|l| l - reach).collect();
    let mut idx = vec![0u128; d];
    let mut x = origin.clone();
    let mut best = (origin.clone(), f64::NEG_INFINITY);
    loop {
        for k in 0..d {
            x[k] = origin[k] + idx[k] as f64 * h;
        }
        let v = kde_unnormalized(points, &x)?;
        if v > best.1 {
            best = (x.clone(), v);
        }
        let mut k = 0;
        while k < d {
            idx[k] += 1;
            if idx[k] < counts[k] {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == d {
            break;
        }
    }
    let polished = mean_shift(points, &best.0, DEFAULT_MAX_ITERS, DEFAULT_TOL)?;
    let x = if kde_unnormalized(points, &polished)? >= best.1 {
        polished
    } else {
        best.0
    };
    ModeResult::evaluate(points, x, "oracle-grid", *params, start.elapsed())
}

/// Mean shift from every data point and from `random_starts` uniform points
/// of the bounding box; the best end point wins.
pub fn multistart_meanshift_mode(
    points: &PointSet,
    random_starts: usize,
    max_iters: usize,
    params: &SolveParams,
) -> Result<ModeResult> {
    let start = Instant::now();
    let (lo, hi) = points.bounding_box();
    let mut rng = derived_rng(params.seed, 0x6d73);
    let mut starts: Vec<Vec<f64>> = points.iter().map(<[f64]>::to_vec).collect();
    for _ in 0..random_starts {
        starts.push(
            lo.iter()
                .zip(&hi)
                .map(|(l, h)| if h > l { rng.random_range(*l..=*h) } else { *l })
                .collect(),
        );
    }
    let mut best = (starts[0].clone(), f64::NEG_INFINITY);
    for s in &starts {
        let x = mean_shift(points, s, max_iters, DEFAULT_TOL)?;
        let v = kde_unnormalized(points, &x)?;
        if v > best.1 {
            best = (x, v);
        }
    }
    ModeResult::evaluate(points, best.0, "oracle-ms", *params, start.elapsed())
}

#[derive(Debug, Clone, PartialEq)]
pub struct BallMax {
    pub x: Vec<f64>,
    pub value: f64,
    /// The maximum over the ball is at most `value + error_bound`.
    pub error_bound: f64,
    pub grid_points: u128,
}

/// Maximum of `poly` over the ball of the given radius around `q` by a
/// dense grid.
///
/// The spacing comes from a Lipschitz bound built from the absolute
/// coefficient sums of each factor over the reachable coordinate range, so
/// it is only affordable for small radii and few centers.
pub fn dense_ball_max(
    poly: &TruncatedTaylorPoly,
    q: &[f64],
    radius: f64,
    tol: f64,
    budget: u128,
) -> Result<BallMax> {
    poly.centers().check_dim(q)?;
    check_positive("tol", tol)?;
    if !(radius >= 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "radius",
            value: radius,
            reason: "must be finite and non-negative",
        });
    }
    let d = q.len();
    let coeffs = poly.coefficients();
    let mut lipschitz = 0.0;
    for p in poly.centers().iter() {
        let mut value_bound = vec![0.0; d];
        let mut slope_bound = vec![0.0; d];
        for i in 0..d {
            let u = (q[i] - p[i]).abs() + radius;
            for (j, c) in coeffs.iter().enumerate() {
                value_bound[i] += c.abs() * u.powi(2 * j as i32);
                if j > 0 {
                    slope_bound[i] += c.abs() * 2.0 * j as f64 * u.powi(2 * j as i32 - 1);
                }
            }
        }
        let mut g2 = 0.0;
        for i in 0..d {
            let mut g = slope_bound[i];
            for (k, v) in value_bound.iter().enumerate() {
                if k != i {
                    g *= v;
                }
            }
            g2 += g * g;
        }
        lipschitz += g2.sqrt();
    }
    // Every ball point is within h sqrt(d) / 2 of some lattice point of the
    // cube, and projecting that lattice point onto the ball only brings it closer.
    let h = if lipschitz > 0.0 {
        (2.0 * tol / (lipschitz * (d as f64).sqrt())).min(2.0 * radius.max(f64::MIN_POSITIVE))
    } else {
        2.0 * radius.max(f64::MIN_POSITIVE)
    };
    let per_axis = ((2.0 * radius / h).ceil() as u128).saturating_add(1);
    let total = (0..d)
        .try_fold(1u128, |acc, _| acc.checked_mul(per_axis))
        .unwrap_or(u128::MAX);
    if !h.is_finite() || h <= 0.0 || total > budget {
        return Err(Error::BudgetExceeded {
            what: "ball grid points",
            needed: total,
            budget,
        });
    }
    let ball = Ball {
        center: q.to_vec(),
        radius_sq: radius * radius,
    };
    let mut best = (q.to_vec(), poly.eval(q));
    let mut idx = vec![0u128; d];
    let mut x = vec![0.0; d];
    loop {
        for k in 0..d {
            x[k] = (q[k] - radius + idx[k] as f64 * h).min(q[k] + radius);
        }
        let y = ball.project(&x);
        let v = poly.eval(&y);
        if v > best.1 {
            best = (y, v);
        }
        let mut k = 0;
        while k < d {
            idx[k] += 1;
            if idx[k] < per_axis {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == d {
            break;
        }
    }
    Ok(BallMax {
        x: best.0,
        value: best.1,
        error_bound: lipschitz * h * (d as f64).sqrt() / 2.0,
        grid_points: total,
    })
}

/// Coordinates of `points` in an orthonormal basis of their affine hull,
/// relative to the first point. Pairwise distances are preserved, and so is
/// the maximum of the density, which is attained in the hull.
pub fn span_embedding(points: &PointSet) -> Result<PointSet> {
    let p0 = points.point(0).to_vec();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let scale = points
        .iter()
        .map(|p| squared_distance(p, &p0))
        .fold(0.0, f64::max)
        .sqrt()
        .max(f64::MIN_POSITIVE);
    for p in points.iter().skip(1) {
        let mut v: Vec<f64> = p.iter().zip(&p0).map(|(a, b)| a - b).collect();
        // Two passes of Gram-Schmidt keep the basis orthogonal to rounding.
        for _ in 0..2 {
            for b in &basis {
                let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= dot * y;
                }
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-10 * scale {
            basis.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    if basis.is_empty() {
        return PointSet::from_flat(vec![0.0; points.len()], 1);
    }
    let k = basis.len();
    let mut flat = Vec::with_capacity(points.len() * k);
    for p in points.iter() {
        for b in &basis {
            flat.push(
                p.iter()
                    .zip(&p0)
                    .zip(b)
                    .map(|((x, o), y)| (x - o) * y)
                    .sum(),
            );
        }
    }
    PointSet::from_flat(flat, k)
}

/// Maximum depth of a rectangle family by testing every pair
/// (left edge x, bottom edge y) of rectangles alive at that x.
pub fn max_depth_brute_force(family: &RectFamily) -> Result<usize> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let mut best = 0;
    for r in &family.rects {
        let x = r.lo[0];
        let alive: Vec<&Rect> = family
            .rects
            .iter()
            .filter(|s| s.lo[0] <= x && x <= s.hi[0])
            .collect();
        for s in &alive {
            let y = s.lo[1];
            let depth = alive
                .iter()
                .filter(|t| t.lo[1] <= y && y <= t.hi[1])
                .count();
            best = best.max(depth);
        }
    }
    Ok(best)
}

/// `n^c <= (log2 n)^(c log2^3 n)`, compared through logarithms.
pub fn log_power_bound_holds(n: f64, c: f64) -> bool {
    let l = n.log2();
    c * n.ln() <= c * l.powi(3) * l.ln()
}
