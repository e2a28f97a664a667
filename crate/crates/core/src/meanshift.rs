//! Mean-shift iteration for the Gaussian KDE.
//!
//! One step replaces `y` with the kernel-weighted average of the data,
//! `y' = sum_p p w_p / sum_p w_p` with `w_p = exp(-|y - p|^2)`. Every step
//! satisfies `G(y') >= G(y)`; the improvement is at least `G(y) |y' - y|^2`.
//!
//! [`cross_space_shift`] is the same update with the weights taken from a
//! projected copy of the data while the average is formed in the original
//! space. It is how a mode found after random projection is lifted back.

use crate::error::{Error, Result};
use crate::points::{distance, squared_distance, PointSet};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_ITERS: usize = 200;

pub fn mean_shift_step(points: &PointSet, y: &[f64]) -> Result<Vec<f64>> {
    points.check_dim(y)?;
    let sq: Vec<f64> = points.iter().map(|p| squared_distance(p, y)).collect();
    Ok(weighted_average(points, &sq))
}

/// Iterates [`mean_shift_step`] until a step moves by at most `tol` or
/// `max_iters` steps have been taken.
pub fn mean_shift(points: &PointSet, x0: &[f64], max_iters: usize, tol: f64) -> Result<Vec<f64>> {
    Ok(mean_shift_trace(points, x0, max_iters, tol)?
        .pop()
        .expect("trace holds the start point"))
}

/// Like [`mean_shift`] but returns every iterate, starting with `x0`.
pub fn mean_shift_trace(
    points: &PointSet,
    x0: &[f64],
    max_iters: usize,
    tol: f64,
) -> Result<Vec<Vec<f64>>> {
    points.check_dim(x0)?;
    if !(tol >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "tol",
            value: tol,
            reason: "must be non-negative",
        });
    }
    let mut trace = vec![x0.to_vec()];
    for _ in 0..max_iters {
        let cur = trace.last().expect("non-empty");
        let next = mean_shift_step(points, cur)?;
        let moved = distance(&next, cur);
        trace.push(next);
        if moved <= tol {
            break;
        }
    }
    Ok(trace)
}

/// `sum_p p w_p / sum_p w_p` with `w_p = exp(-|x2 - Pi p|^2)`, the weights
/// computed against `projected` and the average taken over `points`.
pub fn cross_space_shift(points: &PointSet, projected: &PointSet, x2: &[f64]) -> Result<Vec<f64>> {
    if points.len() != projected.len() {
        return Err(Error::SizeMismatch {
            left: points.len(),
            right: projected.len(),
        });
    }
    projected.check_dim(x2)?;
    let sq: Vec<f64> = projected.iter().map(|p| squared_distance(p, x2)).collect();
    Ok(weighted_average(points, &sq))
}

// Weights are exp(-(sq - min sq)); the common factor exp(-min sq) cancels in
// the ratio, and the nearest point always gets weight 1 so nothing underflows
// to an all-zero denominator.
fn weighted_average(points: &PointSet, sq: &[f64]) -> Vec<f64> {
    let min = sq.iter().copied().fold(f64::INFINITY, f64::min);
    let mut acc = vec![0.0; points.dim()];
    let mut total = 0.0;
    for (p, &s) in points.iter().zip(sq) {
        let w = (min - s).exp();
        total += w;
        for (a, c) in acc.iter_mut().zip(p) {
            *a += w * c;
        }
    }
    for a in &mut acc {
        *a /= total;
    }
    acc
}
