use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};

use super::taylor::TruncatedTaylorPoly;
use crate::error::{check_open_unit, Error, Result};
use crate::params::derived_rng;
use crate::points::squared_distance;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityConfig {
    /// Uniform random starts in the ball, in addition to `q` and the centers.
    pub random_starts: usize,
    pub max_ascent_iters: usize,
    /// Largest dimension for which the branch-and-bound certificate runs.
    pub certify_max_dim: usize,
    /// Cap on boxes evaluated by branch and bound.
    pub box_budget: usize,
    pub seed: u64,
}

impl Default for FeasibilityConfig {
    fn default() -> Self {
        Self {
            random_starts: 32,
            max_ascent_iters: 100,
            certify_max_dim: 3,
            box_budget: 400_000,
            seed: 0,
        }
    }
}

/// Closed ball `{x : |x - center|^2 <= radius_sq}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius_sq: f64,
}

impl Ball {
    pub fn contains(&self, x: &[f64]) -> bool {
        squared_distance(x, &self.center) <= self.radius_sq
    }

    /// Nearest point of the ball, nudged inward until the membership test
    /// passes in floating point.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        let d2 = squared_distance(x, &self.center);
        if d2 <= self.radius_sq {
            return x.to_vec();
        }
        let mut scale = (self.radius_sq / d2).sqrt();
        loop {
            let y: Vec<f64> = x
                .iter()
                .zip(&self.center)
                .map(|(xi, ci)| ci + (xi - ci) * scale)
                .collect();
            if self.contains(&y) {
                return y;
            }
            scale *= 1.0 - 1e-12;
        }
    }
}

/// Maximizes a truncated polynomial over a ball once and answers
/// superlevel-set queries from the cached result.
///
/// Projected gradient ascent from several starts supplies a witness. In
/// dimension at most `certify_max_dim`, a branch and bound over boxes then
/// bounds the maximum from above to a requested tolerance, so a `None` from
/// [`BallMaximizer::feasible`] is backed by a certificate rather than a
/// failed search.
#[derive(Debug, Clone)]
pub struct BallMaximizer<'a> {
    poly: &'a TruncatedTaylorPoly,
    ball: Ball,
    config: FeasibilityConfig,
    best_x: Vec<f64>,
    best_value: f64,
    upper: f64,
    certified_tol: Option<f64>,
    ascent_tol: f64,
}

impl<'a> BallMaximizer<'a> {
    /// Runs the multistart ascent. Each ascent stops once a step gains less
    /// than `tol / 1000`.
    pub fn new(
        poly: &'a TruncatedTaylorPoly,
        ball: Ball,
        config: FeasibilityConfig,
        stream: u64,
        tol: f64,
    ) -> Result<Self> {
        if ball.center.len() != poly.dim() {
            return Err(Error::DimensionMismatch {
                expected: poly.dim(),
                found: ball.center.len(),
            });
        }
        if !(ball.radius_sq >= 0.0 && ball.radius_sq.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "radius",
                value: ball.radius_sq,
                reason: "must be finite and non-negative",
            });
        }
        let mut m = Self {
            poly,
            best_x: ball.center.clone(),
            best_value: poly.eval(&ball.center),
            ball,
            config,
            upper: f64::INFINITY,
            certified_tol: None,
            ascent_tol: 1e-3 * tol.max(0.0),
        };
        m.multistart(stream);
        Ok(m)
    }

    pub fn best(&self) -> (&[f64], f64) {
        (&self.best_x, self.best_value)
    }

    /// Proven upper bound on the maximum over the ball; infinite until
    /// branch and bound has run.
    pub fn upper_bound(&self) -> f64 {
        self.upper
    }

    pub fn is_certified(&self) -> bool {
        self.certified_tol.is_some()
    }

    /// A point of the ball with polynomial value at least `beta`, if one is
    /// found. When `None` is returned after certification, the maximum over
    /// the ball is below `beta + tol`.
    pub fn feasible(&mut self, beta: f64, tol: f64) -> Option<Vec<f64>> {
        if self.best_value < beta
            && self.poly.dim() <= self.config.certify_max_dim
            && self.certified_tol.map_or(true, |t| t > tol)
        {
            self.branch_and_bound(tol);
        }
        (self.best_value >= beta).then(|| self.best_x.clone())
    }

    fn offer(&mut self, x: Vec<f64>, value: f64) {
        if value > self.best_value && self.ball.contains(&x) {
            self.best_value = value;
            self.best_x = x;
        }
    }

    fn multistart(&mut self, stream: u64) {
        let d = self.poly.dim();
        let mut starts: Vec<Vec<f64>> = vec![self.ball.center.clone()];
        for p in self.poly.centers().iter() {
            let s = self.ball.project(p);
            if !starts.contains(&s) {
                starts.push(s);
            }
        }
        let mut rng = derived_rng(self.config.seed, stream);
        let radius = self.ball.radius_sq.sqrt();
        for _ in 0..self.config.random_starts {
            let dir: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
            let norm = dir
                .iter()
                .map(|v| v * v)
                .sum::<f64>()
                .sqrt()
                .max(f64::MIN_POSITIVE);
            let t = radius * rng.random::<f64>().powf(1.0 / d as f64) / norm;
            let x: Vec<f64> = dir
                .iter()
                .zip(&self.ball.center)
                .map(|(u, c)| c + u * t)
                .collect();
            starts.push(self.ball.project(&x));
        }
        for s in starts {
            let (x, v) = self.ascend(s);
            self.offer(x, v);
        }
    }

    fn ascend(&self, x0: Vec<f64>) -> (Vec<f64>, f64) {
        let mut x = x0;
        let (mut f, mut g) = self.poly.eval_with_gradient(&x);
        let scale = 1.0 + self.ball.radius_sq.sqrt();
        for _ in 0..self.config.max_ascent_iters {
            // Mean-shift-like first guess, then Armijo backtracking.
            let mut eta = if f > 0.0 { 0.5 / f } else { 1.0 };
            let mut next = None;
            for _ in 0..50 {
                let trial: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi + eta * gi).collect();
                let cand = self.ball.project(&trial);
                let lin: f64 = g
                    .iter()
                    .zip(cand.iter().zip(&x))
                    .map(|(gi, (c, xi))| gi * (c - xi))
                    .sum();
                if lin <= 0.0 {
                    break;
                }
                let fc = self.poly.eval(&cand);
                if fc >= f + 1e-4 * lin {
                    next = Some((cand, fc));
                    break;
                }
                eta *= 0.5;
            }
            let Some((cand, fc)) = next else { break };
            let moved = squared_distance(&cand, &x).sqrt();
            let gain = fc - f;
            x = cand;
            (f, g) = self.poly.eval_with_gradient(&x);
            if moved <= 1e-10 * scale || gain <= self.ascent_tol.max(1e-14 * f.abs()) {
                break;
            }
        }
        (x, f)
    }

    fn branch_and_bound(&mut self, tol: f64) {
        let d = self.poly.dim();
        let radius = self.ball.radius_sq.sqrt();
        let root = BoxNode {
            lo: self.ball.center.iter().map(|c| c - radius).collect(),
            hi: self.ball.center.iter().map(|c| c + radius).collect(),
            bound: f64::INFINITY,
        };
        let mut heap = BinaryHeap::new();
        heap.push(root);
        let mut evaluated = 0usize;
        let upper = loop {
            let Some(top) = heap.pop() else {
                break self.best_value + tol;
            };
            if top.bound <= self.best_value + tol {
                break top.bound.max(self.best_value);
            }
            if evaluated >= self.config.box_budget {
                break top.bound;
            }
            for child in top.split(d) {
                if !self.intersects(&child) {
                    continue;
                }
                evaluated += 1;
                let (bound, witness) = self.bound_box(&child);
                self.offer(witness.0, witness.1);
                if bound > self.best_value + tol {
                    heap.push(BoxNode { bound, ..child });
                }
            }
        };
        self.upper = self.upper.min(upper);
        if upper <= self.best_value + tol {
            self.certified_tol = Some(tol);
        }
    }

    fn intersects(&self, b: &BoxNode) -> bool {
        let d2: f64 = self
            .ball
            .center
            .iter()
            .zip(b.lo.iter().zip(&b.hi))
            .map(|(c, (lo, hi))| {
                let t = c.clamp(*lo, *hi) - c;
                t * t
            })
            .sum();
        d2 <= self.ball.radius_sq
    }

    /// Upper bound on the polynomial over the box, and the value at a point
    /// of the ball near the box center.
    fn bound_box(&self, b: &BoxNode) -> (f64, (Vec<f64>, f64)) {
        let s = self.poly.order();
        let center: Vec<f64> = b.lo.iter().zip(&b.hi).map(|(l, h)| 0.5 * (l + h)).collect();
        let inside = self.ball.contains(&center);
        let e = if inside {
            center.clone()
        } else {
            self.ball.project(&center)
        };
        let fe = self.poly.eval(&e);
        let half_diag =
            b.lo.iter()
                .zip(&b.hi)
                .map(|(l, h)| 0.25 * (h - l) * (h - l))
                .sum::<f64>()
                .sqrt();

        let mut interval = 0.0;
        let mut lipschitz = 0.0;
        let mut mag = vec![0.0; center.len()];
        let mut dmag = vec![0.0; center.len()];
        for p in self.poly.centers().iter() {
            for i in 0..p.len() {
                let (l, h) = (b.lo[i] - p[i], b.hi[i] - p[i]);
                let amin = if l <= 0.0 && h >= 0.0 {
                    0.0
                } else {
                    (l * l).min(h * h)
                };
                let amax = (l * l).max(h * h);
                mag[i] = (-amin).exp() + self.poly.remainder_bound(amax, s);
                dmag[i] = peak_of_sqrt_exp(amin, amax)
                    + 2.0 * amax.sqrt() * self.poly.remainder_bound(amax, s - 1);
            }
            interval += mag.iter().product::<f64>();
            if inside {
                let mut g2 = 0.0;
                for i in 0..mag.len() {
                    let mut gi = dmag[i];
                    for (k, m) in mag.iter().enumerate() {
                        if k != i {
                            gi *= m;
                        }
                    }
                    g2 += gi * gi;
                }
                lipschitz += g2.sqrt();
            }
        }
        let bound = if inside {
            interval.min(fe + lipschitz * half_diag)
        } else {
            interval
        };
        (bound, (e, fe))
    }
}

/// `max_{a in [lo, hi]} 2 sqrt(a) exp(-a)`; the unconstrained peak is at 1/2.
fn peak_of_sqrt_exp(lo: f64, hi: f64) -> f64 {
    let h = |a: f64| 2.0 * a.sqrt() * (-a).exp();
    if lo <= 0.5 && hi >= 0.5 {
        h(0.5)
    } else {
        h(lo).max(h(hi))
    }
}

#[derive(Debug, Clone)]
struct BoxNode {
    lo: Vec<f64>,
    hi: Vec<f64>,
    bound: f64,
}

impl BoxNode {
    fn split(&self, d: usize) -> Vec<BoxNode> {
        let mid: Vec<f64> = self
            .lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| 0.5 * (l + h))
            .collect();
        (0..1usize << d)
            .map(|mask| {
                let mut lo = self.lo.clone();
                let mut hi = self.hi.clone();
                for k in 0..d {
                    if mask >> k & 1 == 0 {
                        hi[k] = mid[k];
                    } else {
                        lo[k] = mid[k];
                    }
                }
                BoxNode {
                    lo,
                    hi,
                    bound: self.bound,
                }
            })
            .collect()
    }
}

impl PartialEq for BoxNode {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for BoxNode {}

impl PartialOrd for BoxNode {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BoxNode {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound.total_cmp(&other.bound)
    }
}

/// A point `x` with `poly(x) >= beta` and `|x - q|^2 <= r^2 ln(1/(eps rho))`,
/// or `None`.
///
/// In dimension at most three, `None` means the maximum of `poly` over the
/// ball is certified to be below `beta + tol`, with `tol` one twentieth of
/// `|Q| eps rho`. Every returned point satisfies both constraints as
/// evaluated in floating point.
pub fn syspoly_feasible(
    poly: &TruncatedTaylorPoly,
    q: &[f64],
    r: f64,
    eps: f64,
    rho: f64,
    beta: f64,
) -> Result<Option<Vec<f64>>> {
    let tol = 0.05 * poly.centers().len() as f64 * eps * rho;
    syspoly_feasible_with(
        poly,
        q,
        r,
        eps,
        rho,
        beta,
        tol,
        &FeasibilityConfig::default(),
    )
}

#[allow(clippy::too_many_arguments)]
pub fn syspoly_feasible_with(
    poly: &TruncatedTaylorPoly,
    q: &[f64],
    r: f64,
    eps: f64,
    rho: f64,
    beta: f64,
    tol: f64,
    config: &FeasibilityConfig,
) -> Result<Option<Vec<f64>>> {
    check_open_unit("eps*rho", eps * rho)?;
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "beta",
            value: beta,
            reason: "must be finite and non-negative",
        });
    }
    if !(r > 0.0) {
        return Err(Error::InvalidParameter {
            name: "r",
            value: r,
            reason: "must be positive",
        });
    }
    let ball = Ball {
        center: q.to_vec(),
        radius_sq: r * r * (1.0 / (eps * rho)).ln(),
    };
    let mut m = BallMaximizer::new(poly, ball, *config, 0, tol)?;
    Ok(m.feasible(beta, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::points::PointSet;
    use crate::polysolve::taylor::build_truncated_poly;

    fn poly(rows: &[[f64; 2]], s: usize) -> TruncatedTaylorPoly {
        build_truncated_poly(&PointSet::new(rows).unwrap(), s).unwrap()
    }

    #[test]
    fn zero_level_returns_center() {
        let p = poly(&[[0.2, 0.1], [-0.3, 0.4]], 200);
        let x = syspoly_feasible(&p, &[0.0, 0.0], 2.0, 0.3, 0.3, 0.0)
            .unwrap()
            .unwrap();
        assert!(p.eval(&x) >= 0.0);
        assert!(squared_distance(&x, &[0.0, 0.0]) <= 4.0 * (1.0f64 / 0.09).ln());
    }

    #[test]
    fn single_center_reaches_one() {
        let p = poly(&[[0.5, -0.5]], 200);
        let x = syspoly_feasible(&p, &[0.5, -0.5], 5.0, 0.3, 0.3, 0.99)
            .unwrap()
            .unwrap();
        assert!(p.eval(&x) >= 0.99);
    }

    #[test]
    fn above_count_is_infeasible_with_certificate() {
        let rows = [[0.0, 0.0], [0.4, 0.1], [1.5, -0.2]];
        let p = poly(&rows, 300);
        assert!(syspoly_feasible(&p, &[0.0, 0.0], 2.0, 0.3, 0.3, 4.0)
            .unwrap()
            .is_none());

        let ball = Ball {
            center: vec![0.0, 0.0],
            radius_sq: 4.0 * (1.0f64 / 0.09).ln(),
        };
        let mut m =
            BallMaximizer::new(&p, ball.clone(), FeasibilityConfig::default(), 0, 0.01).unwrap();
        assert!(m.feasible(4.0, 0.01).is_none());
        assert!(m.is_certified());
        // The certified bound brackets a dense-grid estimate of the maximum.
        let mut grid_max = f64::NEG_INFINITY;
        let r = ball.radius_sq.sqrt();
        for i in 0..=400 {
            for j in 0..=400 {
                let x = [
                    -r + 2.0 * r * i as f64 / 400.0,
                    -r + 2.0 * r * j as f64 / 400.0,
                ];
                if ball.contains(&x) {
                    grid_max = grid_max.max(p.eval(&x));
                }
            }
        }
        let (_, best) = m.best();
        assert!(best >= grid_max - 1e-9);
        assert!(m.upper_bound() >= grid_max);
        assert!(m.upper_bound() <= best + 0.01);
    }

    #[test]
    fn witnesses_are_monotone_in_beta() {
        let p = poly(&[[0.0, 0.0], [0.8, 0.0], [0.0, 0.9]], 250);
        let q = [0.2, 0.2];
        let hit = syspoly_feasible(&p, &q, 2.0, 0.2, 0.4, 1.5)
            .unwrap()
            .unwrap();
        let v = p.eval(&hit);
        for beta in [0.0, 0.5, 1.0, 1.49] {
            let x = syspoly_feasible(&p, &q, 2.0, 0.2, 0.4, beta)
                .unwrap()
                .unwrap();
            assert!(p.eval(&x) >= beta);
            assert!(v >= beta);
        }
    }

    #[test]
    fn projection_lands_inside() {
        let ball = Ball {
            center: vec![0.1, 0.2, 0.3],
            radius_sq: 2.0,
        };
        for x in [[10.0, -3.0, 7.0], [1e-3, 5.0, 0.0], [0.1, 0.2, 1.7]] {
            assert!(ball.contains(&ball.project(&x)));
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let p = poly(&[[0.0, 0.0]], 10);
        assert!(syspoly_feasible(&p, &[0.0, 0.0], 2.0, 0.3, 0.3, -1.0).is_err());
        assert!(syspoly_feasible(&p, &[0.0], 2.0, 0.3, 0.3, 0.5).is_err());
        assert!(syspoly_feasible(&p, &[0.0, 0.0], 0.0, 0.3, 0.3, 0.5).is_err());
    }
}
