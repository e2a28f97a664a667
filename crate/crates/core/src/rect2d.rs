//! Planar mode finding by rectangle depth.
//!
//! With `m = ceil(6 / (eps rho))` width levels `r_j = sqrt(ln(1 / (1 - j/m)))`,
//! each point `p` spawns the `m^2` rectangles
//! `[p1 - r_a1, p1 + r_a1] x [p2 - r_a2, p2 + r_a2]`. The fraction of all
//! `n m^2` rectangles that contain `x` is within `eps rho / 3` below
//! `kde(P, x)`, so a point of maximum depth in a random sample of the family
//! is an approximate mode. The maximum depth of a family is found by a plane
//! sweep over x with a segment tree over the y endpoints.

use std::time::Instant;

use rand::Rng as _;

use crate::error::{check_open_unit, check_positive, Error, Result};
use crate::params::{ceil_size, rng_from_seed, ModeResult, Rng, SolveParams};
use crate::points::PointSet;

pub const DEFAULT_SAMPLE_CONSTANT: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct WidthLevels {
    pub m: usize,
    /// `r_0, ..., r_m`; the last entry is infinite.
    pub radii: Vec<f64>,
}

pub fn width_levels(eps: f64, rho: f64) -> Result<WidthLevels> {
    let er = eps * rho;
    check_open_unit("eps*rho", er)?;
    let m = ceil_size(6.0 / er).max(1);
    let mut radii: Vec<f64> = (0..m)
        .map(|j| (-(-(j as f64) / m as f64).ln_1p()).sqrt())
        .collect();
    radii.push(f64::INFINITY);
    Ok(WidthLevels { m, radii })
}

impl WidthLevels {
    /// Smallest `a` in `[0, m]` with `|x - c| <= r_a` (closed, as evaluated
    /// by [`Rect::contains`]). Starts from the analytic inverse
    /// `ceil(m (1 - exp(-(x - c)^2)))` and corrects for rounding.
    pub fn level_of(&self, c: f64, x: f64) -> usize {
        let m = self.m;
        let t = (x - c) * (x - c);
        let guess = (m as f64 * -(-t).exp_m1()).ceil();
        let mut a = if guess.is_nan() {
            m
        } else {
            (guess.max(0.0) as usize).min(m)
        };
        while a > 0 && within(c, self.radii[a - 1], x) {
            a -= 1;
        }
        while a < m && !within(c, self.radii[a], x) {
            a += 1;
        }
        a
    }

    /// The same index by scanning the levels in order.
    pub fn level_scan(&self, c: f64, x: f64) -> usize {
        (0..self.m)
            .find(|&a| within(c, self.radii[a], x))
            .unwrap_or(self.m)
    }
}

fn within(c: f64, r: f64, x: f64) -> bool {
    c - r <= x && x <= c + r
}

/// Closed axis-parallel rectangle `[lo[0], hi[0]] x [lo[1], hi[1]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub lo: [f64; 2],
    pub hi: [f64; 2],
}

impl Rect {
    pub fn new(lo: [f64; 2], hi: [f64; 2]) -> Result<Self> {
        for k in 0..2 {
            if !(lo[k] <= hi[k]) || !lo[k].is_finite() || !hi[k].is_finite() {
                return Err(Error::InvalidParameter {
                    name: "rect",
                    value: lo[k],
                    reason: "needs finite lo <= hi on both axes",
                });
            }
        }
        Ok(Self { lo, hi })
    }

    pub fn contains(&self, x: [f64; 2]) -> bool {
        self.lo[0] <= x[0] && x[0] <= self.hi[0] && self.lo[1] <= x[1] && x[1] <= self.hi[1]
    }

    fn centered(c: &[f64], r1: f64, r2: f64) -> Self {
        Self {
            lo: [c[0] - r1, c[1] - r2],
            hi: [c[0] + r1, c[1] + r2],
        }
    }
}

/// How a sampled family was drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleInfo {
    pub seed: u64,
    pub target_size: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RectFamily {
    pub rects: Vec<Rect>,
    pub sample: Option<SampleInfo>,
}

impl RectFamily {
    pub fn new(rects: Vec<Rect>) -> Self {
        Self {
            rects,
            sample: None,
        }
    }

    pub fn len(&self) -> usize {
        self.rects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }
}

/// The full family of `n m^2` rectangles, addressed by
/// `(point index, a1, a2)` and never materialized.
#[derive(Debug, Clone, PartialEq)]
pub struct ImplicitRectFamily {
    pub points: PointSet,
    pub levels: WidthLevels,
}

pub fn rect_family(points: &PointSet, levels: &WidthLevels) -> Result<ImplicitRectFamily> {
    check_planar(points)?;
    Ok(ImplicitRectFamily {
        points: points.clone(),
        levels: levels.clone(),
    })
}

impl ImplicitRectFamily {
    pub fn total_size(&self) -> u128 {
        self.points.len() as u128 * (self.levels.m as u128).pow(2)
    }

    pub fn rect(&self, index: usize, a1: usize, a2: usize) -> Rect {
        let r = &self.levels.radii;
        Rect::centered(self.points.point(index), r[a1], r[a2])
    }

    /// Number of rectangles containing `x`: each point contributes
    /// `(m - a1)(m - a2)`.
    pub fn depth_at(&self, x: [f64; 2]) -> u128 {
        self.depth_by(x, WidthLevels::level_of)
    }

    /// [`ImplicitRectFamily::depth_at`] with the level indices found by a
    /// linear scan.
    pub fn depth_at_scan(&self, x: [f64; 2]) -> u128 {
        self.depth_by(x, WidthLevels::level_scan)
    }

    fn depth_by(&self, x: [f64; 2], level: impl Fn(&WidthLevels, f64, f64) -> usize) -> u128 {
        let m = self.levels.m;
        self.points
            .iter()
            .map(|p| {
                let a1 = level(&self.levels, p[0], x[0]);
                let a2 = level(&self.levels, p[1], x[1]);
                ((m - a1) * (m - a2)) as u128
            })
            .sum()
    }

    /// Every rectangle, for small families.
    pub fn materialize(&self) -> RectFamily {
        let m = self.levels.m;
        let mut rects = Vec::with_capacity(self.points.len() * m * m);
        for i in 0..self.points.len() {
            for a1 in 0..m {
                for a2 in 0..m {
                    rects.push(self.rect(i, a1, a2));
                }
            }
        }
        RectFamily::new(rects)
    }
}

/// Number of rectangles of `family` containing `x`, by direct count.
pub fn depth_at(family: &RectFamily, x: [f64; 2]) -> usize {
    family.rects.iter().filter(|r| r.contains(x)).count()
}

/// A point of maximum depth and that depth.
///
/// The sweep visits the distinct x endpoints left to right, inserting the
/// rectangles that open at the current x before querying and removing the
/// ones that close there after. Among maximizers, the first x endpoint and
/// then the lowest y endpoint win; the reported point is the center of the
/// intersection of the rectangles that contain it.
pub fn max_depth_point(family: &RectFamily) -> Result<([f64; 2], usize)> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let mut ys: Vec<f64> = family
        .rects
        .iter()
        .flat_map(|r| [r.lo[1], r.hi[1]])
        .collect();
    // Endpoints are finite, so partial_cmp is total here and treats -0 and 0 alike.
    let cmp = |a: &f64, b: &f64| a.partial_cmp(b).expect("finite endpoint");
    ys.sort_by(cmp);
    ys.dedup();
    let y_index = |y: f64| ys.binary_search_by(|v| cmp(v, &y)).expect("y endpoint");

    let mut opens: Vec<usize> = (0..family.len()).collect();
    opens.sort_by(|&a, &b| cmp(&family.rects[a].lo[0], &family.rects[b].lo[0]));
    let mut closes = opens.clone();
    closes.sort_by(|&a, &b| cmp(&family.rects[a].hi[0], &family.rects[b].hi[0]));

    let mut tree = MaxAddTree::new(ys.len());
    let (mut oi, mut ci) = (0, 0);
    let mut best: Option<(f64, usize, i64)> = None;
    while oi < opens.len() {
        let x = family.rects[opens[oi]].lo[0].min(family.rects[closes[ci]].hi[0]);
        while oi < opens.len() && family.rects[opens[oi]].lo[0] == x {
            let r = &family.rects[opens[oi]];
            tree.add(y_index(r.lo[1]), y_index(r.hi[1]), 1);
            oi += 1;
        }
        let (depth, leaf) = tree.max();
        if best.map_or(true, |(_, _, d)| depth > d) {
            best = Some((x, leaf, depth));
        }
        while ci < closes.len() && family.rects[closes[ci]].hi[0] == x {
            let r = &family.rects[closes[ci]];
            tree.add(y_index(r.lo[1]), y_index(r.hi[1]), -1);
            ci += 1;
        }
    }
    let (x, leaf, depth) = best.expect("at least one query");
    let probe = [x, ys[leaf]];
    let mut lo = [f64::NEG_INFINITY; 2];
    let mut hi = [f64::INFINITY; 2];
    for r in family.rects.iter().filter(|r| r.contains(probe)) {
        for k in 0..2 {
            lo[k] = lo[k].max(r.lo[k]);
            hi[k] = hi[k].min(r.hi[k]);
        }
    }
    let point = [0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])];
    Ok((point, depth as usize))
}

/// Segment tree over leaves `0..n` with range add and leftmost range max.
struct MaxAddTree {
    size: usize,
    max: Vec<i64>,
    arg: Vec<usize>,
    lazy: Vec<i64>,
}

impl MaxAddTree {
    fn new(n: usize) -> Self {
        let size = n.next_power_of_two();
        let mut arg = vec![0; 2 * size];
        for i in 0..size {
            arg[size + i] = i;
        }
        for v in (1..size).rev() {
            arg[v] = arg[2 * v];
        }
        // Padding leaves never receive updates; keep them below any real depth.
        let mut max = vec![0; 2 * size];
        for leaf in max.iter_mut().skip(size + n) {
            *leaf = i64::MIN / 2;
        }
        for v in (1..size).rev() {
            max[v] = max[2 * v].max(max[2 * v + 1]);
            arg[v] = if max[2 * v] >= max[2 * v + 1] {
                arg[2 * v]
            } else {
                arg[2 * v + 1]
            };
        }
        Self {
            size,
            max,
            arg,
            lazy: vec![0; 2 * size],
        }
    }

    fn add(&mut self, lo: usize, hi: usize, delta: i64) {
        self.add_rec(1, 0, self.size - 1, lo, hi, delta);
    }

    fn add_rec(&mut self, v: usize, l: usize, r: usize, lo: usize, hi: usize, delta: i64) {
        if hi < l || r < lo {
            return;
        }
        if lo <= l && r <= hi {
            self.max[v] += delta;
            self.lazy[v] += delta;
            return;
        }
        let mid = (l + r) / 2;
        self.add_rec(2 * v, l, mid, lo, hi, delta);
        self.add_rec(2 * v + 1, mid + 1, r, lo, hi, delta);
        let (a, b) = (self.max[2 * v], self.max[2 * v + 1]);
        self.max[v] = a.max(b) + self.lazy[v];
        self.arg[v] = if a >= b {
            self.arg[2 * v]
        } else {
            self.arg[2 * v + 1]
        };
    }

    fn max(&self) -> (i64, usize) {
        (self.max[1], self.arg[1])
    }
}

/// `ceil(c (1 / (eps^2 rho)) (ln(1/rho) + ln(1/delta)))`.
pub fn rect_sample_size(eps: f64, rho: f64, delta: f64, c: f64) -> Result<usize> {
    check_open_unit("eps*rho", eps * rho)?;
    check_open_unit("delta", delta)?;
    check_positive("c", c)?;
    let raw = c / (eps * eps * rho) * ((1.0 / rho).ln() + (1.0 / delta).ln());
    Ok(ceil_size(raw).max(1))
}

/// Rectangles drawn i.i.d. uniformly from the implicit family: a uniform
/// point index and uniform width indices `a1, a2` in `0..m`.
pub fn sample_rectangles(
    points: &PointSet,
    eps: f64,
    rho: f64,
    delta: f64,
    c: f64,
    seed: u64,
) -> Result<RectFamily> {
    let size = rect_sample_size(eps, rho, delta, c)?;
    let family = rect_family(points, &width_levels(eps, rho)?)?;
    let mut rng = rng_from_seed(seed);
    Ok(RectFamily {
        rects: draw_from(&family, size, &mut rng),
        sample: Some(SampleInfo {
            seed,
            target_size: size,
        }),
    })
}

pub fn draw_from(family: &ImplicitRectFamily, size: usize, rng: &mut Rng) -> Vec<Rect> {
    let (n, m) = (family.points.len(), family.levels.m);
    (0..size)
        .map(|_| {
            let i = rng.random_range(0..n);
            let a1 = rng.random_range(0..m);
            let a2 = rng.random_range(0..m);
            family.rect(i, a1, a2)
        })
        .collect()
}

/// Approximate mode of a planar point set: the deepest point of a sampled
/// rectangle family.
pub fn mode_2d(points: &PointSet, params: &SolveParams) -> Result<ModeResult> {
    mode_2d_with(points, params, DEFAULT_SAMPLE_CONSTANT)
}

pub fn mode_2d_with(points: &PointSet, params: &SolveParams, c: f64) -> Result<ModeResult> {
    let start = Instant::now();
    check_planar(points)?;
    let family = sample_rectangles(points, params.eps, params.rho, params.delta, c, params.seed)?;
    let (x, _) = max_depth_point(&family)?;
    ModeResult::evaluate(points, x.to_vec(), "rect2d", *params, start.elapsed())
}

fn check_planar(points: &PointSet) -> Result<()> {
    if points.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: points.dim(),
        });
    }
    Ok(())
}
