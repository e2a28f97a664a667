//! Random projection with one-sided distortion and the high-dimensional
//! pipeline built on it.
//!
//! A projection `Pi` to `m` dimensions is expansive on a set if no pairwise
//! distance shrinks and none grows by more than `1 + gamma`. Under such a
//! projection the mode of the projected density is at least
//! `(1 - eps/2)` times the original maximum, and one cross-space mean-shift
//! step maps a projected approximate mode back to a point of `R^d` that is
//! at least as good.

use std::time::Instant;

use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};

use crate::coresets::{additive_sample_size, discrepancy_sample_size, uniform_sample};
use crate::error::{check_open_unit, check_positive, Error, Result};
use crate::kde::kde_unnormalized;
use crate::meanshift::{cross_space_shift, mean_shift, DEFAULT_TOL};
use crate::params::{ceil_size, derived_rng, ModeResult, Rng, SolveParams};
use crate::points::{squared_distance, PointSet};
use crate::polysolve::{mode_low_dim_with, LowDimConfig};

pub const DEFAULT_JL_CONSTANT: f64 = 8.0;
pub const DEFAULT_M_MAX: usize = 3;

/// `eps / (4 ln(4 / (eps rho)))`.
pub fn gamma_for(eps: f64, rho: f64) -> Result<f64> {
    check_positive("eps", eps)?;
    check_positive("rho", rho)?;
    let er = eps * rho;
    if er >= 4.0 {
        return Err(Error::InvalidParameter {
            name: "eps*rho",
            value: er,
            reason: "must be below 4",
        });
    }
    Ok(eps / (4.0 * (4.0 / er).ln()))
}

/// `ceil(c ln(k / delta) / gamma^2)`.
pub fn jl_dimension(k: usize, delta: f64, gamma: f64, c: f64) -> Result<usize> {
    check_open_unit("delta", delta)?;
    check_positive("gamma", gamma)?;
    check_positive("c", c)?;
    if k == 0 {
        return Err(Error::InvalidParameter {
            name: "k",
            value: 0.0,
            reason: "must be at least 1",
        });
    }
    Ok(ceil_size(c * (k as f64 / delta).ln() / (gamma * gamma)).max(1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectionKind {
    Gaussian,
    Sign,
    /// No projection; used when the target dimension would not be smaller.
    Identity,
}

/// An `m x d` matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    matrix: Vec<f64>,
    m: usize,
    d: usize,
    gamma: f64,
    kind: ProjectionKind,
}

impl Projection {
    pub fn identity(d: usize) -> Self {
        let mut matrix = vec![0.0; d * d];
        for i in 0..d {
            matrix[i * d + i] = 1.0;
        }
        Self {
            matrix,
            m: d,
            d,
            gamma: 0.0,
            kind: ProjectionKind::Identity,
        }
    }

    pub fn target_dim(&self) -> usize {
        self.m
    }

    pub fn source_dim(&self) -> usize {
        self.d
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn kind(&self) -> ProjectionKind {
        self.kind
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: x.len(),
            });
        }
        if self.kind == ProjectionKind::Identity {
            return Ok(x.to_vec());
        }
        Ok(self
            .matrix
            .chunks_exact(self.d)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }
}

/// Entries i.i.d. standard normal (or uniform signs), scaled by
/// `sqrt(1 + gamma) / sqrt(m)`.
///
/// The scale centers the two-sided concentration window on `[1, 1 + gamma]`
/// for distances, so both the no-shrink and the `1 + gamma` bounds hold with
/// high probability.
pub fn draw_projection(
    d: usize,
    m: usize,
    gamma: f64,
    kind: ProjectionKind,
    rng: &mut Rng,
) -> Result<Projection> {
    let scale = (1.0 + gamma).sqrt();
    draw_projection_scaled(d, m, gamma, kind, scale, rng)
}

/// [`draw_projection`] with an explicit factor in place of `sqrt(1 + gamma)`.
pub fn draw_projection_scaled(
    d: usize,
    m: usize,
    gamma: f64,
    kind: ProjectionKind,
    scale: f64,
    rng: &mut Rng,
) -> Result<Projection> {
    if m == 0 || d == 0 {
        return Err(Error::InvalidParameter {
            name: "m",
            value: m as f64,
            reason: "dimensions must be at least 1",
        });
    }
    if !(gamma >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma,
            reason: "must be non-negative",
        });
    }
    if kind == ProjectionKind::Identity {
        if m != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: m,
            });
        }
        return Ok(Projection {
            gamma,
            ..Projection::identity(d)
        });
    }
    let s = scale / (m as f64).sqrt();
    let matrix = (0..m * d)
        .map(|_| match kind {
            ProjectionKind::Gaussian => {
                s * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, rng)
            }
            _ => {
                if rng.random::<bool>() {
                    s
                } else {
                    -s
                }
            }
        })
        .collect();
    Ok(Projection {
        matrix,
        m,
        d,
        gamma,
        kind,
    })
}

pub fn project(pi: &Projection, points: &PointSet) -> Result<PointSet> {
    if points.dim() != pi.d {
        return Err(Error::DimensionMismatch {
            expected: pi.d,
            found: points.dim(),
        });
    }
    if pi.kind == ProjectionKind::Identity {
        return Ok(points.clone());
    }
    let mut flat = Vec::with_capacity(points.len() * pi.m);
    for p in points.iter() {
        flat.extend(pi.apply(p)?);
    }
    PointSet::from_flat(flat, pi.m)
}

/// Whether `|u - v| <= |Pi u - Pi v| <= (1 + gamma) |u - v|` for every pair.
pub fn distortion_holds(original: &PointSet, projected: &PointSet, gamma: f64) -> bool {
    pairwise_ratio_range(original, projected)
        .map_or(true, |(lo, hi)| lo >= 1.0 && hi <= 1.0 + gamma)
}

/// Whether no pairwise distance shrinks.
pub fn is_expansive(original: &PointSet, projected: &PointSet) -> bool {
    pairwise_ratio_range(original, projected).map_or(true, |(lo, _)| lo >= 1.0)
}

/// Smallest and largest `|Pi u - Pi v| / |u - v|` over pairs at positive
/// distance; `None` if there are none.
pub fn pairwise_ratio_range(original: &PointSet, projected: &PointSet) -> Option<(f64, f64)> {
    let mut range: Option<(f64, f64)> = None;
    for i in 0..original.len() {
        for j in i + 1..original.len() {
            let a = squared_distance(original.point(i), original.point(j));
            if a == 0.0 {
                continue;
            }
            let r = (squared_distance(projected.point(i), projected.point(j)) / a).sqrt();
            range = Some(range.map_or((r, r), |(lo, hi)| (lo.min(r), hi.max(r))));
        }
    }
    range
}

/// A solver for the projected problem.
pub trait LowDimSolver {
    /// An approximate mode of `kde(points, .)` for the given accuracy.
    fn solve(&self, points: &PointSet, params: &SolveParams) -> Result<Vec<f64>>;
}

/// The lattice-polynomial solver.
#[derive(Debug, Clone, Copy, Default)]
pub struct GridPolySolver(pub LowDimConfig);

impl LowDimSolver for GridPolySolver {
    fn solve(&self, points: &PointSet, params: &SolveParams) -> Result<Vec<f64>> {
        Ok(mode_low_dim_with(points, params, &self.0)?.result.x)
    }
}

/// Mean shift from every point, keeping the best end point.
#[derive(Debug, Clone, Copy)]
pub struct MeanShiftSolver {
    pub max_iters: usize,
}

impl Default for MeanShiftSolver {
    fn default() -> Self {
        Self { max_iters: 100 }
    }
}

impl LowDimSolver for MeanShiftSolver {
    fn solve(&self, points: &PointSet, _params: &SolveParams) -> Result<Vec<f64>> {
        let mut best = (points.point(0).to_vec(), f64::NEG_INFINITY);
        for p in points.iter() {
            let x = mean_shift(points, p, self.max_iters, DEFAULT_TOL)?;
            let v = kde_unnormalized(points, &x)?;
            if v > best.1 {
                best = (x, v);
            }
        }
        Ok(best.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReductionConfig {
    pub jl_constant: f64,
    /// Largest target dimension used; the formula value is capped here.
    pub m_max: usize,
    pub kind: ProjectionKind,
}

impl Default for ReductionConfig {
    fn default() -> Self {
        Self {
            jl_constant: DEFAULT_JL_CONSTANT,
            m_max: DEFAULT_M_MAX,
            kind: ProjectionKind::Gaussian,
        }
    }
}

impl ReductionConfig {
    /// The projection for `k` points in `R^d`: `jl_dimension(k, delta,
    /// gamma_for(eps, rho))` rows, capped by `m_max`, or the identity when
    /// the formula asks for at least `d` rows and `d <= m_max`.
    pub fn projection(
        &self,
        d: usize,
        k: usize,
        eps: f64,
        rho: f64,
        delta: f64,
        rng: &mut Rng,
    ) -> Result<(Projection, usize)> {
        let gamma = gamma_for(eps, rho)?;
        let formula = jl_dimension(k, delta, gamma, self.jl_constant)?;
        if formula >= d && d <= self.m_max {
            return Ok((Projection::identity(d), formula));
        }
        let m = formula.min(d).min(self.m_max.max(1));
        Ok((draw_projection(d, m, gamma, self.kind, rng)?, formula))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionReport {
    pub result: ModeResult,
    /// The projected solver's answer in `R^m`.
    pub projected_x: Vec<f64>,
    /// `kde(Pi P, projected_x)`.
    pub projected_value: f64,
    pub m_formula: usize,
    /// No pairwise distance of `P` shrank under the projection.
    pub expansive: bool,
}

/// Project, solve in `R^m` at accuracy `eps / 2`, and lift the answer back
/// with one cross-space mean-shift step.
pub fn reduce_and_recover(
    points: &PointSet,
    params: &SolveParams,
    solver: &dyn LowDimSolver,
    config: &ReductionConfig,
) -> Result<ReductionReport> {
    let start = Instant::now();
    let mut rng = derived_rng(params.seed, 0);
    let (pi, m_formula) = config.projection(
        points.dim(),
        points.len() + 1,
        params.eps,
        params.rho,
        params.delta,
        &mut rng,
    )?;
    let projected = project(&pi, points)?;
    let inner = SolveParams {
        eps: params.eps / 2.0,
        ..*params
    };
    let x2 = solver.solve(&projected, &inner)?;
    let x = cross_space_shift(points, &projected, &x2)?;
    let projected_value = kde_unnormalized(&projected, &x2)? / points.len() as f64;
    let expansive = pi.kind == ProjectionKind::Identity || is_expansive(points, &projected);
    let result = ModeResult::evaluate(points, x, "reduce", *params, start.elapsed())?
        .with_m_used(pi.target_dim());
    Ok(ReductionReport {
        result,
        projected_x: x2,
        projected_value,
        m_formula,
        expansive,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighDimConfig {
    pub reduction: ReductionConfig,
    /// Failure probability of each trial's projection.
    pub trial_delta: f64,
    /// Constant of the first-stage sample size, an additive coreset at
    /// accuracy `eps rho` and confidence 0.9.
    pub first_stage_constant: f64,
    pub second_stage_constant: f64,
    /// Number of independent trials; `ceil(log2(1/delta))` when `None`.
    pub repetitions: Option<usize>,
    pub low_dim: LowDimConfig,
}

impl Default for HighDimConfig {
    fn default() -> Self {
        Self {
            reduction: ReductionConfig::default(),
            trial_delta: 0.01,
            first_stage_constant: crate::coresets::DEFAULT_ADDITIVE_CONSTANT,
            second_stage_constant: crate::coresets::DEFAULT_DISCREPANCY_CONSTANT,
            repetitions: None,
            low_dim: LowDimConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HighDimReport {
    pub result: ModeResult,
    pub repetitions: usize,
    pub first_stage_size: usize,
    pub second_stage_size: usize,
    pub m_formula: usize,
}

/// Approximate mode in high dimension: independent trials of subsample,
/// project, subsample again, solve in `R^m`, and lift; the candidate with
/// the best density over all first-stage samples wins.
pub fn mode_high_dim(points: &PointSet, params: &SolveParams) -> Result<ModeResult> {
    Ok(mode_high_dim_with(points, params, &HighDimConfig::default())?.result)
}

pub fn mode_high_dim_with(
    points: &PointSet,
    params: &SolveParams,
    config: &HighDimConfig,
) -> Result<HighDimReport> {
    let start = Instant::now();
    let (eps, rho) = (params.eps, params.rho);
    let repetitions = config
        .repetitions
        .unwrap_or_else(|| ((1.0 / params.delta).log2().ceil() as usize).max(1));
    let n0 = additive_sample_size((eps * rho).min(1.0), 0.1, config.first_stage_constant)?;
    let inner = SolveParams {
        eps: eps / 2.0,
        ..*params
    };
    let solver = GridPolySolver(config.low_dim);

    let mut samples = Vec::with_capacity(repetitions);
    let mut candidates = Vec::with_capacity(repetitions);
    let mut m_used = 0;
    let mut m_formula = 0;
    let mut second = 0;
    for j in 0..repetitions {
        let mut rng = derived_rng(params.seed, j as u64);
        let p0 = if points.len() <= n0 {
            points.clone()
        } else {
            uniform_sample(points, n0, &mut rng)?
        };
        let (pi, formula) = config.reduction.projection(
            p0.dim(),
            p0.len() + 1,
            eps,
            rho,
            config.trial_delta,
            &mut rng,
        )?;
        m_used = pi.target_dim();
        m_formula = formula;
        let projected = project(&pi, &p0)?;
        let n2 = discrepancy_sample_size(m_used, eps, rho, config.second_stage_constant)?;
        let p2 = if n2 >= projected.len() {
            projected.clone()
        } else {
            uniform_sample(&projected, n2, &mut rng)?
        };
        second = p2.len();
        let x2 = solver.solve(
            &p2,
            &SolveParams {
                seed: params.seed.wrapping_add(j as u64),
                ..inner
            },
        )?;
        candidates.push(cross_space_shift(&p0, &projected, &x2)?);
        samples.push(p0);
    }
    let refs: Vec<&PointSet> = samples.iter().collect();
    let pooled = PointSet::concat(&refs)?;
    let mut best = (candidates[0].clone(), f64::NEG_INFINITY);
    for c in candidates {
        let v = kde_unnormalized(&pooled, &c)?;
        if v > best.1 {
            best = (c, v);
        }
    }
    let result = ModeResult::evaluate(points, best.0, "highdim", *params, start.elapsed())?
        .with_m_used(m_used);
    Ok(HighDimReport {
        result,
        repetitions,
        first_stage_size: samples[0].len(),
        second_stage_size: second,
        m_formula,
    })
}
