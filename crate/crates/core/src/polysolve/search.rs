use std::time::Instant;

use super::feasible::{Ball, BallMaximizer, FeasibilityConfig};
use super::grid::{grid_neighborhoods_with, neighborhood_radius};
use super::taylor::{truncation_order, TruncatedTaylorPoly};
use crate::error::{check_open_unit, Error, Result};
use crate::kde::kde_unnormalized;
use crate::params::{ModeResult, SolveParams};
use crate::points::{squared_distance, PointSet};

pub const DEFAULT_S_MAX: usize = 600;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowDimConfig {
    /// Radius multiplier of the search ball around each lattice point.
    pub r: f64,
    /// Radius multiplier of the neighborhoods.
    pub r_prime: f64,
    /// Upper limit on the truncation order.
    pub s_max: usize,
    pub feasibility: FeasibilityConfig,
}

impl Default for LowDimConfig {
    fn default() -> Self {
        Self {
            r: 2.0,
            r_prime: 4.0,
            s_max: DEFAULT_S_MAX,
            feasibility: FeasibilityConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub x: Vec<f64>,
    /// Highest level `beta` at which a witness was found.
    pub beta: f64,
    pub steps: usize,
    pub order: usize,
    pub order_capped: bool,
    /// Whether every infeasible answer was backed by a certificate.
    pub certified: bool,
}

/// Bisection steps for levels in `[0, q_size]` with final gap
/// `|P| eps rho / 10`.
pub fn bisection_steps(q_size: usize, p_size: usize, eps: f64, rho: f64) -> usize {
    let gap = 0.1 * p_size as f64 * eps * rho;
    let ratio = q_size as f64 / gap;
    if ratio <= 1.0 {
        0
    } else {
        ratio.log2().ceil() as usize
    }
}

/// Binary search on `beta` over the feasibility problem for the
/// neighborhood `Q_{P,q}(rp)`; returns the witness of the highest feasible
/// level probed.
pub fn syspoly_search(
    points: &PointSet,
    q: &[f64],
    r: f64,
    rp: f64,
    eps: f64,
    rho: f64,
) -> Result<Vec<f64>> {
    let config = LowDimConfig {
        r,
        r_prime: rp,
        ..LowDimConfig::default()
    };
    Ok(syspoly_search_with(points, q, eps, rho, &config, 0)?.x)
}

pub fn syspoly_search_with(
    points: &PointSet,
    q: &[f64],
    eps: f64,
    rho: f64,
    config: &LowDimConfig,
    stream: u64,
) -> Result<SearchOutcome> {
    points.check_dim(q)?;
    let radius = neighborhood_radius(config.r_prime, eps, rho)?;
    let members: Vec<usize> = points
        .iter()
        .enumerate()
        .filter(|(_, p)| squared_distance(p, q) <= radius * radius)
        .map(|(i, _)| i)
        .collect();
    if members.is_empty() {
        return Err(Error::EmptyNeighborhood);
    }
    let neighborhood = points.select(&members)?;
    search_neighborhood(&neighborhood, points.len(), q, eps, rho, config, stream)
}

fn search_neighborhood(
    neighborhood: &PointSet,
    p_size: usize,
    q: &[f64],
    eps: f64,
    rho: f64,
    config: &LowDimConfig,
    stream: u64,
) -> Result<SearchOutcome> {
    let d = neighborhood.dim();
    let full_order = truncation_order(config.r, config.r_prime, d, eps, rho)?;
    let order = full_order.min(config.s_max.max(1));
    let poly = TruncatedTaylorPoly::new(neighborhood.clone(), order)?;
    let ball = Ball {
        center: q.to_vec(),
        radius_sq: config.r * config.r * (1.0 / (eps * rho)).ln(),
    };
    let gap = 0.1 * p_size as f64 * eps * rho;
    let tol = 0.5 * gap;
    let mut solver = BallMaximizer::new(&poly, ball, config.feasibility, stream, tol)?;
    let steps = bisection_steps(neighborhood.len(), p_size, eps, rho);
    let (mut lo, mut hi) = (0.0, neighborhood.len() as f64);
    let mut witness = solver
        .feasible(0.0, tol)
        .unwrap_or_else(|| solver.best().0.to_vec());
    let mut certified = true;
    for _ in 0..steps {
        let mid = 0.5 * (lo + hi);
        match solver.feasible(mid, tol) {
            Some(x) => {
                lo = mid;
                witness = x;
            }
            None => {
                certified &= solver.is_certified();
                hi = mid;
            }
        }
    }
    Ok(SearchOutcome {
        x: witness,
        beta: lo,
        steps,
        order,
        order_capped: order < full_order,
        certified,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LowDimReport {
    pub result: ModeResult,
    pub neighborhoods: usize,
    /// Neighborhoods actually searched; the rest were too small to win.
    pub searched: usize,
    pub order: usize,
    pub order_capped: bool,
    pub all_certified: bool,
}

/// Approximate mode of `kde(P, .)` by solving the polynomial search on every
/// non-empty lattice neighborhood and keeping the best candidate.
pub fn mode_low_dim(points: &PointSet, params: &SolveParams) -> Result<ModeResult> {
    Ok(mode_low_dim_with(points, params, &LowDimConfig::default())?.result)
}

pub fn mode_low_dim_with(
    points: &PointSet,
    params: &SolveParams,
    config: &LowDimConfig,
) -> Result<LowDimReport> {
    let start = Instant::now();
    let (eps, rho) = (params.eps, params.rho);
    check_open_unit("eps*rho", eps * rho)?;
    let mut feasibility = config.feasibility;
    feasibility.seed = params.seed;
    let config = LowDimConfig {
        feasibility,
        ..*config
    };

    let hoods = grid_neighborhoods_with(points, eps, rho, config.r_prime)?;
    // Larger neighborhoods first: G_Q never exceeds |Q|, so once a candidate
    // beats |Q| the remaining smaller neighborhoods cannot win.
    let mut order_by_size: Vec<usize> = (0..hoods.len()).collect();
    order_by_size.sort_by(|&a, &b| {
        hoods[b]
            .members
            .len()
            .cmp(&hoods[a].members.len())
            .then(a.cmp(&b))
    });
    let mut best: Option<(usize, Vec<f64>, f64)> = None;
    let mut order = 0;
    let mut order_capped = false;
    let mut all_certified = true;
    let mut searched = 0;
    for k in order_by_size {
        let h = &hoods[k];
        if best
            .as_ref()
            .is_some_and(|(_, _, v)| (h.members.len() as f64) < *v)
        {
            break;
        }
        searched += 1;
        let q_set = points.select(&h.members)?;
        let out = search_neighborhood(&q_set, points.len(), &h.q, eps, rho, &config, k as u64)?;
        order = out.order;
        order_capped |= out.order_capped;
        all_certified &= out.certified;
        let value = kde_unnormalized(&q_set, &out.x)?;
        // Ties go to the lexicographically first lattice point.
        let better = match &best {
            None => true,
            Some((bk, _, bv)) => value > *bv || (value == *bv && k < *bk),
        };
        if better {
            best = Some((k, out.x, value));
        }
    }
    let (_, x, _) = best.ok_or(Error::EmptyPointSet)?;
    let result = ModeResult::evaluate(points, x, "grid-poly", *params, start.elapsed())?;
    Ok(LowDimReport {
        result,
        neighborhoods: hoods.len(),
        searched,
        order,
        order_capped,
        all_certified,
    })
}
