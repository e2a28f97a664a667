//! Low-dimensional mode finding through truncated Taylor polynomials.
//!
//! The plane (or space) is covered by a lattice with side
//! `2 sqrt(ln(1/(eps rho)) / d)`. For each lattice point `q`, the points
//! within `4 sqrt(ln(1/(eps rho)))` form a neighborhood `Q`; near `q` the
//! density of `Q` is replaced by its per-coordinate Taylor truncation, and a
//! binary search over levels `beta` asks whether the polynomial reaches
//! `beta` inside the ball of radius `2 sqrt(ln(1/(eps rho)))` around `q`.
//! The best witness over all neighborhoods is the answer.
//!
//! The feasibility question is answered by a multistart projected gradient
//! ascent, followed in dimension at most three by a branch and bound that
//! certifies the maximum to within half the bisection gap.

mod feasible;
mod grid;
mod search;
mod taylor;

pub use feasible::{
    syspoly_feasible, syspoly_feasible_with, Ball, BallMaximizer, FeasibilityConfig,
};
pub use grid::{
    grid_neighborhoods, grid_neighborhoods_with, neighborhood_radius, GridSpec, Neighborhood,
};
pub use search::{
    bisection_steps, mode_low_dim, mode_low_dim_with, syspoly_search, syspoly_search_with,
    LowDimConfig, LowDimReport, SearchOutcome, DEFAULT_S_MAX,
};
pub use taylor::{build_truncated_poly, eval_truncated, truncation_order, TruncatedTaylorPoly};
