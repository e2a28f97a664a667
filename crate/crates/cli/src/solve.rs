use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use kdemode::dimred::{mode_high_dim_with, HighDimConfig};
use kdemode::meanshift::{mean_shift, DEFAULT_TOL};
use kdemode::oracle::{grid_mode_with, multistart_meanshift_mode, DEFAULT_GRID_BUDGET};
use kdemode::polysolve::{mode_low_dim_with, LowDimConfig};
use kdemode::rect2d::{mode_2d_with, DEFAULT_SAMPLE_CONSTANT};
use kdemode::{kde_unnormalized, ModeResult, PointSet, SolveParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Meanshift,
    GridPoly,
    Highdim,
    Rect2d,
    OracleGrid,
    OracleMs,
}

/// Size constants and budgets settable with `--constant-overrides`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constants {
    pub additive: f64,
    pub discrepancy: f64,
    pub jl: f64,
    pub rect: f64,
    pub m_max: usize,
    pub s_max: usize,
    pub trial_delta: f64,
    pub grid_budget: u128,
    pub random_starts: usize,
    pub max_iters: usize,
}

impl Default for Constants {
    fn default() -> Self {
        let high = HighDimConfig::default();
        Self {
            additive: high.first_stage_constant,
            discrepancy: high.second_stage_constant,
            jl: high.reduction.jl_constant,
            rect: DEFAULT_SAMPLE_CONSTANT,
            m_max: high.reduction.m_max,
            s_max: high.low_dim.s_max,
            trial_delta: high.trial_delta,
            grid_budget: DEFAULT_GRID_BUDGET,
            random_starts: 16,
            max_iters: 200,
        }
    }
}

pub const CONSTANT_KEYS: [&str; 10] = [
    "additive",
    "discrepancy",
    "jl",
    "rect",
    "m_max",
    "s_max",
    "trial_delta",
    "grid_budget",
    "random_starts",
    "max_iters",
];

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    value
        .parse()
        .with_context(|| format!("constant `{key}`: cannot parse `{value}`"))
}

fn positive(key: &str, value: &str) -> Result<f64> {
    let v: f64 = parse(key, value)?;
    if !(v > 0.0 && v.is_finite()) {
        bail!("constant `{key}` must be positive, got {v}");
    }
    Ok(v)
}

impl Constants {
    /// Applies `key=value` pairs; each item may also hold several pairs
    /// separated by commas.
    pub fn with_overrides(mut self, items: &[String]) -> Result<Self> {
        for pair in items
            .iter()
            .flat_map(|s| s.split(','))
            .filter(|s| !s.is_empty())
        {
            let (key, value) = pair
                .split_once('=')
                .with_context(|| format!("override `{pair}` is not key=value"))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "additive" => self.additive = positive(key, value)?,
                "discrepancy" => self.discrepancy = positive(key, value)?,
                "jl" => self.jl = positive(key, value)?,
                "rect" => self.rect = positive(key, value)?,
                "m_max" => self.m_max = parse(key, value)?,
                "s_max" => self.s_max = parse(key, value)?,
                "trial_delta" => {
                    self.trial_delta = positive(key, value)?;
                    if self.trial_delta >= 1.0 {
                        bail!("constant `trial_delta` must be below 1");
                    }
                }
                "grid_budget" => self.grid_budget = parse(key, value)?,
                "random_starts" => self.random_starts = parse(key, value)?,
                "max_iters" => self.max_iters = parse(key, value)?,
                _ => bail!(
                    "unknown constant `{key}` (expected one of {})",
                    CONSTANT_KEYS.join(", ")
                ),
            }
        }
        if self.m_max == 0 || self.s_max == 0 {
            bail!("m_max and s_max must be at least 1");
        }
        Ok(self)
    }

    fn low_dim(&self) -> LowDimConfig {
        LowDimConfig {
            s_max: self.s_max,
            ..LowDimConfig::default()
        }
    }

    fn high_dim(&self) -> HighDimConfig {
        let mut config = HighDimConfig {
            first_stage_constant: self.additive,
            second_stage_constant: self.discrepancy,
            trial_delta: self.trial_delta,
            low_dim: self.low_dim(),
            ..HighDimConfig::default()
        };
        config.reduction.jl_constant = self.jl;
        config.reduction.m_max = self.m_max;
        config
    }
}

/// Mean shift started from the data point of highest density.
fn plain_mean_shift(
    points: &PointSet,
    params: &SolveParams,
    max_iters: usize,
) -> kdemode::Result<ModeResult> {
    let start = std::time::Instant::now();
    let mut best = (0, f64::NEG_INFINITY);
    for (i, p) in points.iter().enumerate() {
        let v = kde_unnormalized(points, p)?;
        if v > best.1 {
            best = (i, v);
        }
    }
    let x = mean_shift(points, points.point(best.0), max_iters, DEFAULT_TOL)?;
    ModeResult::evaluate(points, x, "meanshift", *params, start.elapsed())
}

pub fn run(
    algorithm: Algorithm,
    points: &PointSet,
    params: &SolveParams,
    constants: &Constants,
) -> kdemode::Result<ModeResult> {
    match algorithm {
        Algorithm::Meanshift => plain_mean_shift(points, params, constants.max_iters),
        Algorithm::GridPoly => Ok(mode_low_dim_with(points, params, &constants.low_dim())?.result),
        Algorithm::Highdim => Ok(mode_high_dim_with(points, params, &constants.high_dim())?.result),
        Algorithm::Rect2d => mode_2d_with(points, params, constants.rect),
        Algorithm::OracleGrid => grid_mode_with(points, params, constants.grid_budget),
        Algorithm::OracleMs => {
            multistart_meanshift_mode(points, constants.random_starts, constants.max_iters, params)
        }
    }
}
