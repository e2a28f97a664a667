//! Random-sample coresets for the Gaussian KDE.
//!
//! A uniform sample of size `O(log(1/delta) / alpha^2)` approximates the
//! density everywhere to additive error `alpha`. A sample of size
//! `O((d / eps^2)(1/rho)(log(1/rho) + log(1/delta)))` gives the relative
//! guarantee `|G_P(x) - G_S(x)| <= eps * max(G_P(x), rho)`. The hidden
//! constants are configuration.

use rand::Rng as _;

use crate::error::{check_open_unit, check_positive, Error, Result};
use crate::params::{ceil_size, Rng};
use crate::points::PointSet;

pub const DEFAULT_ADDITIVE_CONSTANT: f64 = 4.0;
pub const DEFAULT_RELATIVE_CONSTANT: f64 = 1.0;
pub const DEFAULT_DISCREPANCY_CONSTANT: f64 = 1.0;

/// `ceil(c * ln(1/delta) / alpha^2)`.
pub fn additive_sample_size(alpha: f64, delta: f64, c: f64) -> Result<usize> {
    check_unit_closed("alpha", alpha)?;
    check_open_unit("delta", delta)?;
    check_positive("c", c)?;
    Ok(ceil_size(c * (1.0 / delta).ln() / (alpha * alpha)).max(1))
}

/// `ceil(c * (d / eps^2) * (1/rho) * (ln(1/rho) + ln(1/delta)))`.
pub fn relative_sample_size(eps: f64, rho: f64, delta: f64, d: usize, c: f64) -> Result<usize> {
    check_unit_closed("eps", eps)?;
    check_unit_closed("rho", rho)?;
    check_open_unit("delta", delta)?;
    check_positive("c", c)?;
    if d == 0 {
        return Err(Error::InvalidParameter {
            name: "d",
            value: 0.0,
            reason: "must be at least 1",
        });
    }
    let raw = c * (d as f64 / (eps * eps)) / rho * ((1.0 / rho).ln() + (1.0 / delta).ln());
    Ok(ceil_size(raw).max(1))
}

/// Size of the second-stage coreset taken after projecting to `m`
/// dimensions: `ceil(c * sqrt(m) / (eps rho) * sqrt(ln(1/(eps rho))))`.
///
/// The sample itself is drawn uniformly; only the size follows the
/// discrepancy-based construction it stands in for.
pub fn discrepancy_sample_size(m: usize, eps: f64, rho: f64, c: f64) -> Result<usize> {
    check_positive("c", c)?;
    let er = eps * rho;
    check_open_unit("eps*rho", er)?;
    let raw = c * (m as f64).sqrt() / er * (1.0 / er).ln().sqrt();
    Ok(ceil_size(raw).max(1))
}

/// `size` points drawn i.i.d. uniformly (with replacement) from `points`.
pub fn uniform_sample(points: &PointSet, size: usize, rng: &mut Rng) -> Result<PointSet> {
    if size == 0 {
        return Err(Error::InvalidParameter {
            name: "size",
            value: 0.0,
            reason: "must be at least 1",
        });
    }
    let n = points.len();
    let idx: Vec<usize> = (0..size).map(|_| rng.random_range(0..n)).collect();
    points.select(&idx)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoresetKind {
    Additive { alpha: f64 },
    Relative { eps: f64, rho: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoresetSpec {
    pub kind: CoresetKind,
    pub delta: f64,
    pub size_constant: f64,
}

impl CoresetSpec {
    pub fn additive(alpha: f64, delta: f64) -> Self {
        Self {
            kind: CoresetKind::Additive { alpha },
            delta,
            size_constant: DEFAULT_ADDITIVE_CONSTANT,
        }
    }

    pub fn relative(eps: f64, rho: f64, delta: f64) -> Self {
        Self {
            kind: CoresetKind::Relative { eps, rho },
            delta,
            size_constant: DEFAULT_RELATIVE_CONSTANT,
        }
    }

    pub fn with_constant(mut self, c: f64) -> Self {
        self.size_constant = c;
        self
    }

    /// Formula size clamped to `[1, n]`.
    pub fn size(&self, n: usize, d: usize) -> Result<usize> {
        let raw = match self.kind {
            CoresetKind::Additive { alpha } => {
                additive_sample_size(alpha, self.delta, self.size_constant)?
            }
            CoresetKind::Relative { eps, rho } => {
                relative_sample_size(eps, rho, self.delta, d, self.size_constant)?
            }
        };
        Ok(raw.clamp(1, n.max(1)))
    }

    pub fn sample(&self, points: &PointSet, rng: &mut Rng) -> Result<PointSet> {
        let size = self.size(points.len(), points.dim())?;
        uniform_sample(points, size, rng)
    }
}

fn check_unit_closed(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value: v,
            reason: "must lie in (0, 1]",
        })
    }
}
