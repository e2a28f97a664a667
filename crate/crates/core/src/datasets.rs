//! Synthetic Gaussian mixtures.
//!
//! A [`MixtureSpec`] lists components with a weight, a mean and an isotropic
//! standard deviation. Sampling is driven by a single seeded generator, so the
//! same spec and seed always produce bit-identical points.

use rand::distr::weighted::WeightedIndex;
use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{rng_from_seed, Rng};
use crate::points::PointSet;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub weight: f64,
    pub mean: Vec<f64>,
    /// Standard deviation of every coordinate.
    #[serde(default)]
    pub scale: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureSpec {
    pub components: Vec<Component>,
}

impl MixtureSpec {
    /// A single component at `mean`.
    pub fn single(mean: Vec<f64>, scale: f64) -> Self {
        Self {
            components: vec![Component {
                weight: 1.0,
                mean,
                scale,
            }],
        }
    }

    /// `k` equally weighted components with means uniform in
    /// `[-spread, spread]^d`, all with standard deviation `scale`.
    pub fn random(d: usize, k: usize, scale: f64, spread: f64, rng: &mut Rng) -> Self {
        let components = (0..k)
            .map(|_| Component {
                weight: 1.0,
                mean: (0..d)
                    .map(|_| {
                        if spread > 0.0 {
                            rng.random_range(-spread..spread)
                        } else {
                            0.0
                        }
                    })
                    .collect(),
                scale,
            })
            .collect();
        Self { components }
    }

    pub fn dim(&self) -> usize {
        self.components.first().map_or(0, |c| c.mean.len())
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.dim();
        if self.components.is_empty() || d == 0 {
            return Err(Error::EmptyPointSet);
        }
        for c in &self.components {
            if c.mean.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: c.mean.len(),
                });
            }
            if !(c.weight >= 0.0 && c.weight.is_finite()) {
                return Err(Error::InvalidParameter {
                    name: "weight",
                    value: c.weight,
                    reason: "must be non-negative and finite",
                });
            }
            if !(c.scale >= 0.0 && c.scale.is_finite()) {
                return Err(Error::InvalidParameter {
                    name: "scale",
                    value: c.scale,
                    reason: "must be non-negative and finite",
                });
            }
            if c.mean.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite { index: 0 });
            }
        }
        if self.components.iter().all(|c| c.weight == 0.0) {
            return Err(Error::InvalidParameter {
                name: "weight",
                value: 0.0,
                reason: "at least one weight must be positive",
            });
        }
        Ok(())
    }

    /// Draws `n` points. Also returns the component of each point.
    pub fn sample_labeled(&self, n: usize, rng: &mut Rng) -> Result<(PointSet, Vec<usize>)> {
        self.validate()?;
        if n == 0 {
            return Err(Error::EmptyPointSet);
        }
        let d = self.dim();
        let weights: Vec<f64> = self.components.iter().map(|c| c.weight).collect();
        let pick = WeightedIndex::new(&weights).map_err(|_| Error::InvalidParameter {
            name: "weight",
            value: 0.0,
            reason: "weights do not form a distribution",
        })?;
        let mut coords = Vec::with_capacity(n * d);
        let mut labels = Vec::with_capacity(n);
        for _ in 0..n {
            let k = pick.sample(rng);
            let c = &self.components[k];
            for &m in &c.mean {
                let z: f64 = StandardNormal.sample(rng);
                coords.push(m + c.scale * z);
            }
            labels.push(k);
        }
        Ok((PointSet::from_flat(coords, d)?, labels))
    }

    pub fn sample(&self, n: usize, rng: &mut Rng) -> Result<PointSet> {
        Ok(self.sample_labeled(n, rng)?.0)
    }

    pub fn generate(&self, n: usize, seed: u64) -> Result<PointSet> {
        self.sample(n, &mut rng_from_seed(seed))
    }
}

/// `n` points from a random `k`-component mixture; the seed fixes both the
/// means and the draws.
pub fn random_mixture(
    n: usize,
    d: usize,
    k: usize,
    scale: f64,
    spread: f64,
    seed: u64,
) -> Result<PointSet> {
    let mut rng = rng_from_seed(seed);
    MixtureSpec::random(d, k, scale, spread, &mut rng).sample(n, &mut rng)
}
