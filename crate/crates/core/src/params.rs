use std::time::Duration;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_open_unit, Error, Result};
use crate::kde::kde;
use crate::points::PointSet;

/// The generator used everywhere a seed is accepted.
pub type Rng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `stream` derived from `seed`.
pub fn derived_rng(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Ceiling of a size formula. Values within a relative `1e-9` of an integer
/// are snapped to it, so `ceil(1/0.01)` is 100 and not 101.
pub fn ceil_size(x: f64) -> usize {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r.max(0.0) as usize
    } else {
        x.ceil().max(0.0) as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveParams {
    pub eps: f64,
    pub rho: f64,
    pub delta: f64,
    pub seed: u64,
}

impl SolveParams {
    pub fn new(eps: f64, rho: f64, delta: f64, seed: u64) -> Result<Self> {
        check_open_unit("eps", eps)?;
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "rho",
                value: rho,
                reason: "must lie in (0, 1]",
            });
        }
        check_open_unit("delta", delta)?;
        Ok(Self {
            eps,
            rho,
            delta,
            seed,
        })
    }

    pub fn eps_rho(&self) -> f64 {
        self.eps * self.rho
    }
}

/// A candidate mode together with its density and provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeResult {
    pub x: Vec<f64>,
    /// `kde(P, x)` for the full input `P`.
    pub value: f64,
    pub algorithm: String,
    pub params: SolveParams,
    pub elapsed: Duration,
    /// Target dimension of a random projection, when one was used.
    pub m_used: Option<usize>,
}

impl ModeResult {
    pub fn evaluate(
        points: &PointSet,
        x: Vec<f64>,
        algorithm: impl Into<String>,
        params: SolveParams,
        elapsed: Duration,
    ) -> Result<Self> {
        let value = kde(points, &x)?;
        Ok(Self {
            x,
            value,
            algorithm: algorithm.into(),
            params,
            elapsed,
            m_used: None,
        })
    }

    pub fn with_m_used(mut self, m: usize) -> Self {
        self.m_used = Some(m);
        self
    }

    /// The JSON record written by the CLI.
    pub fn to_record(&self, points: &PointSet) -> ResultRecord {
        ResultRecord {
            algorithm: self.algorithm.clone(),
            x: self.x.clone(),
            value: self.value,
            eps: self.params.eps,
            rho: self.params.rho,
            delta: self.params.delta,
            seed: self.params.seed,
            n: points.len(),
            d: points.dim(),
            m_used: self.m_used,
            elapsed_ms: self.elapsed.as_secs_f64() * 1e3,
        }
    }
}

/// Serialized form of a [`ModeResult`]; the key set is fixed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub algorithm: String,
    pub x: Vec<f64>,
    pub value: f64,
    pub eps: f64,
    pub rho: f64,
    pub delta: f64,
    pub seed: u64,
    pub n: usize,
    pub d: usize,
    pub m_used: Option<usize>,
    pub elapsed_ms: f64,
}
