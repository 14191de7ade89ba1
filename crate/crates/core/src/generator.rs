//! Seeded random instance generator for benchmarks.
//!
//! For `J` jobs with constants `c1`, `c2` and a capacity ratio:
//!
//! - `x_i` uniform in `[1, c1]`,
//! - `K_i = x_i +` uniform in `[c1, floor(1.5 * c1)]`,
//! - `w_i` uniform in `[1, c2]` (integer-valued weights),
//! - `V = max(1, round(ratio * J))`, rounding half away from zero.
//!
//! Draws come from one ChaCha8 stream seeded with `rng_seed`, in the fixed
//! order: all sizes, then all deadline offsets, then all weights. Batch
//! element `i` reseeds with `rng_seed + i`, so any single instance can be
//! regenerated in isolation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ProblemInstance;
use crate::random;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GeneratorConfig {
    pub n_jobs: usize,
    /// Upper bound on job sizes; also the lower bound on deadline slack.
    pub c1: u64,
    /// Upper bound on integer weights.
    pub c2: u64,
    /// Machine count as a fraction of the job count.
    pub capacity_ratio: f64,
    pub rng_seed: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self { n_jobs: 1, c1: 10, c2: 5, capacity_ratio: 0.25, rng_seed: 0 }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_jobs == 0 {
            return Err(Error::InvalidParameter("n_jobs must be at least 1".into()));
        }
        if self.c1 == 0 || self.c2 == 0 {
            return Err(Error::InvalidParameter("c1 and c2 must be at least 1".into()));
        }
        if !(self.capacity_ratio > 0.0 && self.capacity_ratio <= 1.0) {
            return Err(Error::InvalidParameter(
                "capacity_ratio must lie in (0, 1]".into(),
            ));
        }
        Ok(())
    }

    /// Machine count for this configuration.
    pub fn capacity(&self) -> usize {
        ((self.capacity_ratio * self.n_jobs as f64).round() as usize).max(1)
    }
}

/// Draws one instance from the seeded stream.
pub fn generate<T: Scalar>(config: &GeneratorConfig) -> Result<ProblemInstance<T>> {
    config.validate()?;
    let mut rng = random::stream(config.rng_seed);
    let n = config.n_jobs;
    let slack_hi = config.c1 + config.c1 / 2;
    let sizes: Vec<usize> =
        (0..n).map(|_| random::uniform_int(&mut rng, 1, config.c1) as usize).collect();
    let deadlines: Vec<usize> = sizes
        .iter()
        .map(|&x| x + random::uniform_int(&mut rng, config.c1, slack_hi) as usize)
        .collect();
    let weights: Vec<T> = (0..n)
        .map(|_| T::from_u64(random::uniform_int(&mut rng, 1, config.c2)).unwrap())
        .collect();
    ProblemInstance::new(sizes, deadlines, weights, config.capacity())
}

/// Draws `count` instances; element `i` uses seed `rng_seed + i`.
pub fn generate_batch<T: Scalar>(
    config: &GeneratorConfig,
    count: usize,
) -> Result<Vec<ProblemInstance<T>>> {
    if count == 0 {
        return Err(Error::InvalidParameter("count must be at least 1".into()));
    }
    (0..count)
        .map(|i| {
            let derived = GeneratorConfig {
                rng_seed: config.rng_seed.wrapping_add(i as u64),
                ..config.clone()
            };
            generate(&derived)
        })
        .collect()
}
