use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::objective::Objective;
use crate::error::{Error, Result};
use crate::rng::{self, Rng, Stream};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimatorMode {
    /// `f(θ) + ξ`, `ξ ~ N(0, 1/(4M))`.
    Gaussian,
    /// Mean of `M` sampled basis outcomes.
    Shots,
}

/// How `y(θ)` is produced from an objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Estimator {
    pub mode: EstimatorMode,
    pub measurements: u64,
}

impl Estimator {
    pub fn new(mode: EstimatorMode, measurements: u64) -> Result<Self> {
        if measurements < 1 {
            return Err(Error::param("M", "measurement count must be at least 1"));
        }
        Ok(Self { mode, measurements })
    }

    /// Observation noise variance assumed by the GP model, `1/(4M)`.
    pub fn noise_variance<T: Scalar>(&self) -> T {
        T::one() / (T::lit(4.0) * T::from_u64(self.measurements).expect("M fits scalar"))
    }

    pub fn sample<T: Scalar>(
        &self,
        objective: &dyn Objective<T>,
        theta: &[T],
        rng: &mut Rng,
    ) -> Result<T> {
        match self.mode {
            EstimatorMode::Gaussian => {
                let f = objective.evaluate(theta)?;
                let z: f64 = StandardNormal.sample(rng);
                Ok(f + T::lit(z) * self.noise_variance::<T>().sqrt())
            }
            EstimatorMode::Shots => {
                let (probs, values) = match (objective.basis_probabilities(theta), objective.outcome_values()) {
                    (Some(p), Some(v)) => (p?, v?),
                    _ => {
                        return Err(Error::param(
                            "mode",
                            "shot estimation needs an objective with a measurement distribution",
                        ))
                    }
                };
                // clamp tiny negative round-off from density-matrix diagonals
                let weights: Vec<f64> = probs.iter().map(|p| p.as_f64().max(0.0)).collect();
                let dist = WeightedIndex::new(&weights)
                    .map_err(|e| Error::Numerical(format!("outcome distribution: {e}")))?;
                let mut total = 0.0_f64;
                for _ in 0..self.measurements {
                    total += values[dist.sample(rng)].as_f64();
                }
                Ok(T::lit(total / self.measurements as f64))
            }
        }
    }
}

/// One estimate `y(θ)` from a fresh generator seeded by `seed`.
pub fn sample_objective<T: Scalar>(
    objective: &dyn Objective<T>,
    theta: &[T],
    measurements: u64,
    mode: EstimatorMode,
    seed: u64,
) -> Result<T> {
    let est = Estimator::new(mode, measurements)?;
    let mut rng = rng::substream(seed, Stream::EstimatorNoise);
    est.sample(objective, theta, &mut rng)
}
