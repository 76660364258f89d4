//! The BO loop: random initial design, then UCB-selected steps.

use serde::{Deserialize, Serialize};

use super::acquisition::select_next;
use super::config::{grid_for_step, BoConfig};
use crate::error::{Error, Result};
use crate::gp::{GpPosterior, ObservationSet};
use crate::rng::{self, Stream};
use crate::scalar::Scalar;
use crate::simulator::{Estimator, Objective};

pub const TRACE_SCHEMA: u32 = 1;

/// One observation. `mu` and `sigma` are the posterior before this point
/// was added, in model units (targets divided by the trace's
/// `target_scale`); `y` and `f_exact` are in objective units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord<T> {
    /// BO step number; initial observations carry `t ≤ 0`.
    pub t: i64,
    pub initial: bool,
    pub theta: Vec<T>,
    pub y: T,
    pub mu: T,
    pub sigma: T,
    /// `None` for initial observations.
    pub eta: Option<T>,
    pub eta_clamped: bool,
    pub grid_per_dim: Option<usize>,
    /// `τ_t < 1` at this step (discretized grids only).
    pub tau_below_one: bool,
    /// Record index of the best `y` so far, initial points included.
    pub best_index: usize,
    pub f_exact: Option<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoTrace<T> {
    pub schema: u32,
    pub config: BoConfig,
    pub p: usize,
    pub seed: u64,
    pub target_scale: T,
    pub records: Vec<StepRecord<T>>,
    pub theta_plus_by_y: Vec<T>,
    /// Argmax of exact `f` over the trace when exact values were recorded.
    pub theta_plus_by_f: Option<Vec<T>>,
}

impl<T: Scalar> BoTrace<T> {
    pub fn initial_count(&self) -> usize {
        self.records.iter().filter(|r| r.initial).count()
    }

    pub fn bo_records(&self) -> &[StepRecord<T>] {
        &self.records[self.initial_count()..]
    }

    /// Running maximum of `y` over all records.
    pub fn best_y(&self) -> Vec<T> {
        running_max(self.records.iter().map(|r| r.y))
    }

    /// Running maximum of exact `f` over all records.
    pub fn best_f(&self) -> Result<Vec<T>> {
        let f = self.exact_values()?;
        Ok(running_max(f.into_iter()))
    }

    pub fn exact_values(&self) -> Result<Vec<T>> {
        self.records
            .iter()
            .map(|r| {
                r.f_exact
                    .ok_or_else(|| Error::param("trace", "exact objective values were not recorded"))
            })
            .collect()
    }

    /// Posterior variances `σ²_{t−1}(θ_t)` of every record, in order.
    pub fn sigma2_sequence(&self) -> Vec<T> {
        self.records.iter().map(|r| r.sigma * r.sigma).collect()
    }

    pub fn points(&self) -> Vec<Vec<T>> {
        self.records.iter().map(|r| r.theta.clone()).collect()
    }
}

fn running_max<T: Scalar>(xs: impl Iterator<Item = T>) -> Vec<T> {
    let mut best = T::neg_infinity();
    xs.map(|x| {
        best = best.max(x);
        best
    })
    .collect()
}

/// Runs `T0` random observations followed by `T` UCB steps against
/// `objective`; `exact`, when given, is evaluated at every point for
/// error accounting and never influences the run.
pub fn run_bo<T: Scalar>(
    objective: &dyn Objective<T>,
    exact: Option<&dyn Objective<T>>,
    config: &BoConfig,
) -> Result<BoTrace<T>> {
    let dim = objective.num_params();
    if dim == 0 || dim % 2 != 0 {
        return Err(Error::param("objective", "dimension must be 2p with p ≥ 1"));
    }
    let p = dim / 2;
    if let Some(e) = exact {
        if e.num_params() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: e.num_params(),
            });
        }
    }
    config.validate(p)?;

    let kernel = config.kernel::<T>()?;
    let estimator = Estimator::new(config.estimator, config.measurements)?;
    let scale = T::lit(config.effective_scale());
    let mut init_rng = rng::substream(config.seed, Stream::InitPoints);
    let mut noise_rng = rng::substream(config.seed, Stream::EstimatorNoise);

    let t0 = config.initial_points(p);
    let mut data = ObservationSet::new(config.measurements)?;
    let mut records: Vec<StepRecord<T>> = Vec::with_capacity(t0 + config.steps);
    let mut best_index = 0usize;

    for i in 0..t0 + config.steps {
        let gp = GpPosterior::fit(data.clone(), kernel)?;
        let initial = i < t0;
        let step = i as i64 - t0 as i64 + 1;
        let (theta, eta, grid, tau_low) = if initial {
            (rng::uniform_angles::<T>(&mut init_rng, dim), None, None, false)
        } else {
            let t = step as usize;
            let eta = config.eta.eta(t, T::lit(config.delta), p)?;
            let (g, low) = grid_for_step(&config.grid, t, p, config.delta)?;
            let theta = select_next(&gp, eta.value, dim, g, config.refine)?.into_vec();
            (theta, Some(eta), Some(g), low)
        };
        let (mu, s2) = gp.predict(&theta);
        let y = estimator.sample(objective, &theta, &mut noise_rng)?;
        if !y.is_finite() {
            return Err(Error::Numerical(format!("non-finite observation at record {i}")));
        }
        let f_exact = exact.map(|e| e.evaluate(&theta)).transpose()?;
        if i > 0 && y > records[best_index].y {
            best_index = i;
        }
        data.push(theta.clone(), y / scale);
        records.push(StepRecord {
            t: step,
            initial,
            theta,
            y,
            mu,
            sigma: s2.max(T::zero()).sqrt(),
            eta: eta.map(|e| e.value),
            eta_clamped: eta.is_some_and(|e| e.clamped),
            grid_per_dim: grid,
            tau_below_one: tau_low,
            best_index,
            f_exact,
        });
    }

    let theta_plus_by_y = records[best_index].theta.clone();
    let theta_plus_by_f = match exact {
        Some(_) => {
            let mut b = 0;
            for (i, r) in records.iter().enumerate() {
                if r.f_exact > records[b].f_exact {
                    b = i;
                }
            }
            Some(records[b].theta.clone())
        }
        None => None,
    };
    Ok(BoTrace {
        schema: TRACE_SCHEMA,
        config: config.clone(),
        p,
        seed: config.seed,
        target_scale: scale,
        records,
        theta_plus_by_y,
        theta_plus_by_f,
    })
}
