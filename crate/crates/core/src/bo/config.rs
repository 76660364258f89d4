//! Run configuration for the UCB loop.

use serde::{Deserialize, Serialize};

use super::acquisition::max_grid_per_dim;
use super::eta::{discretization_tau, eta_sqrt_log, eta_theorem1, eta_theorem2, Eta, TauVariant};
use crate::error::{Error, Result};
use crate::gp::{MaternKernel, Smoothness};
use crate::scalar::Scalar;
use crate::simulator::EstimatorMode;

/// How `η_t` is chosen at BO step `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EtaSchedule {
    /// Noiseless analysis schedule, driven by the measured gradient variance.
    Theorem1 { v_hat: f64 },
    /// Noisy analysis schedule for a degree-`degree` graph on `n` vertices
    /// under channel strength `q`.
    Theorem2 { degree: usize, n: usize, q: f64 },
    Constant { c: f64 },
    /// `c · 2 log(t²π²/(3δ))`.
    SqrtLog { c: f64 },
}

impl EtaSchedule {
    pub fn eta<T: Scalar>(&self, t: usize, delta: T, p: usize) -> Result<Eta<T>> {
        match *self {
            EtaSchedule::Theorem1 { v_hat } => eta_theorem1(t, delta, p, T::lit(v_hat)),
            EtaSchedule::Theorem2 { degree, n, q } => eta_theorem2(t, delta, p, degree, n, T::lit(q)),
            EtaSchedule::Constant { c } => Ok(Eta {
                value: T::lit(c),
                clamped: false,
            }),
            EtaSchedule::SqrtLog { c } => Ok(Eta {
                value: T::lit(c) * eta_sqrt_log(t, delta)?,
                clamped: false,
            }),
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            EtaSchedule::Theorem1 { v_hat } => v_hat > 0.0 && v_hat.is_finite(),
            EtaSchedule::Theorem2 { degree, n, q } => degree > 0 && n > 0 && q > 0.0 && q < 1.0,
            EtaSchedule::Constant { c } | EtaSchedule::SqrtLog { c } => c >= 0.0 && c.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::param("eta_schedule", format!("parameters out of domain: {self:?}")))
        }
    }
}

/// Acquisition grid resolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum GridMode {
    /// Same resolution every step; `None` picks the per-depth default.
    Fixed { per_dim: Option<usize> },
    /// `⌈τ_t⌉` points per dimension, capped by the grid budget.
    Discretized { variant: TauVariant, v_hat: f64 },
}

/// Default acquisition resolution: 64, 24 and 10 points per dimension for
/// `p = 1, 2, 3`, and the largest in-budget grid beyond that.
pub fn default_grid_per_dim(p: usize) -> usize {
    match p {
        1 => 64,
        2 => 24,
        3 => 10,
        _ => max_grid_per_dim(2 * p).min(10),
    }
}

/// Grid resolution for step `t`, and whether `τ_t < 1` forced the minimum.
pub fn grid_for_step(mode: &GridMode, t: usize, p: usize, delta: f64) -> Result<(usize, bool)> {
    match *mode {
        GridMode::Fixed { per_dim } => Ok((per_dim.unwrap_or_else(|| default_grid_per_dim(p)), false)),
        GridMode::Discretized { variant, v_hat } => {
            let (tau, below_one) = discretization_tau(t, p, v_hat, delta, variant)?;
            let cap = max_grid_per_dim(2 * p);
            let g = if tau >= cap as f64 { cap } else { (tau.ceil() as usize).max(2) };
            Ok((g, below_one))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoConfig {
    /// BO steps after the initial design (`T`).
    pub steps: usize,
    /// Uniform random initial observations (`T0`); `None` means `2p + 1`.
    #[serde(default)]
    pub initial: Option<usize>,
    /// Measurements per estimate (`M`).
    pub measurements: u64,
    #[serde(default = "default_estimator")]
    pub estimator: EstimatorMode,
    pub delta: f64,
    pub nu: Smoothness,
    pub length_scale: f64,
    pub eta: EtaSchedule,
    pub grid: GridMode,
    #[serde(default)]
    pub refine: bool,
    /// Divide targets by `target_scale` before fitting.
    #[serde(default = "default_true")]
    pub normalize_targets: bool,
    /// Target divisor when normalizing; the MaxCut edge count in practice.
    #[serde(default = "default_scale")]
    pub target_scale: f64,
    pub seed: u64,
}

fn default_estimator() -> EstimatorMode {
    EstimatorMode::Gaussian
}

fn default_true() -> bool {
    true
}

fn default_scale() -> f64 {
    1.0
}

impl BoConfig {
    /// Constant `η = 4`, `ν = 5/2`, `l = 1`, default grid, `T0 = 2p + 1`.
    pub fn new(steps: usize, measurements: u64, seed: u64) -> Self {
        Self {
            steps,
            initial: None,
            measurements,
            estimator: EstimatorMode::Gaussian,
            delta: 0.1,
            nu: Smoothness::FiveHalves,
            length_scale: 1.0,
            eta: EtaSchedule::Constant { c: 4.0 },
            grid: GridMode::Fixed { per_dim: None },
            refine: false,
            normalize_targets: true,
            target_scale: 1.0,
            seed,
        }
    }

    pub fn initial_points(&self, p: usize) -> usize {
        self.initial.unwrap_or(2 * p + 1)
    }

    pub fn kernel<T: Scalar>(&self) -> Result<MaternKernel<T>> {
        MaternKernel::new(self.nu, T::lit(self.length_scale))
    }

    /// Divisor applied to observations before fitting.
    pub fn effective_scale(&self) -> f64 {
        if self.normalize_targets {
            self.target_scale
        } else {
            1.0
        }
    }

    pub fn validate(&self, p: usize) -> Result<()> {
        if p == 0 {
            return Err(Error::param("p", "depth must be at least 1"));
        }
        if self.initial_points(p) == 0 {
            return Err(Error::param("T0", "need at least one initial observation"));
        }
        if self.measurements == 0 {
            return Err(Error::param("M", "need at least one measurement"));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::param("delta", format!("{} not in (0, 1)", self.delta)));
        }
        if !(self.length_scale > 0.0 && self.length_scale.is_finite()) {
            return Err(Error::param("length_scale", "must be positive"));
        }
        if !(self.target_scale > 0.0 && self.target_scale.is_finite()) {
            return Err(Error::param("target_scale", "must be positive"));
        }
        self.eta.validate()?;
        match self.grid {
            GridMode::Fixed { per_dim: Some(g) } if g < 2 => {
                return Err(Error::param("grid_per_dim", "need at least 2 points per dimension"))
            }
            GridMode::Fixed { per_dim } => {
                let g = per_dim.unwrap_or_else(|| default_grid_per_dim(p));
                if g > max_grid_per_dim(2 * p) {
                    return Err(Error::BudgetExceeded(format!(
                        "grid {g}^{} exceeds the acquisition budget",
                        2 * p
                    )));
                }
            }
            GridMode::Discretized { v_hat, .. } if !(v_hat > 0.0) => {
                return Err(Error::param("V_hat", "gradient variance must be positive"))
            }
            GridMode::Discretized { .. } => {}
        }
        Ok(())
    }
}
