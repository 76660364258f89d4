//! Dense landscape scans: the grid-search optimum oracle and tabulated
//! objective surfaces.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bo::acquisition::{grid_argmax, grid_point, max_grid_per_dim, refine_coordinatewise};
use crate::error::{Error, Result};
use crate::scalar::{two_pi, wrap_angle, Scalar};
use crate::simulator::Objective;

/// Oracle resolution for depth `p`: four times the acquisition grid,
/// capped by the grid budget.
pub fn default_oracle_resolution(p: usize) -> usize {
    (4 * crate::bo::config::default_grid_per_dim(p)).min(max_grid_per_dim(2 * p))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult<T> {
    pub f_star: T,
    pub theta_star: Vec<T>,
    /// Grid points per dimension of the scan.
    pub resolution: usize,
    pub refined: bool,
    /// Best value on the grid before refinement.
    pub grid_value: T,
}

fn eval_or_nan<T: Scalar>(obj: &dyn Objective<T>, x: &[T]) -> T {
    obj.evaluate(x).unwrap_or_else(|_| T::nan())
}

/// Maximum of `objective` by exhaustive grid scan, then coordinate-wise
/// refinement of the best grid point and of any `warm_starts`.
pub fn oracle_max<T: Scalar>(
    objective: &dyn Objective<T>,
    resolution: usize,
    refine: bool,
    warm_starts: &[Vec<T>],
) -> Result<OracleResult<T>> {
    let dim = objective.num_params();
    // surface evaluation errors before the scan swallows them as NaN
    objective.evaluate(&vec![T::zero(); dim])?;
    let (grid_theta, grid_value) = grid_argmax(dim, resolution, |x| eval_or_nan(objective, x))?;
    let mut best = (grid_theta.clone(), grid_value);
    if refine {
        let cell = two_pi::<T>() / T::from_usize_lossy(resolution);
        let mut starts = vec![grid_theta];
        starts.extend(warm_starts.iter().cloned());
        for s in &starts {
            if s.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: s.len(),
                });
            }
            let (x, v) = refine_coordinatewise(|x| eval_or_nan(objective, x), s, cell);
            if v > best.1 {
                best = (x, v);
            }
        }
    }
    Ok(OracleResult {
        f_star: best.1,
        theta_star: best.0.into_iter().map(wrap_angle).collect(),
        resolution,
        refined: refine,
        grid_value,
    })
}

/// Grid point, objective value, and the optional second objective's value.
pub type LandscapeRow<T> = (Vec<T>, T, Option<T>);

/// Objective values on the uniform grid in row-major order (first
/// coordinate slowest), optionally alongside a second objective.
pub fn landscape_rows<T: Scalar>(
    objective: &dyn Objective<T>,
    noisy: Option<&dyn Objective<T>>,
    resolution: usize,
) -> Result<Vec<LandscapeRow<T>>> {
    let dim = objective.num_params();
    if dim > 4 {
        return Err(Error::param("p", "landscapes are limited to p ≤ 2"));
    }
    if resolution < 2 {
        return Err(Error::param("resolution", "need at least 2 points per dimension"));
    }
    let total = (resolution as u64)
        .checked_pow(dim as u32)
        .filter(|&t| t <= crate::bo::GRID_POINT_BUDGET)
        .ok_or_else(|| Error::BudgetExceeded(format!("landscape {resolution}^{dim} too large")))?;
    (0..total)
        .into_par_iter()
        .map(|i| {
            let x = grid_point::<T>(dim, resolution, i);
            let f = objective.evaluate(&x)?;
            let g = noisy.map(|o| o.evaluate(&x)).transpose()?;
            Ok((x, f, g))
        })
        .collect()
}

/// CSV with header `theta_1,…,theta_{2p},f[,f_noisy]`.
pub fn landscape_csv<T: Scalar>(rows: &[LandscapeRow<T>], dim: usize) -> String {
    let noisy = rows.first().is_some_and(|r| r.2.is_some());
    let mut header: Vec<String> = (1..=dim).map(|k| format!("theta_{k}")).collect();
    header.push("f".into());
    if noisy {
        header.push("f_noisy".into());
    }
    let mut out = header.join(",");
    out.push('\n');
    for (x, f, g) in rows {
        let mut cells: Vec<String> = x.iter().map(|v| v.to_string()).collect();
        cells.push(f.to_string());
        if let Some(g) = g {
            cells.push(g.to_string());
        }
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}
