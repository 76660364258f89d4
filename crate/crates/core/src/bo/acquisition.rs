//! Acquisition maximization: exhaustive scan of a uniform grid on
//! `[0, 2π)^dim`, then optional coordinate-wise golden-section refinement.

use rayon::prelude::*;

use super::eta::ucb;
use crate::error::{Error, Result};
use crate::gp::GpPosterior;
use crate::scalar::{two_pi, wrap_angle, Scalar};
use crate::simulator::ParamVector;

/// Most grid points a single scan may visit.
pub const GRID_POINT_BUDGET: u64 = 10_000_000;

const GOLDEN_ITERATIONS: usize = 40;
const REFINE_SWEEPS: usize = 3;

/// Largest per-dimension resolution within [`GRID_POINT_BUDGET`].
pub fn max_grid_per_dim(dim: usize) -> usize {
    let mut g = (GRID_POINT_BUDGET as f64).powf(1.0 / dim as f64).floor() as usize;
    while checked_grid_size(dim, g + 1).is_ok() {
        g += 1;
    }
    while g > 2 && checked_grid_size(dim, g).is_err() {
        g -= 1;
    }
    g
}

fn checked_grid_size(dim: usize, per_dim: usize) -> Result<u64> {
    let total = (per_dim as u64).checked_pow(dim as u32);
    match total {
        Some(t) if t <= GRID_POINT_BUDGET => Ok(t),
        _ => Err(Error::BudgetExceeded(format!(
            "grid {per_dim}^{dim} exceeds {GRID_POINT_BUDGET} points"
        ))),
    }
}

/// Point of the uniform grid with flat index `idx`; the first coordinate
/// varies slowest.
pub fn grid_point<T: Scalar>(dim: usize, per_dim: usize, mut idx: u64) -> Vec<T> {
    let step = two_pi::<T>() / T::from_usize_lossy(per_dim);
    let mut x = vec![T::zero(); dim];
    for c in (0..dim).rev() {
        x[c] = T::from_u64(idx % per_dim as u64).expect("grid index fits") * step;
        idx /= per_dim as u64;
    }
    x
}

/// Best grid point of `f`; ties go to the smallest flat index, which is
/// the lexicographically smallest grid index.
pub fn grid_argmax<T, F>(dim: usize, per_dim: usize, f: F) -> Result<(Vec<T>, T)>
where
    T: Scalar,
    F: Fn(&[T]) -> T + Sync,
{
    if per_dim < 2 {
        return Err(Error::param("grid_per_dim", "need at least 2 points per dimension"));
    }
    let total = checked_grid_size(dim, per_dim)?;
    let (idx, value) = (0..total)
        .into_par_iter()
        .map(|i| (i, f(&grid_point::<T>(dim, per_dim, i))))
        .reduce(
            || (u64::MAX, T::neg_infinity()),
            |a, b| {
                if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
                    b
                } else {
                    a
                }
            },
        );
    if idx == u64::MAX {
        return Err(Error::Numerical("grid scan found no finite value".into()));
    }
    Ok((grid_point(dim, per_dim, idx), value))
}

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
pub fn golden_section_max<T: Scalar>(mut f: impl FnMut(T) -> T, mut a: T, mut b: T, iterations: usize) -> (T, T) {
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iterations {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Coordinate-wise golden-section refinement inside the box
/// `start ± half_width`. Never returns a worse point than `start`.
pub fn refine_coordinatewise<T: Scalar>(f: impl Fn(&[T]) -> T, start: &[T], half_width: T) -> (Vec<T>, T) {
    let mut x = start.to_vec();
    let mut best = f(&x);
    for _ in 0..REFINE_SWEEPS {
        for c in 0..x.len() {
            let centre = start[c];
            let mut probe = x.clone();
            let (xc, v) = golden_section_max(
                |s| {
                    probe[c] = s;
                    f(&probe)
                },
                centre - half_width,
                centre + half_width,
                GOLDEN_ITERATIONS,
            );
            if v > best {
                best = v;
                x[c] = xc;
            }
        }
    }
    (x, best)
}

/// UCB-maximizing next point over the `grid_per_dim^{dim}` grid, refined
/// within the winning cell when `refine` is set.
pub fn select_next<T: Scalar>(
    gp: &GpPosterior<T>,
    eta: T,
    dim: usize,
    grid_per_dim: usize,
    refine: bool,
) -> Result<ParamVector<T>> {
    let acq = |x: &[T]| {
        let (mu, s2) = gp.predict(x);
        ucb(mu, s2.max(T::zero()).sqrt(), eta)
    };
    let (mut x, _) = grid_argmax(dim, grid_per_dim, acq)?;
    if refine {
        let half = two_pi::<T>() / T::from_usize_lossy(grid_per_dim) / T::lit(2.0);
        x = refine_coordinatewise(acq, &x, half).0;
    }
    ParamVector::new(x.into_iter().map(wrap_angle).collect())
}
