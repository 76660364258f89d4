//! Optimization-error accounting against a known optimum.

use super::run::BoTrace;
use crate::error::{Error, Result};
use crate::gp::information_gain;
use crate::scalar::Scalar;

/// Most negative `r_t` attributed to round-off rather than to an oracle
/// that missed the true maximum.
pub const ORACLE_TOLERANCE: f64 = 1e-6;

/// `f* − max_{s≤i} f(θ_s)` for every record, initial points included.
pub fn error_sequence<T: Scalar>(trace: &BoTrace<T>, f_star: T) -> Result<Vec<T>> {
    let r: Vec<T> = trace.best_f()?.into_iter().map(|b| f_star - b).collect();
    if let Some((i, &v)) = r
        .iter()
        .enumerate()
        .find(|(_, &v)| v < -T::lit(ORACLE_TOLERANCE))
    {
        return Err(Error::Numerical(format!(
            "record {i} beats the supplied optimum by {}; the oracle resolution is too coarse",
            -v
        )));
    }
    Ok(r)
}

/// `r_t` for BO steps `t = 1..T`, where the running maximum also covers
/// the initial design.
pub fn optimization_error<T: Scalar>(trace: &BoTrace<T>, f_star: T) -> Result<Vec<T>> {
    let all = error_sequence(trace, f_star)?;
    Ok(all[trace.initial_count()..].to_vec())
}

/// `(√(c₀ T η_T g_T) + π²/6) / T` with `c₀ = 8 / log(1 + 4M)`.
pub fn regret_bound_lemma11<T: Scalar>(steps: usize, eta_t: T, gain: T, measurements: u64) -> Result<T> {
    if steps == 0 || measurements == 0 {
        return Err(Error::param("T, M", "must be positive"));
    }
    if eta_t < T::zero() || gain < T::zero() {
        return Err(Error::param("eta_T, g_T", "must be nonnegative"));
    }
    let m = T::from_u64(measurements).expect("M fits scalar");
    let c0 = T::lit(8.0) / (T::one() + T::lit(4.0) * m).ln();
    let tt = T::from_usize_lossy(steps);
    Ok(((c0 * tt * eta_t * gain).sqrt() + T::PI() * T::PI() / T::lit(6.0)) / tt)
}

/// Cumulative information gain after each record.
pub fn cumulative_gain<T: Scalar>(trace: &BoTrace<T>) -> Result<Vec<T>> {
    let m = trace.config.measurements;
    let s2 = trace.sigma2_sequence();
    (1..=s2.len()).map(|k| information_gain(&s2[..k], m)).collect()
}

/// Information gain of all records.
pub fn trace_information_gain<T: Scalar>(trace: &BoTrace<T>) -> Result<T> {
    information_gain(&trace.sigma2_sequence(), trace.config.measurements)
}

/// Information gain of the BO steps alone; the `g_T` to pair with `T` BO
/// steps in [`regret_bound_lemma11`].
pub fn bo_information_gain<T: Scalar>(trace: &BoTrace<T>) -> Result<T> {
    let s2: Vec<T> = trace.bo_records().iter().map(|r| r.sigma * r.sigma).collect();
    information_gain(&s2, trace.config.measurements)
}
