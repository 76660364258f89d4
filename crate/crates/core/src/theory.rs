//! Closed-form Lipschitz and depth bounds, and an empirical Lipschitz
//! falsification harness.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{self, Stream};
use crate::scalar::Scalar;
use crate::simulator::Objective;

pub const MIN_LIPSCHITZ_PAIRS: usize = 100;

fn open_unit<T: Scalar>(name: &'static str, x: T) -> Result<()> {
    if x > T::zero() && x < T::one() {
        Ok(())
    } else {
        Err(Error::param(name, format!("{x} not in (0, 1)")))
    }
}

fn positive<T: Scalar>(name: &'static str, x: T) -> Result<()> {
    if x > T::zero() && x.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, format!("{x} must be positive")))
    }
}

/// `√(V̂/δ)`: holds for a random pair with probability at least `1 − δ`.
pub fn lipschitz_noiseless<T: Scalar>(v_hat: T, delta: T) -> Result<T> {
    positive("V_hat", v_hat)?;
    open_unit("delta", delta)?;
    Ok((v_hat / delta).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum NoisyLipschitzForm {
    /// `d³ n^{7/2} q^{(d+1)p}`
    Lemma2,
    /// `√(ln2/2) d² n^{5/2} ‖H₁‖∞ q^{(d₁+1)p+1}`; `None` picks
    /// `‖H₁‖∞ = nd/2` and `d₁ = d`.
    Refined { h_norm: Option<f64>, block_depth: Option<usize> },
}

/// Deterministic Lipschitz constant of the noisy objective.
pub fn lipschitz_noisy<T: Scalar>(degree: usize, n: usize, q: T, p: usize, form: NoisyLipschitzForm) -> Result<T> {
    open_unit("q", q)?;
    if degree == 0 || n == 0 || p == 0 {
        return Err(Error::param("d, n, p", "must be positive"));
    }
    let d = T::from_usize_lossy(degree);
    let nn = T::from_usize_lossy(n);
    let pp = T::from_usize_lossy(p);
    match form {
        NoisyLipschitzForm::Lemma2 => Ok(d.powi(3) * nn.powf(T::lit(3.5)) * q.powf((d + T::one()) * pp)),
        NoisyLipschitzForm::Refined { h_norm, block_depth } => {
            let h = match h_norm {
                Some(h) => {
                    positive("h_norm", h)?;
                    T::lit(h)
                }
                None => nn * d / T::lit(2.0),
            };
            let d1 = T::from_usize_lossy(block_depth.unwrap_or(degree));
            let c = (T::LN_2() / T::lit(2.0)).sqrt();
            Ok(c * d * d * nn.powf(T::lit(2.5)) * h * q.powf((d1 + T::one()) * pp + T::one()))
        }
    }
}

/// Largest depth for which the noiseless regret rate stays below `ε`:
/// `½(ε² − ν + √((ε² − ν)² + 4νε²(1 + log(T/log T))))`.
pub fn effective_depth_noiseless<T: Scalar>(epsilon: T, nu: T, steps: usize) -> Result<T> {
    positive("epsilon", epsilon)?;
    positive("nu", nu)?;
    if steps < 3 {
        return Err(Error::param("T", "need T ≥ 3 so that log log T > 0"));
    }
    let t = T::from_usize_lossy(steps);
    let e2 = epsilon * epsilon;
    let a = e2 - nu;
    let l = T::one() + (t / t.ln()).ln();
    Ok((a + (a * a + T::lit(4.0) * nu * e2 * l).sqrt()) / T::lit(2.0))
}

/// `(p (log T / T)^{ν/(ν+p)})^{1/2}`, the rate the noiseless depth keeps
/// below `ε`.
pub fn noiseless_rate<T: Scalar>(p: usize, nu: T, steps: usize) -> T {
    let t = T::from_usize_lossy(steps);
    let pp = T::from_usize_lossy(p);
    (pp * (t.ln() / t).powf(nu / (nu + pp))).sqrt()
}

/// `(c₁ log n + 3 log d) / ((d+1) log(1/q) n^{c₁−c₂})`.
pub fn effective_depth_noisy<T: Scalar>(n: usize, degree: usize, q: T, c1: T, c2: T) -> Result<T> {
    open_unit("q", q)?;
    if n < 2 || degree == 0 {
        return Err(Error::param("n, d", "need n ≥ 2 and d ≥ 1"));
    }
    positive("c2", c2)?;
    if c1 < c2 {
        return Err(Error::param("c1", "need c1 ≥ c2"));
    }
    let nn = T::from_usize_lossy(n);
    let d = T::from_usize_lossy(degree);
    Ok((c1 * nn.ln() + T::lit(3.0) * d.ln()) / ((d + T::one()) * (T::one() / q).ln() * nn.powf(c1 - c2)))
}

/// `c₁ = c₂ = 7/2 + 2 log T / log n`, from bracketing `pT²n^{7/2}` by
/// powers of `n` at `p = 1`.
pub fn default_depth_constants<T: Scalar>(n: usize, steps: usize) -> Result<(T, T)> {
    if n < 2 || steps == 0 {
        return Err(Error::param("n, T", "need n ≥ 2 and T ≥ 1"));
    }
    let c = T::lit(3.5) + T::lit(2.0) * T::from_usize_lossy(steps).ln() / T::from_usize_lossy(n).ln();
    Ok((c, c))
}

/// Upper end of the admissible noise band, `n^{−1/√(log n)} = e^{−√(log n)}`.
pub fn noise_band_upper<T: Scalar>(n: usize) -> T {
    (-T::from_usize_lossy(n).ln().sqrt()).exp()
}

/// Whether `q ∈ [n^{−poly_degree}, n^{−1/√(log n)}]`.
pub fn in_noise_band<T: Scalar>(n: usize, q: T, poly_degree: T) -> bool {
    let lower = T::from_usize_lossy(n).powf(-poly_degree);
    q >= lower && q <= noise_band_upper(n)
}

/// A depth scaling known only up to constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticShape {
    pub value: f64,
    pub asymptotic_constants_unknown: bool,
}

/// `√(log n)` with unit constant.
pub fn noiseless_depth_shape(n: usize) -> AsymptoticShape {
    AsymptoticShape {
        value: (n as f64).ln().sqrt(),
        asymptotic_constants_unknown: true,
    }
}

/// `log n / log(1/q)` with unit constant.
pub fn noisy_depth_shape(n: usize, q: f64) -> Result<AsymptoticShape> {
    open_unit("q", q)?;
    Ok(AsymptoticShape {
        value: (n as f64).ln() / (1.0 / q).ln(),
        asymptotic_constants_unknown: true,
    })
}

/// How violations of a Lipschitz bound should be read.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundKind {
    /// Holds per pair with probability `1 − delta`; a violation fraction up
    /// to `delta` is expected.
    Probabilistic { delta: f64 },
    /// Holds for every pair; any violation is a bug or a regime mismatch.
    Deterministic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LipschitzBound<T> {
    pub value: T,
    pub kind: BoundKind,
}

impl<T: Scalar> LipschitzBound<T> {
    pub fn probabilistic(value: T, delta: f64) -> Self {
        Self {
            value,
            kind: BoundKind::Probabilistic { delta },
        }
    }

    pub fn deterministic(value: T) -> Self {
        Self {
            value,
            kind: BoundKind::Deterministic,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LipschitzReport<T> {
    pub bound: T,
    pub kind: BoundKind,
    pub samples: usize,
    pub max_observed_ratio: T,
    /// Pairs with `|Δf| > L‖Δθ‖₁`, with no slack.
    pub violations: usize,
    pub seed: u64,
}

impl<T: Scalar> LipschitzReport<T> {
    pub fn violation_fraction(&self) -> f64 {
        self.violations as f64 / self.samples as f64
    }

    /// The bound is at least the largest ratio seen; when false the bound
    /// is being used outside the regime it was derived for.
    pub fn bound_exceeds_observed(&self) -> bool {
        self.bound >= self.max_observed_ratio
    }

    /// Violations stay within what the bound's kind allows.
    pub fn consistent(&self) -> bool {
        match self.kind {
            BoundKind::Probabilistic { delta } => self.violation_fraction() <= delta,
            BoundKind::Deterministic => self.violations == 0,
        }
    }
}

/// Samples `pairs` independent uniform pairs and compares
/// `|f(θ) − f(θ′)| / ‖θ − θ′‖₁` against the bound.
pub fn verify_lipschitz<T: Scalar>(
    objective: &dyn Objective<T>,
    bound: LipschitzBound<T>,
    pairs: usize,
    seed: u64,
) -> Result<LipschitzReport<T>> {
    if pairs < MIN_LIPSCHITZ_PAIRS {
        return Err(Error::param(
            "N",
            format!("need at least {MIN_LIPSCHITZ_PAIRS} pairs, got {pairs}"),
        ));
    }
    let dim = objective.num_params();
    let mut rng = rng::substream(seed, Stream::LipschitzPairs);
    let samples: Vec<(Vec<T>, Vec<T>)> = (0..pairs)
        .map(|_| {
            let a = rng::uniform_angles(&mut rng, dim);
            let b = rng::uniform_angles(&mut rng, dim);
            (a, b)
        })
        .collect();
    let ratios: Vec<(T, bool)> = samples
        .par_iter()
        .map(|(a, b)| {
            let df = (objective.evaluate(a)? - objective.evaluate(b)?).abs();
            let dist = a.iter().zip(b).fold(T::zero(), |s, (&x, &y)| s + (x - y).abs());
            let ratio = if dist > T::zero() { df / dist } else { T::zero() };
            Ok((ratio, df > bound.value * dist))
        })
        .collect::<Result<_>>()?;
    Ok(LipschitzReport {
        bound: bound.value,
        kind: bound.kind,
        samples: pairs,
        max_observed_ratio: ratios.iter().fold(T::zero(), |m, r| m.max(r.0)),
        violations: ratios.iter().filter(|r| r.1).count(),
        seed,
    })
}
