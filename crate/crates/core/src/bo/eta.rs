//! Exploration weights `η_t` and discretization degrees `τ_t`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// An `η_t` value and whether its second (discretization) term was clamped
/// to zero because the log argument fell below 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eta<T> {
    pub value: T,
    pub clamped: bool,
}

fn check_delta<T: Scalar>(delta: T) -> Result<()> {
    if !(delta > T::zero() && delta < T::one()) {
        return Err(Error::param("delta", format!("{delta} not in (0, 1)")));
    }
    Ok(())
}

fn check_step(t: usize) -> Result<()> {
    if t < 1 {
        return Err(Error::param("t", "steps are numbered from 1"));
    }
    Ok(())
}

fn with_discretization_term<T: Scalar>(first: T, p: usize, arg: T) -> Eta<T> {
    if arg < T::one() {
        Eta {
            value: first,
            clamped: true,
        }
    } else {
        let four_p = T::lit(4.0) * T::from_usize_lossy(p);
        Eta {
            value: first + four_p * arg.ln(),
            clamped: false,
        }
    }
}

/// `η_t = 2 log(2π²t²/(3δ)) + 4p log(8πp t² √(V̂/δ))` for the noiseless
/// analysis.
pub fn eta_theorem1<T: Scalar>(t: usize, delta: T, p: usize, v_hat: T) -> Result<Eta<T>> {
    check_step(t)?;
    check_delta(delta)?;
    if !(v_hat > T::zero()) {
        return Err(Error::param("V_hat", "gradient variance must be positive"));
    }
    let (two, three) = (T::lit(2.0), T::lit(3.0));
    let tt = T::from_usize_lossy(t);
    let pi2 = T::PI() * T::PI();
    let first = two * (two * pi2 * tt * tt / (three * delta)).ln();
    let arg = T::lit(8.0) * T::PI() * T::from_usize_lossy(p) * tt * tt * (v_hat / delta).sqrt();
    Ok(with_discretization_term(first, p, arg))
}

/// `η_t = 2 log(π²t²/(3δ)) + 4p log(4πp t² d³ n^{7/2} q^{(d+1)p})` for the
/// noisy analysis.
pub fn eta_theorem2<T: Scalar>(
    t: usize,
    delta: T,
    p: usize,
    degree: usize,
    n: usize,
    q: T,
) -> Result<Eta<T>> {
    check_step(t)?;
    check_delta(delta)?;
    if !(q > T::zero() && q < T::one()) {
        return Err(Error::param("q", format!("{q} not in (0, 1)")));
    }
    if degree == 0 || n == 0 || p == 0 {
        return Err(Error::param("d, n, p", "must be positive"));
    }
    let (two, three) = (T::lit(2.0), T::lit(3.0));
    let tt = T::from_usize_lossy(t);
    let first = two * (T::PI() * T::PI() * tt * tt / (three * delta)).ln();
    let d = T::from_usize_lossy(degree);
    let nn = T::from_usize_lossy(n);
    let pp = T::from_usize_lossy(p);
    // log of the argument, so tiny q^{(d+1)p} does not underflow
    let log_arg = (T::lit(4.0) * T::PI() * pp * tt * tt).ln()
        + three * d.ln()
        + T::lit(3.5) * nn.ln()
        + (d + T::one()) * pp * q.ln();
    if log_arg < T::zero() {
        Ok(Eta {
            value: first,
            clamped: true,
        })
    } else {
        Ok(Eta {
            value: first + T::lit(4.0) * pp * log_arg,
            clamped: false,
        })
    }
}

/// `2 log(t²π²/(3δ))`, the confidence weight without a discretization term.
pub fn eta_sqrt_log<T: Scalar>(t: usize, delta: T) -> Result<T> {
    check_step(t)?;
    check_delta(delta)?;
    let tt = T::from_usize_lossy(t);
    Ok(T::lit(2.0) * (tt * tt * T::PI() * T::PI() / (T::lit(3.0) * delta)).ln())
}

/// `μ + √η σ`.
pub fn ucb<T: Scalar>(mu: T, sigma: T, eta: T) -> T {
    mu + eta.sqrt() * sigma
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TauVariant {
    /// `4πp t² √(V/δ)`
    Lemma5,
    /// `8πp t² √(V/δ)`, the factor used inside the noiseless `η_t`.
    Theorem1,
}

/// Discretization degree `τ_t`; also reports whether `τ_t < 1`, where the
/// discretization argument no longer applies.
pub fn discretization_tau<T: Scalar>(
    t: usize,
    p: usize,
    v_hat: T,
    delta: T,
    variant: TauVariant,
) -> Result<(T, bool)> {
    check_step(t)?;
    check_delta(delta)?;
    if !(v_hat > T::zero()) {
        return Err(Error::param("V_hat", "gradient variance must be positive"));
    }
    let factor = match variant {
        TauVariant::Lemma5 => T::lit(4.0),
        TauVariant::Theorem1 => T::lit(8.0),
    };
    let tt = T::from_usize_lossy(t);
    let tau = factor * T::PI() * T::from_usize_lossy(p) * tt * tt * (v_hat / delta).sqrt();
    Ok((tau, tau < T::one()))
}
