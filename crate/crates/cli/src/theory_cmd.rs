//! `theory` subcommand: closed-form calculators printed as JSON.

use clap::{Subcommand, ValueEnum};
use serde_json::{json, Value};

use qaoa_bo::bo::{discretization_tau, eta_theorem1, eta_theorem2, regret_bound_lemma11, TauVariant};
use qaoa_bo::gp::{max_information_gain_bound, Smoothness};
use qaoa_bo::theory::{
    default_depth_constants, effective_depth_noiseless, effective_depth_noisy, in_noise_band, lipschitz_noiseless,
    lipschitz_noisy, noise_band_upper, noiseless_depth_shape, noiseless_rate, noisy_depth_shape, NoisyLipschitzForm,
};

use crate::error::{config_err, CliResult};

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum LipschitzForm {
    Lemma2,
    Refined,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TauArg {
    Lemma5,
    Theorem1,
}

#[derive(Debug, Subcommand)]
pub enum TheoryCmd {
    /// √(V̂/δ)
    LipschitzNoiseless {
        #[arg(long)]
        v_hat: f64,
        #[arg(long)]
        delta: f64,
    },
    /// Deterministic Lipschitz constant under Pauli noise.
    LipschitzNoisy {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: f64,
        #[arg(long)]
        p: usize,
        #[arg(long, value_enum, default_value = "lemma2")]
        form: LipschitzForm,
        /// ‖H₁‖∞ for the refined form; defaults to nd/2.
        #[arg(long)]
        h_norm: Option<f64>,
        /// Problem-block depth for the refined form; defaults to d.
        #[arg(long)]
        d1: Option<usize>,
    },
    /// Largest noiseless depth whose regret rate stays below ε.
    DepthNoiseless {
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        nu: f64,
        #[arg(long = "T")]
        t: usize,
    },
    /// Noisy depth limit; c1 = c2 default from T when not given.
    DepthNoisy {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        q: f64,
        #[arg(long)]
        c1: Option<f64>,
        #[arg(long)]
        c2: Option<f64>,
        #[arg(long = "T")]
        t: Option<usize>,
        /// Degree k of the lower band end n^{-k}.
        #[arg(long, default_value_t = 2.0)]
        poly_degree: f64,
    },
    /// Admissible noise band for n vertices.
    NoiseBand {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2.0)]
        poly_degree: f64,
    },
    /// Asymptotic depth scalings √(log n) and log n / log(1/q), unit constants.
    DepthShapes {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: f64,
    },
    EtaTheorem1 {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        v_hat: f64,
    },
    EtaTheorem2 {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: f64,
    },
    /// Discretization degree τ_t.
    Tau {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        v_hat: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, value_enum, default_value = "lemma5")]
        variant: TauArg,
    },
    /// Average-regret bound from T, η_T, g_T and M.
    RegretBound {
        #[arg(long = "T")]
        t: usize,
        #[arg(long)]
        eta: f64,
        #[arg(long)]
        gain: f64,
        #[arg(long = "M")]
        m: u64,
    },
    /// Order-of-magnitude bound on the maximum information gain.
    GainBound {
        #[arg(long = "T")]
        t: usize,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        nu: f64,
    },
}

pub fn cmd_theory(cmd: &TheoryCmd) -> CliResult<Value> {
    Ok(match *cmd {
        TheoryCmd::LipschitzNoiseless { v_hat, delta } => json!({
            "calculator": "lipschitz-noiseless",
            "inputs": { "v_hat": v_hat, "delta": delta },
            "value": lipschitz_noiseless(v_hat, delta)?,
            "bound_kind": "probabilistic",
        }),
        TheoryCmd::LipschitzNoisy { d, n, q, p, form, h_norm, d1 } => {
            let f = match form {
                LipschitzForm::Lemma2 => NoisyLipschitzForm::Lemma2,
                LipschitzForm::Refined => NoisyLipschitzForm::Refined { h_norm, block_depth: d1 },
            };
            json!({
                "calculator": "lipschitz-noisy",
                "inputs": { "d": d, "n": n, "q": q, "p": p, "form": f },
                "value": lipschitz_noisy(d, n, q, p, f)?,
                "bound_kind": "deterministic",
            })
        }
        TheoryCmd::DepthNoiseless { epsilon, nu, t } => {
            let v = effective_depth_noiseless(epsilon, nu, t)?;
            let p = v.floor() as usize;
            json!({
                "calculator": "depth-noiseless",
                "inputs": { "epsilon": epsilon, "nu": nu, "T": t },
                "value": v,
                "p_floor": p,
                "rate_at_p_floor": noiseless_rate(p, nu, t),
            })
        }
        TheoryCmd::DepthNoisy { n, d, q, c1, c2, t, poly_degree } => {
            let (c1, c2, defaulted) = match (c1, c2, t) {
                (Some(a), Some(b), _) => (a, b, false),
                (None, None, Some(t)) => {
                    let (a, b) = default_depth_constants(n, t)?;
                    (a, b, true)
                }
                _ => return Err(config_err("depth-noisy: give both --c1 and --c2, or --T for the defaults")),
            };
            json!({
                "calculator": "depth-noisy",
                "inputs": { "n": n, "d": d, "q": q, "T": t },
                "c1": c1,
                "c2": c2,
                "constants_defaulted": defaulted,
                "value": effective_depth_noisy(n, d, q, c1, c2)?,
                "band_upper": noise_band_upper::<f64>(n),
                "in_band": in_noise_band(n, q, poly_degree),
            })
        }
        TheoryCmd::NoiseBand { n, poly_degree } => {
            if n < 2 {
                return Err(config_err("noise-band: need n ≥ 2"));
            }
            json!({
                "calculator": "noise-band",
                "inputs": { "n": n, "poly_degree": poly_degree },
                "lower": (n as f64).powf(-poly_degree),
                "upper": noise_band_upper::<f64>(n),
            })
        }
        TheoryCmd::DepthShapes { n, q } => json!({
            "calculator": "depth-shapes",
            "inputs": { "n": n, "q": q },
            "noiseless_sqrt_log_n": noiseless_depth_shape(n),
            "noisy_log_n_over_log_inv_q": noisy_depth_shape(n, q)?,
        }),
        TheoryCmd::EtaTheorem1 { t, delta, p, v_hat } => {
            let e = eta_theorem1(t, delta, p, v_hat)?;
            json!({
                "calculator": "eta-theorem1",
                "inputs": { "t": t, "delta": delta, "p": p, "v_hat": v_hat },
                "value": e.value,
                "clamped": e.clamped,
            })
        }
        TheoryCmd::EtaTheorem2 { t, delta, p, d, n, q } => {
            let e = eta_theorem2(t, delta, p, d, n, q)?;
            json!({
                "calculator": "eta-theorem2",
                "inputs": { "t": t, "delta": delta, "p": p, "d": d, "n": n, "q": q },
                "value": e.value,
                "clamped": e.clamped,
            })
        }
        TheoryCmd::Tau { t, p, v_hat, delta, variant } => {
            let v = match variant {
                TauArg::Lemma5 => TauVariant::Lemma5,
                TauArg::Theorem1 => TauVariant::Theorem1,
            };
            let (tau, below) = discretization_tau(t, p, v_hat, delta, v)?;
            json!({
                "calculator": "tau",
                "inputs": { "t": t, "p": p, "v_hat": v_hat, "delta": delta, "variant": v },
                "value": tau,
                "below_one": below,
            })
        }
        TheoryCmd::RegretBound { t, eta, gain, m } => json!({
            "calculator": "regret-bound",
            "inputs": { "T": t, "eta": eta, "gain": gain, "M": m },
            "value": regret_bound_lemma11(t, eta, gain, m)?,
        }),
        TheoryCmd::GainBound { t, p, nu } => json!({
            "calculator": "gain-bound",
            "inputs": { "T": t, "p": p, "nu": nu },
            "value": max_information_gain_bound::<f64>(t, p, Smoothness::from_value(nu)?)?,
        }),
    })
}
