//! Exact (commutator) and finite-difference partial derivatives, and the
//! Monte-Carlo gradient-variance estimate that feeds the Lipschitz and
//! exploration-weight formulas.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{self, Stream};
use crate::scalar::{pairwise_sum, Scalar};
use crate::simulator::params::check_len;
use crate::simulator::{plus_state, Objective, QaoaObjective, StateVector};

/// Default central-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Fewest θ samples accepted by [`estimate_gradient_variance`].
pub const MIN_VARIANCE_SAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GradientMethod {
    Commutator,
    FiniteDifference,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradientEstimate<T> {
    pub values: Vec<T>,
    pub method: GradientMethod,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fd_step: Option<T>,
}

/// Anything that can produce a full gradient at a point.
pub trait GradientSource<T: Scalar>: Sync {
    fn num_params(&self) -> usize;
    fn gradient(&self, theta: &[T]) -> Result<GradientEstimate<T>>;
}

fn apply_block<T: Scalar>(
    psi: &mut StateVector<T>,
    obj: &QaoaObjective<T>,
    index: usize,
    angle: T,
) -> Result<()> {
    if index.is_multiple_of(2) {
        psi.apply_phase_separator(&obj.hamiltonian, angle)
    } else {
        psi.apply_mixer(angle);
        Ok(())
    }
}

/// `∂_j f(θ) = i⟨φ₀|U₋†[H_l, U₊†H₁U₊]U₋|φ₀⟩`, `j` zero-based.
///
/// Even `j` are γ angles (`H_l = H₁`), odd `j` are β angles (`H_l = H₂`).
pub fn exact_partial<T: Scalar>(obj: &QaoaObjective<T>, theta: &[T], j: usize) -> Result<T> {
    check_len(theta, obj.p)?;
    if j >= theta.len() {
        return Err(Error::param(
            "j",
            format!("coordinate {j} out of range for {} parameters", theta.len()),
        ));
    }
    let mut psi = plus_state(obj.hamiltonian.num_qubits())?;
    for (k, &a) in theta.iter().enumerate().take(j + 1) {
        apply_block(&mut psi, obj, k, a)?;
    }
    // χ = U₊† H₁ U₊ ψ
    let mut chi = psi.clone();
    for (k, &a) in theta.iter().enumerate().skip(j + 1) {
        apply_block(&mut chi, obj, k, a)?;
    }
    chi = chi.apply_problem_operator(&obj.hamiltonian)?;
    for (k, &a) in theta.iter().enumerate().skip(j + 1).rev() {
        apply_block(&mut chi, obj, k, -a)?;
    }
    let hl_psi = if j.is_multiple_of(2) {
        psi.apply_problem_operator(&obj.hamiltonian)?
    } else {
        psi.apply_mixing_operator()
    };
    let two = T::lit(2.0);
    Ok(-two * hl_psi.inner(&chi).im)
}

/// All `2p` exact partials.
pub fn exact_gradient<T: Scalar>(obj: &QaoaObjective<T>, theta: &[T]) -> Result<GradientEstimate<T>> {
    let values = (0..theta.len())
        .map(|j| exact_partial(obj, theta, j))
        .collect::<Result<_>>()?;
    Ok(GradientEstimate {
        values,
        method: GradientMethod::Commutator,
        fd_step: None,
    })
}

/// Central differences, `2 · dim` evaluations.
pub fn finite_difference_gradient<T: Scalar>(
    obj: &dyn Objective<T>,
    theta: &[T],
    step: T,
) -> Result<GradientEstimate<T>> {
    if !(step > T::zero()) {
        return Err(Error::param("h", "finite-difference step must be positive"));
    }
    let two = T::lit(2.0);
    let mut x = theta.to_vec();
    let mut values = Vec::with_capacity(theta.len());
    for j in 0..theta.len() {
        x[j] = theta[j] + step;
        let up = obj.evaluate(&x)?;
        x[j] = theta[j] - step;
        let down = obj.evaluate(&x)?;
        x[j] = theta[j];
        values.push((up - down) / (two * step));
    }
    Ok(GradientEstimate {
        values,
        method: GradientMethod::FiniteDifference,
        fd_step: Some(step),
    })
}

impl<T: Scalar> GradientSource<T> for QaoaObjective<T> {
    fn num_params(&self) -> usize {
        2 * self.p
    }

    fn gradient(&self, theta: &[T]) -> Result<GradientEstimate<T>> {
        exact_gradient(self, theta)
    }
}

/// Finite-difference gradients of an arbitrary objective.
pub struct FiniteDifference<'a, T> {
    pub objective: &'a dyn Objective<T>,
    pub step: T,
}

impl<'a, T: Scalar> FiniteDifference<'a, T> {
    pub fn new(objective: &'a dyn Objective<T>) -> Self {
        Self {
            objective,
            step: T::lit(DEFAULT_FD_STEP),
        }
    }
}

impl<T: Scalar> GradientSource<T> for FiniteDifference<'_, T> {
    fn num_params(&self) -> usize {
        self.objective.num_params()
    }

    fn gradient(&self, theta: &[T]) -> Result<GradientEstimate<T>> {
        finite_difference_gradient(self.objective, theta, self.step)
    }
}

/// Per-coordinate Monte-Carlo statistics of `∂_j f` under uniform θ.
///
/// The index `a` is the coordinate with the largest sample variance, a
/// computable stand-in for the coordinate with the largest supremum of
/// `|∂_j f|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceReport<T> {
    pub per_coordinate_variance: Vec<T>,
    pub a: usize,
    #[serde(rename = "V_hat")]
    pub v_hat: T,
    pub sample_count: usize,
    pub mean_per_coordinate: Vec<T>,
    pub seed: u64,
}

impl<T: Scalar> VarianceReport<T> {
    /// Standard error of each coordinate's sample mean.
    pub fn standard_errors(&self) -> Vec<T> {
        let n = T::from_usize_lossy(self.sample_count);
        self.per_coordinate_variance
            .iter()
            .map(|&v| (v / n).sqrt())
            .collect()
    }
}

/// Samples `samples` points uniformly from `[0, 2π)^{dim}` and summarizes
/// the gradient distribution. Deterministic per seed regardless of thread
/// count.
pub fn estimate_gradient_variance<T: Scalar>(
    source: &dyn GradientSource<T>,
    samples: usize,
    seed: u64,
) -> Result<VarianceReport<T>> {
    if samples < MIN_VARIANCE_SAMPLES {
        return Err(Error::param(
            "N",
            format!("need at least {MIN_VARIANCE_SAMPLES} samples, got {samples}"),
        ));
    }
    let dim = source.num_params();
    let mut rng = rng::substream(seed, Stream::GradientSamples);
    let points: Vec<Vec<T>> = (0..samples).map(|_| rng::uniform_angles(&mut rng, dim)).collect();
    let grads: Vec<Vec<T>> = points
        .par_iter()
        .map(|t| source.gradient(t).map(|g| g.values))
        .collect::<Result<_>>()?;

    let n = T::from_usize_lossy(samples);
    let mut means = Vec::with_capacity(dim);
    let mut vars = Vec::with_capacity(dim);
    for j in 0..dim {
        let col: Vec<T> = grads.iter().map(|g| g[j]).collect();
        let mean = pairwise_sum(&col) / n;
        let sq: Vec<T> = col.iter().map(|&x| (x - mean) * (x - mean)).collect();
        means.push(mean);
        vars.push(pairwise_sum(&sq) / (n - T::one()));
    }
    let a = vars
        .iter()
        .enumerate()
        .fold(0, |best, (j, &v)| if v > vars[best] { j } else { best });
    Ok(VarianceReport {
        v_hat: vars[a],
        per_coordinate_variance: vars,
        a,
        sample_count: samples,
        mean_per_coordinate: means,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;
    use std::sync::Arc;

    use super::*;
    use rand::Rng as _;
    use crate::graph::{ring_graph, Graph};
    use crate::hamiltonian::{maxcut_hamiltonian, PauliZString, ProblemHamiltonian};
    use crate::simulator::{FnObjective, NoisyQaoaObjective, PauliChannel};

    fn cycle4(p: usize) -> QaoaObjective<f64> {
        QaoaObjective::new(Arc::new(maxcut_hamiltonian(&ring_graph(4).unwrap()).unwrap()), p)
    }

    fn random_thetas(seed: u64, p: usize, count: usize) -> Vec<Vec<f64>> {
        let mut rng = rng::substream(seed, Stream::Custom(1));
        (0..count)
            .map(|_| (0..2 * p).map(|_| rng.random::<f64>() * 2.0 * PI).collect())
            .collect()
    }

    #[test]
    fn partials_vanish_at_origin() {
        let obj = cycle4(2);
        for j in 0..4 {
            assert!(exact_partial(&obj, &[0.0; 4], j).unwrap().abs() < 1e-12);
        }
        assert!(exact_partial(&obj, &[0.0; 4], 4).is_err());
    }

    #[test]
    fn commutator_matches_finite_differences() {
        for p in [1, 2] {
            let obj = cycle4(p);
            for t in random_thetas(p as u64, p, 20) {
                let fd = finite_difference_gradient(&obj, &t, 1e-5).unwrap();
                let ex = exact_gradient(&obj, &t).unwrap();
                for (a, b) in ex.values.iter().zip(&fd.values) {
                    assert!((a - b).abs() < 1e-6, "{a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn finite_difference_error_is_second_order() {
        let obj = cycle4(1);
        let t = [0.7, 1.9];
        let exact = exact_partial(&obj, &t, 0).unwrap();
        let err = |h: f64| (finite_difference_gradient(&obj, &t, h).unwrap().values[0] - exact).abs();
        let ratio = err(1e-2) / err(5e-3);
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn constant_objective_has_zero_gradient() {
        let obj = FnObjective::new(4, |_: &[f64]| 3.0);
        let g = finite_difference_gradient(&obj, &[0.1, 0.2, 0.3, 0.4], 1e-5).unwrap();
        assert!(g.values.iter().all(|v| v.abs() < 1e-9));
        assert_eq!(g.fd_step, Some(1e-5));
        assert!(finite_difference_gradient(&obj, &[0.0; 4], 0.0).is_err());
        let rep = estimate_gradient_variance(&FiniteDifference::new(&obj), 100, 1).unwrap();
        assert!(rep.per_coordinate_variance.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn single_qubit_z_on_plus_has_zero_variance() {
        // ⟨+|e^{iθZ} Z e^{-iθZ}|+⟩ ≡ 0 for a single phase layer and β = 0.
        let h = Arc::new(ProblemHamiltonian::new(1, vec![PauliZString::new(1.0, vec![0])]).unwrap());
        let obj = FnObjective::new(2, move |t: &[f64]| {
            crate::simulator::noiseless_objective(&h, &[t[0], 0.0]).unwrap()
        });
        let rep = estimate_gradient_variance(&FiniteDifference::new(&obj), 200, 2).unwrap();
        assert!(rep.per_coordinate_variance.iter().all(|&v| v < 1e-18));
    }

    #[test]
    fn mean_gradient_is_statistically_zero() {
        let obj = cycle4(1);
        let rep = estimate_gradient_variance(&obj, 2000, 7).unwrap();
        for (m, se) in rep.mean_per_coordinate.iter().zip(rep.standard_errors()) {
            assert!(m.abs() <= 3.0 * se, "mean {m}, se {se}");
        }
        assert_eq!(rep.v_hat, rep.per_coordinate_variance[rep.a]);
    }

    #[test]
    fn variance_report_is_deterministic_and_serializes() {
        let obj = cycle4(1);
        let a = estimate_gradient_variance(&obj, 150, 3).unwrap();
        let b = estimate_gradient_variance(&obj, 150, 3).unwrap();
        assert_eq!(a, b);
        let json = serde_json::to_value(&a).unwrap();
        for key in ["per_coordinate_variance", "a", "V_hat", "sample_count", "mean_per_coordinate", "seed"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
        assert!(estimate_gradient_variance(&obj, 99, 3).is_err());
    }

    #[test]
    fn relabeling_qubits_keeps_variance_spectrum() {
        let g = Graph::new(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (1, 3)]).unwrap();
        let g2 = g.relabeled(&[3, 0, 4, 1, 2]).unwrap();
        let run = |g: &Graph| {
            let obj = QaoaObjective::new(Arc::new(maxcut_hamiltonian::<f64>(g).unwrap()), 1);
            estimate_gradient_variance(&obj, 400, 5).unwrap()
        };
        // same θ samples and a relabeling-invariant objective: identical up to round-off
        let (a, b) = (run(&g), run(&g2));
        for (x, y) in a.per_coordinate_variance.iter().zip(&b.per_coordinate_variance) {
            assert!((x - y).abs() < 1e-9 * x.max(1.0));
        }
    }

    #[test]
    fn noisy_gradient_approaches_noiseless() {
        let obj = cycle4(1);
        let noisy = NoisyQaoaObjective::new(obj.hamiltonian.clone(), 1, PauliChannel::symmetric(1e-6).unwrap());
        for t in random_thetas(9, 1, 5) {
            let a = exact_gradient(&obj, &t).unwrap();
            let b = finite_difference_gradient(&noisy, &t, 1e-5).unwrap();
            for (x, y) in a.values.iter().zip(&b.values) {
                assert!((x - y).abs() < 1e-3);
            }
        }
    }
}
