use std::sync::Arc;

use super::channel::PauliChannel;
use super::density::DensityMatrix;
use super::params::check_len;
use super::statevector::{plus_state, StateVector};
use crate::error::{Error, Result};
use crate::hamiltonian::ProblemHamiltonian;
use crate::scalar::Scalar;

/// A real-valued function of `2p` circuit angles.
///
/// Implementations that describe a measured observable can also expose the
/// measurement distribution and per-outcome values, which enables
/// shot-based estimation.
pub trait Objective<T: Scalar>: Send + Sync {
    fn num_params(&self) -> usize;

    fn evaluate(&self, theta: &[T]) -> Result<T>;

    /// Computational-basis outcome probabilities at `theta`, if meaningful.
    fn basis_probabilities(&self, _theta: &[T]) -> Option<Result<Vec<T>>> {
        None
    }

    /// Observable value for each basis outcome, aligned with
    /// [`Objective::basis_probabilities`].
    fn outcome_values(&self) -> Option<Result<&[T]>> {
        None
    }
}

/// Noiseless QAOA objective `f(θ) = ⟨ψ(θ)|H₁|ψ(θ)⟩`.
#[derive(Debug, Clone)]
pub struct QaoaObjective<T> {
    pub hamiltonian: Arc<ProblemHamiltonian<T>>,
    pub p: usize,
}

impl<T: Scalar> QaoaObjective<T> {
    pub fn new(hamiltonian: Arc<ProblemHamiltonian<T>>, p: usize) -> Self {
        Self { hamiltonian, p }
    }

    /// `U(θ)|+⟩^{⊗n}`: phase separator then mixer, `p` times.
    pub fn final_state(&self, theta: &[T]) -> Result<StateVector<T>> {
        check_len(theta, self.p)?;
        let mut psi = plus_state(self.hamiltonian.num_qubits())?;
        for layer in theta.chunks_exact(2) {
            psi.apply_phase_separator(&self.hamiltonian, layer[0])?;
            psi.apply_mixer(layer[1]);
        }
        Ok(psi)
    }
}

impl<T: Scalar> Objective<T> for QaoaObjective<T> {
    fn num_params(&self) -> usize {
        2 * self.p
    }

    fn evaluate(&self, theta: &[T]) -> Result<T> {
        self.final_state(theta)?.expectation(&self.hamiltonian)
    }

    fn basis_probabilities(&self, theta: &[T]) -> Option<Result<Vec<T>>> {
        Some(self.final_state(theta).map(|s| s.probabilities()))
    }

    fn outcome_values(&self) -> Option<Result<&[T]>> {
        Some(self.hamiltonian.diagonal_values())
    }
}

/// Noisy QAOA objective `f̃_q(θ) = Tr[H₁ ρ(θ)]`, with the Pauli channel
/// layer applied after every unitary block.
#[derive(Debug, Clone)]
pub struct NoisyQaoaObjective<T> {
    pub hamiltonian: Arc<ProblemHamiltonian<T>>,
    pub p: usize,
    pub channel: PauliChannel<T>,
}

impl<T: Scalar> NoisyQaoaObjective<T> {
    pub fn new(hamiltonian: Arc<ProblemHamiltonian<T>>, p: usize, channel: PauliChannel<T>) -> Self {
        Self {
            hamiltonian,
            p,
            channel,
        }
    }

    pub fn final_state(&self, theta: &[T]) -> Result<DensityMatrix<T>> {
        check_len(theta, self.p)?;
        let mut rho = DensityMatrix::plus(self.hamiltonian.num_qubits())?;
        for layer in theta.chunks_exact(2) {
            rho.apply_phase_separator(&self.hamiltonian, layer[0])?;
            rho.apply_pauli_channel_layer(&self.channel);
            rho.apply_mixer(layer[1]);
            rho.apply_pauli_channel_layer(&self.channel);
        }
        Ok(rho)
    }
}

impl<T: Scalar> Objective<T> for NoisyQaoaObjective<T> {
    fn num_params(&self) -> usize {
        2 * self.p
    }

    fn evaluate(&self, theta: &[T]) -> Result<T> {
        self.final_state(theta)?.expectation(&self.hamiltonian)
    }

    fn basis_probabilities(&self, theta: &[T]) -> Option<Result<Vec<T>>> {
        Some(self.final_state(theta).map(|r| r.diagonal()))
    }

    fn outcome_values(&self) -> Option<Result<&[T]>> {
        Some(self.hamiltonian.diagonal_values())
    }
}

/// Wraps a plain closure as an objective.
pub struct FnObjective<F> {
    dim: usize,
    f: F,
}

impl<F> FnObjective<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<T, F> Objective<T> for FnObjective<F>
where
    T: Scalar,
    F: Fn(&[T]) -> T + Send + Sync,
{
    fn num_params(&self) -> usize {
        self.dim
    }

    fn evaluate(&self, theta: &[T]) -> Result<T> {
        if theta.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: theta.len(),
            });
        }
        Ok((self.f)(theta))
    }
}

pub fn noiseless_objective<T: Scalar>(h: &Arc<ProblemHamiltonian<T>>, theta: &[T]) -> Result<T> {
    QaoaObjective::new(h.clone(), theta.len() / 2).evaluate(theta)
}

pub fn noisy_objective<T: Scalar>(
    h: &Arc<ProblemHamiltonian<T>>,
    theta: &[T],
    ch: &PauliChannel<T>,
) -> Result<T> {
    NoisyQaoaObjective::new(h.clone(), theta.len() / 2, *ch).evaluate(theta)
}
