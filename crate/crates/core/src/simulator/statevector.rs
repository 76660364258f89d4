use num_complex::Complex;

use crate::error::{Error, Result};
use crate::hamiltonian::ProblemHamiltonian;
use crate::scalar::Scalar;

/// Largest qubit count for statevector simulation.
pub const STATEVECTOR_QUBIT_LIMIT: usize = 24;

/// Pure state on `n` qubits; amplitude index `z` holds qubit `i` in bit `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    n: usize,
    amps: Vec<Complex<T>>,
}

/// `|+⟩^{⊗n}`.
pub fn plus_state<T: Scalar>(n: usize) -> Result<StateVector<T>> {
    if n == 0 || n > STATEVECTOR_QUBIT_LIMIT {
        return Err(Error::BudgetExceeded(format!(
            "statevector supports 1..={STATEVECTOR_QUBIT_LIMIT} qubits, got {n}"
        )));
    }
    let dim = 1usize << n;
    let a = T::one() / T::from_usize_lossy(dim).sqrt();
    Ok(StateVector {
        n,
        amps: vec![Complex::new(a, T::zero()); dim],
    })
}

impl<T: Scalar> StateVector<T> {
    pub fn from_amplitudes(amps: Vec<Complex<T>>) -> Result<Self> {
        let n = amps.len().trailing_zeros() as usize;
        if amps.len() != 1 << n || n == 0 {
            return Err(Error::param("amplitudes", "length must be 2^n with n >= 1"));
        }
        Ok(Self { n, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<T> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .fold(Complex::new(T::zero(), T::zero()), |s, x| s + x)
    }

    fn check_qubits(&self, h: &ProblemHamiltonian<T>) -> Result<()> {
        if h.num_qubits() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: h.num_qubits(),
            });
        }
        Ok(())
    }

    /// `exp(−iγH₁)`, applied as elementwise phases.
    pub fn apply_phase_separator(&mut self, h: &ProblemHamiltonian<T>, gamma: T) -> Result<()> {
        self.check_qubits(h)?;
        for (a, &e) in self.amps.iter_mut().zip(h.diagonal_values()?) {
            let phi = -gamma * e;
            *a *= Complex::new(phi.cos(), phi.sin());
        }
        Ok(())
    }

    /// `exp(−iβ Σ X_i) = Π_i (cos β I − i sin β X_i)`.
    pub fn apply_mixer(&mut self, beta: T) {
        let (s, c) = beta.sin_cos();
        let mis = Complex::new(T::zero(), -s);
        let c = Complex::new(c, T::zero());
        for q in 0..self.n {
            let bit = 1usize << q;
            for z in 0..self.amps.len() {
                if z & bit == 0 {
                    let a = self.amps[z];
                    let b = self.amps[z | bit];
                    self.amps[z] = c * a + mis * b;
                    self.amps[z | bit] = mis * a + c * b;
                }
            }
        }
    }

    /// `H₁|ψ⟩` (not normalized).
    pub fn apply_problem_operator(&self, h: &ProblemHamiltonian<T>) -> Result<Self> {
        self.check_qubits(h)?;
        let spec = h.diagonal_values()?;
        Ok(Self {
            n: self.n,
            amps: self.amps.iter().zip(spec).map(|(a, &e)| a * e).collect(),
        })
    }

    /// `H₂|ψ⟩ = Σ_i X_i|ψ⟩` (not normalized).
    pub fn apply_mixing_operator(&self) -> Self {
        let mut out = vec![Complex::new(T::zero(), T::zero()); self.amps.len()];
        for q in 0..self.n {
            let bit = 1usize << q;
            for (z, o) in out.iter_mut().enumerate() {
                *o += self.amps[z ^ bit];
            }
        }
        Self { n: self.n, amps: out }
    }

    /// `⟨ψ|H₁|ψ⟩`.
    pub fn expectation(&self, h: &ProblemHamiltonian<T>) -> Result<T> {
        self.check_qubits(h)?;
        Ok(self
            .amps
            .iter()
            .zip(h.diagonal_values()?)
            .map(|(a, &e)| a.norm_sqr() * e)
            .sum())
    }
}
