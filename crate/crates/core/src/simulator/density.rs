use num_complex::Complex;

use super::channel::PauliChannel;
use crate::error::{Error, Result};
use crate::hamiltonian::ProblemHamiltonian;
use crate::scalar::Scalar;

/// Largest qubit count for density-matrix simulation.
pub const DENSITY_QUBIT_LIMIT: usize = 12;

/// Dense `2^n × 2^n` density matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T> {
    n: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Scalar> DensityMatrix<T> {
    /// `(|+⟩⟨+|)^{⊗n}`: every entry equals `2^{-n}`.
    pub fn plus(n: usize) -> Result<Self> {
        check_budget(n)?;
        let dim = 1usize << n;
        let v = T::one() / T::from_usize_lossy(dim);
        Ok(Self {
            n,
            entries: vec![Complex::new(v, T::zero()); dim * dim],
        })
    }

    pub fn from_pure(amps: &[Complex<T>]) -> Result<Self> {
        let n = amps.len().trailing_zeros() as usize;
        if amps.len() != 1 << n || n == 0 {
            return Err(Error::param("amplitudes", "length must be 2^n with n >= 1"));
        }
        check_budget(n)?;
        let entries = amps
            .iter()
            .flat_map(|a| amps.iter().map(move |b| a * b.conj()))
            .collect();
        Ok(Self { n, entries })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn get(&self, r: usize, c: usize) -> Complex<T> {
        self.entries[r * self.dim() + c]
    }

    pub fn trace(&self) -> Complex<T> {
        let d = self.dim();
        (0..d).fold(Complex::new(T::zero(), T::zero()), |s, i| s + self.entries[i * d + i])
    }

    /// `max |ρ − ρ†|` over entries.
    pub fn hermiticity_defect(&self) -> T {
        let d = self.dim();
        let mut worst = T::zero();
        for r in 0..d {
            for c in r..d {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    pub fn diagonal(&self) -> Vec<T> {
        let d = self.dim();
        (0..d).map(|i| self.entries[i * d + i].re).collect()
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

    /// `ρ ↦ U ρ U†` with `U = exp(−iγH₁)` diagonal.
    pub fn apply_phase_separator(&mut self, h: &ProblemHamiltonian<T>, gamma: T) -> Result<()> {
        self.check_qubits(h)?;
        let spec = h.diagonal_values()?;
        let d = self.dim();
        let phases: Vec<Complex<T>> = spec
            .iter()
            .map(|&e| {
                let phi = -gamma * e;
                Complex::new(phi.cos(), phi.sin())
            })
            .collect();
        for r in 0..d {
            let pr = phases[r];
            let row = &mut self.entries[r * d..(r + 1) * d];
            for (x, pc) in row.iter_mut().zip(&phases) {
                *x = *x * pr * pc.conj();
            }
        }
        Ok(())
    }

    /// `ρ ↦ U ρ U†` with `U = Π_i exp(−iβX_i)`.
    pub fn apply_mixer(&mut self, beta: T) {
        let (s, c) = beta.sin_cos();
        let c = Complex::new(c, T::zero());
        let mis = Complex::new(T::zero(), -s);
        let is = Complex::new(T::zero(), s);
        let d = self.dim();
        for q in 0..self.n {
            let bit = 1usize << q;
            // rows: U ρ
            for r in 0..d {
                if r & bit != 0 {
                    continue;
                }
                let r2 = r | bit;
                for col in 0..d {
                    let a = self.entries[r * d + col];
                    let b = self.entries[r2 * d + col];
                    self.entries[r * d + col] = c * a + mis * b;
                    self.entries[r2 * d + col] = mis * a + c * b;
                }
            }
            // columns: ρ U†
            for r in 0..d {
                let row = &mut self.entries[r * d..(r + 1) * d];
                for col in 0..d {
                    if col & bit != 0 {
                        continue;
                    }
                    let a = row[col];
                    let b = row[col | bit];
                    row[col] = a * c + b * is;
                    row[col | bit] = a * is + b * c;
                }
            }
        }
    }

    /// Applies the same Pauli channel independently to every qubit.
    pub fn apply_pauli_channel_layer(&mut self, ch: &PauliChannel<T>) {
        let d = self.dim();
        let (qi, qx, qy, qz) = (ch.q_i, ch.q_x, ch.q_y, ch.q_z);
        for q in 0..self.n {
            let bit = 1usize << q;
            for r in 0..d {
                for col in 0..d {
                    // visit each {(r,c), (r^bit, c^bit)} orbit once
                    if r & bit != 0 {
                        continue;
                    }
                    let (r2, c2) = (r | bit, col ^ bit);
                    let a = self.entries[r * d + col];
                    let b = self.entries[r2 * d + c2];
                    // Z and Y pick up (-1)^{r_q + c_q}
                    let same = col & bit == 0;
                    let (za, ya) = if same { (qz, qy) } else { (-qz, -qy) };
                    self.entries[r * d + col] = a * (qi + za) + b * (qx + ya);
                    self.entries[r2 * d + c2] = b * (qi + za) + a * (qx + ya);
                }
            }
        }
    }

    /// `Tr[H₁ ρ]`.
    pub fn expectation(&self, h: &ProblemHamiltonian<T>) -> Result<T> {
        self.check_qubits(h)?;
        Ok(self
            .diagonal()
            .iter()
            .zip(h.diagonal_values()?)
            .map(|(&p, &e)| p * e)
            .sum())
    }
}

/// Free-function form of [`DensityMatrix::apply_pauli_channel_layer`].
pub fn apply_pauli_channel_layer<T: Scalar>(
    mut rho: DensityMatrix<T>,
    ch: &PauliChannel<T>,
) -> DensityMatrix<T> {
    rho.apply_pauli_channel_layer(ch);
    rho
}

fn check_budget(n: usize) -> Result<()> {
    if n == 0 || n > DENSITY_QUBIT_LIMIT {
        return Err(Error::BudgetExceeded(format!(
            "density matrix supports 1..={DENSITY_QUBIT_LIMIT} qubits, got {n}"
        )));
    }
    Ok(())
}
