//! Diagonal problem Hamiltonians built from {I, Z} Pauli strings, and the
//! transverse-field mixer.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::Scalar;

/// Largest qubit count whose spectrum may be materialized.
pub const SPECTRUM_QUBIT_LIMIT: usize = 24;

/// `coefficient * Π_{i ∈ support} Z_i`. An empty support is the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliZString<T> {
    pub coefficient: T,
    pub support: Vec<usize>,
}

impl<T: Scalar> PauliZString<T> {
    pub fn new(coefficient: T, support: impl Into<Vec<usize>>) -> Self {
        Self {
            coefficient,
            support: support.into(),
        }
    }

    fn mask(&self) -> u64 {
        self.support.iter().fold(0, |m, &i| m | 1 << i)
    }
}

/// Diagonal Hamiltonian on `n` qubits.
///
/// Basis index `z` encodes qubit `i` in bit `i` of `z`; the eigenvalue of
/// `|z⟩` is `Σ_c γ_c Π_{i∈support_c} (-1)^{z_i}`.
#[derive(Debug)]
pub struct ProblemHamiltonian<T> {
    n: usize,
    terms: Vec<PauliZString<T>>,
    maxcut: Option<Graph>,
    spectrum: OnceLock<Vec<T>>,
}

impl<T: Scalar> Clone for ProblemHamiltonian<T> {
    fn clone(&self) -> Self {
        Self {
            n: self.n,
            terms: self.terms.clone(),
            maxcut: self.maxcut.clone(),
            spectrum: self.spectrum.clone(),
        }
    }
}

impl<T: Scalar> ProblemHamiltonian<T> {
    pub fn new(n: usize, terms: Vec<PauliZString<T>>) -> Result<Self> {
        if n == 0 || n > 63 {
            return Err(Error::param("n", format!("qubit count {n} outside 1..=63")));
        }
        for t in &terms {
            if let Some(&i) = t.support.iter().find(|&&i| i >= n) {
                return Err(Error::param("support", format!("qubit {i} out of range for n = {n}")));
            }
            if !t.coefficient.is_finite() {
                return Err(Error::param("coefficient", "must be finite"));
            }
        }
        Ok(Self {
            n,
            terms,
            maxcut: None,
            spectrum: OnceLock::new(),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[PauliZString<T>] {
        &self.terms
    }

    /// The graph this Hamiltonian was built from, if it is a MaxCut form.
    pub fn maxcut_graph(&self) -> Option<&Graph> {
        self.maxcut.as_ref()
    }

    /// Eigenvalue per computational basis state, computed once.
    pub fn diagonal_values(&self) -> Result<&[T]> {
        if self.n > SPECTRUM_QUBIT_LIMIT {
            return Err(Error::BudgetExceeded(format!(
                "spectrum of {} qubits exceeds the {SPECTRUM_QUBIT_LIMIT}-qubit budget",
                self.n
            )));
        }
        Ok(self.spectrum.get_or_init(|| self.compute_spectrum()))
    }

    fn compute_spectrum(&self) -> Vec<T> {
        let dim = 1usize << self.n;
        let mut spec = vec![T::zero(); dim];
        for term in &self.terms {
            let mask = term.mask();
            for (z, v) in spec.iter_mut().enumerate() {
                if (z as u64 & mask).count_ones().is_multiple_of(2) {
                    *v += term.coefficient;
                } else {
                    *v -= term.coefficient;
                }
            }
        }
        spec
    }

    /// `‖H‖_∞ = max_z |spectrum[z]|`.
    pub fn h_norm_inf(&self) -> Result<T> {
        Ok(self
            .diagonal_values()?
            .iter()
            .fold(T::zero(), |m, &v| m.max(v.abs())))
    }

    /// Number of edges when this is a MaxCut Hamiltonian.
    pub fn edge_count(&self) -> Option<usize> {
        self.maxcut.as_ref().map(Graph::num_edges)
    }
}

/// `H = ½ Σ_{(i,j)∈E} (I − Z_i Z_j)`: eigenvalue of `|z⟩` is the cut size.
pub fn maxcut_hamiltonian<T: Scalar>(g: &Graph) -> Result<ProblemHamiltonian<T>> {
    let half = T::lit(0.5);
    let mut terms = Vec::with_capacity(g.num_edges() + 1);
    terms.push(PauliZString::new(
        half * T::from_usize_lossy(g.num_edges()),
        Vec::new(),
    ));
    for &(a, b) in g.edges() {
        terms.push(PauliZString::new(-half, vec![a, b]));
    }
    let mut h = ProblemHamiltonian::new(g.num_vertices(), terms)?;
    h.maxcut = Some(g.clone());
    Ok(h)
}

/// Transverse field `H₂ = Σ_i X_i`; structure is fixed, only `n` varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MixingHamiltonian {
    pub n: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{brute_force_maxcut, random_regular_graph, ring_graph};

    #[test]
    fn single_z_spectrum() {
        let h = ProblemHamiltonian::new(1, vec![PauliZString::new(1.0, vec![0])]).unwrap();
        assert_eq!(h.diagonal_values().unwrap(), &[1.0, -1.0]);
        let neg = ProblemHamiltonian::new(1, vec![PauliZString::new(-3.0, vec![0])]).unwrap();
        assert_eq!(neg.h_norm_inf().unwrap(), 3.0);
    }

    #[test]
    fn identity_term_is_constant() {
        let h = ProblemHamiltonian::new(3, vec![PauliZString::new(2.5, vec![])]).unwrap();
        assert!(h.diagonal_values().unwrap().iter().all(|&v| v == 2.5));
    }

    #[test]
    fn maxcut_spectrum_counts_cut_edges() {
        let g = ring_graph(4).unwrap();
        let h = maxcut_hamiltonian::<f64>(&g).unwrap();
        let spec = h.diagonal_values().unwrap();
        for (z, &v) in spec.iter().enumerate() {
            let cut = g.cut_value(|i| (z >> i) & 1 == 1);
            assert_eq!(v, cut as f64);
        }
        assert_eq!(spec[0], 0.0);
        assert_eq!(spec[0b1010], 4.0);
        let mut sorted = spec.to_vec();
        sorted.sort_by(f64::total_cmp);
        assert_eq!(sorted, [0., 0., 2., 2., 2., 2., 2., 2., 2., 2., 2., 2., 2., 2., 4., 4.]);
        assert_eq!(h.h_norm_inf().unwrap(), 4.0);
    }

    #[test]
    fn norm_matches_bruteforce_on_cubic() {
        let g = random_regular_graph(8, 3, 11).unwrap();
        let h = maxcut_hamiltonian::<f64>(&g).unwrap();
        assert_eq!(h.h_norm_inf().unwrap() as usize, brute_force_maxcut(&g).unwrap().value);
    }

    #[test]
    fn spectrum_invariants() {
        let g = random_regular_graph(10, 3, 2).unwrap();
        let h = maxcut_hamiltonian::<f64>(&g).unwrap();
        let spec = h.diagonal_values().unwrap();
        let m = g.num_edges() as f64;
        let full = (1usize << 10) - 1;
        for (z, &v) in spec.iter().enumerate() {
            assert_eq!(v.fract(), 0.0);
            assert!((0.0..=m).contains(&v));
            assert_eq!(v, spec[z ^ full]);
        }
        let mean = spec.iter().sum::<f64>() / spec.len() as f64;
        assert!((mean - m / 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_support_and_budget() {
        assert!(ProblemHamiltonian::new(2, vec![PauliZString::new(1.0, vec![2])]).is_err());
        let big = ProblemHamiltonian::<f64>::new(25, vec![]).unwrap();
        assert!(matches!(big.diagonal_values(), Err(Error::BudgetExceeded(_))));
    }
}
