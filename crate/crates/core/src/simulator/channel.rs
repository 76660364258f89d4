use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Single-qubit Pauli channel `ρ ↦ Σ_P q(P) PρP`, shared by every qubit and
/// every layer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PauliChannel<T> {
    pub q_i: T,
    pub q_x: T,
    pub q_y: T,
    pub q_z: T,
    /// Set when some probability sits on the boundary 0 or 1. Such channels
    /// are limits used in tests, not physical noise models of interest.
    pub non_paper_regime: bool,
}

impl<T: Scalar> PauliChannel<T> {
    /// Validates `q(P) ∈ (0, 1)` and `Σ q(P) = 1` within 1e-12.
    pub fn new(q_i: T, q_x: T, q_y: T, q_z: T) -> Result<Self> {
        let ch = Self::degenerate(q_i, q_x, q_y, q_z)?;
        if ch.non_paper_regime {
            return Err(Error::param(
                "pauli channel",
                "every probability must lie strictly inside (0, 1)",
            ));
        }
        Ok(ch)
    }

    /// Like [`PauliChannel::new`] but admits probabilities of exactly 0 or 1,
    /// marking the result as outside the physical regime.
    pub fn degenerate(q_i: T, q_x: T, q_y: T, q_z: T) -> Result<Self> {
        let probs = [q_i, q_x, q_y, q_z];
        if probs.iter().any(|&q| !(q >= T::zero() && q <= T::one())) {
            return Err(Error::param("pauli channel", "probabilities must lie in [0, 1]"));
        }
        let sum: T = probs.iter().copied().sum();
        let tol = T::lit(1e-12).max(T::epsilon() * T::lit(8.0));
        if (sum - T::one()).abs() > tol {
            return Err(Error::param("pauli channel", format!("probabilities sum to {sum}, not 1")));
        }
        let non_paper_regime = probs.iter().any(|&q| q == T::zero() || q == T::one());
        Ok(Self {
            q_i,
            q_x,
            q_y,
            q_z,
            non_paper_regime,
        })
    }

    /// `q_X = q_Y = q_Z = q`, `q_I = 1 − 3q`.
    pub fn symmetric(q: T) -> Result<Self> {
        let three = T::lit(3.0);
        Self::new(T::one() - three * q, q, q, q)
    }

    pub fn identity() -> Self {
        Self::degenerate(T::one(), T::zero(), T::zero(), T::zero()).expect("identity channel is valid")
    }

    /// Noise strength `q = max(q_X, q_Y, q_Z)`.
    pub fn strength(&self) -> T {
        self.q_x.max(self.q_y).max(self.q_z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(PauliChannel::new(0.7, 0.1, 0.1, 0.1).is_ok());
        assert!(PauliChannel::new(0.7, 0.1, 0.1, 0.2).is_err());
        assert!(PauliChannel::new(1.0, 0.0, 0.0, 0.0).is_err());
        assert!(PauliChannel::<f64>::identity().non_paper_regime);
        assert!(PauliChannel::<f64>::symmetric(0.4).is_err());
        assert!(!PauliChannel::symmetric(0.25).unwrap().non_paper_regime);
    }

    #[test]
    fn strength_is_max_nonidentity() {
        let ch = PauliChannel::new(0.6, 0.05, 0.3, 0.05).unwrap();
        assert_eq!(ch.strength(), 0.3);
    }
}
