use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{wrap_angle, Scalar};

/// QAOA angles `(γ₁, β₁, …, γ_p, β_p)`, each reduced into `[0, 2π)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParamVector<T> {
    values: Vec<T>,
}

impl<T: Scalar> ParamVector<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.is_empty() || !values.len().is_multiple_of(2) {
            return Err(Error::param(
                "theta",
                format!("expected 2p > 0 entries, got {}", values.len()),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("theta", "entries must be finite"));
        }
        Ok(Self {
            values: values.into_iter().map(wrap_angle).collect(),
        })
    }

    pub fn zeros(p: usize) -> Self {
        Self {
            values: vec![T::zero(); 2 * p],
        }
    }

    pub fn layers(&self) -> usize {
        self.values.len() / 2
    }

    pub fn as_slice(&self) -> &[T] {
        &self.values
    }

    pub fn into_vec(self) -> Vec<T> {
        self.values
    }
}

impl<T> AsRef<[T]> for ParamVector<T> {
    fn as_ref(&self) -> &[T] {
        &self.values
    }
}

/// Checks that `theta` has `2p` entries.
pub(crate) fn check_len<T>(theta: &[T], p: usize) -> Result<()> {
    if theta.len() != 2 * p {
        return Err(Error::DimensionMismatch {
            expected: 2 * p,
            got: theta.len(),
        });
    }
    Ok(())
}
