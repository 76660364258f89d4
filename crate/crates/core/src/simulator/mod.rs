//! Exact statevector and density-matrix simulation of QAOA circuits.

mod channel;
mod density;
mod estimator;
mod objective;
pub(crate) mod params;
mod statevector;

pub use channel::PauliChannel;
pub use density::{apply_pauli_channel_layer, DensityMatrix, DENSITY_QUBIT_LIMIT};
pub use estimator::{sample_objective, Estimator, EstimatorMode};
pub use objective::{noiseless_objective, noisy_objective, FnObjective, NoisyQaoaObjective, Objective, QaoaObjective};
pub use params::ParamVector;
pub use statevector::{plus_state, StateVector, STATEVECTOR_QUBIT_LIMIT};

#[cfg(test)]
mod tests;
