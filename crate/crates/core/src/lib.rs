//! QAOA objective simulation, Matérn Gaussian-process UCB optimization,
//! and closed-form trainability bounds.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases at
//! the crate root fix `f64`, which is what the CLI and tests use.

// NaN-rejecting checks are written as `!(x > 0)` on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod gp;
pub mod gradient;
pub mod graph;
pub mod hamiltonian;
pub mod landscape;
pub mod linalg;
pub mod rng;
pub mod scalar;
pub mod simulator;
pub mod theory;
pub mod bo;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Hamiltonian = hamiltonian::ProblemHamiltonian<f64>;
pub type Params = simulator::ParamVector<f64>;
pub type Channel = simulator::PauliChannel<f64>;
pub type Kernel = gp::MaternKernel<f64>;
pub type Gp = gp::GpPosterior<f64>;
pub type Trace = bo::BoTrace<f64>;
pub type LipschitzReport = theory::LipschitzReport<f64>;
