//! Gaussian-process UCB optimization of QAOA parameters.

pub mod acquisition;
pub mod config;
pub mod eta;
pub mod export;
pub mod regret;
pub mod run;


pub use acquisition::{grid_argmax, select_next, GRID_POINT_BUDGET};
pub use config::{BoConfig, EtaSchedule, GridMode};
pub use eta::{discretization_tau, eta_sqrt_log, eta_theorem1, eta_theorem2, ucb, Eta, TauVariant};
pub use export::{trace_csv_rows, trace_from_json, trace_to_csv, trace_to_csv_annotated, trace_to_json};
pub use regret::{
    bo_information_gain, cumulative_gain, optimization_error, regret_bound_lemma11, trace_information_gain,
};
pub use run::{run_bo, BoTrace, StepRecord};
