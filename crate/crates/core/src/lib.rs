//! Robust airport gate assignment.
//!
//! Fits delay laws to operations data, turns them into an expected gate
//! conflict duration as a function of planned separation, assigns flights
//! to gates with Tabu Search, and checks assignments by Monte Carlo
//! simulation. Passenger walking distance can be traded against robustness.

pub mod conflict;
pub mod delay_model;
pub mod error;
pub mod io;
pub mod manifest;
pub mod optimizer;
pub mod quadrature;
pub mod rng;
pub mod schedule;
pub mod simulator;
pub mod transit;

pub use conflict::{
    expected_conflict_duration_exact, expected_conflict_duration_fast, fit_conflict_curve, ConflictCurve, SeparationMinutes,
};
pub use delay_model::{fit_shifted_lognormal, fit_turn_model, DelayDistribution, TurnModel};
pub use error::{Error, Result};
pub use optimizer::{
    alpha_sweep, combined_objective, exhaustive_solve, greedy_assign, is_feasible, objective_robust, objective_transit,
    tabu_search, Assignment, SolverConfig,
};
pub use schedule::{gate_separation, generate_schedule, scale_traffic, Flight, Schedule, TransferMatrix};
pub use simulator::{separation_stats, simulate_many, simulate_run, DepartureModel, SimOutcome};
pub use transit::{make_horseshoe_ramp, make_parallel_ramp, RampConfig};
