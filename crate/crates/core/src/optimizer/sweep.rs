use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{objective_robust, objective_transit, tabu_search, Assignment, SolverConfig, TransitInputs};
use crate::conflict::ConflictCurve;
use crate::error::{Error, Result};
use crate::rng;
use crate::schedule::{Schedule, TransferMatrix};
use crate::transit::RampConfig;

/// One solve of the combined objective.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub alpha: f64,
    /// Passenger-minutes of walking.
    pub transit: f64,
    /// Passenger-weighted conflict surrogate.
    pub robust: f64,
    /// `transit + robust`, unweighted by alpha.
    pub sum: f64,
    #[serde(skip)]
    pub assignment: Assignment,
}

/// Solves the combined problem once per alpha, in parallel. Solve `j` uses
/// the seed `derive_seed(config.seed, j)`; results keep the input order.
pub fn alpha_sweep(
    schedule: &Schedule,
    config: &SolverConfig,
    curve: &ConflictCurve,
    ramp: &RampConfig,
    transfers: &TransferMatrix,
    alphas: &[f64],
) -> Result<Vec<SweepPoint>> {
    if let Some(a) = alphas.iter().find(|a| !(0.0..=1.0).contains(*a)) {
        return Err(Error::InvalidParameter(format!("alpha {a} outside [0, 1]")));
    }
    alphas
        .par_iter()
        .enumerate()
        .map(|(j, &alpha)| {
            let cfg = SolverConfig {
                alpha,
                seed: rng::derive_seed(config.seed, j as u64),
                ..config.clone()
            };
            let out = tabu_search(schedule, &cfg, curve, Some(TransitInputs { ramp, transfers }))?;
            let transit = objective_transit(schedule, &out.assignment, ramp, transfers)?;
            let robust = objective_robust(schedule, &out.assignment, curve, true)?;
            Ok(SweepPoint {
                alpha,
                transit,
                robust,
                sum: transit + robust,
                assignment: out.assignment,
            })
        })
        .collect()
}
