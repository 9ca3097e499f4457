//! Robust gate assignment.
//!
//! Flights on the same gate must be separated by at least the buffer time.
//! The robust objective sums the exponential conflict surrogate over every
//! same-gate pair; the transit objective totals passenger walking time; the
//! combined objective is their convex combination `(1 - α) T + α R`.

mod exhaustive;
mod greedy;
mod sweep;
mod tabu;

pub use exhaustive::{exhaustive_solve, Solution, MAX_ENUMERATION};
pub use greedy::{greedy_assign, min_gates_required, random_feasible_assign};
pub use sweep::{alpha_sweep, SweepPoint};
pub use tabu::{tabu_search, tabu_search_with, TabuOutcome};

use serde::{Deserialize, Serialize};

use crate::conflict::ConflictCurve;
use crate::error::{Error, Result};
use crate::schedule::{Schedule, TransferMatrix};
use crate::transit::RampConfig;

/// Default buffer between consecutive occupancies of a gate, in minutes.
pub const DEFAULT_BUFFER_MIN: f64 = 15.0;

/// Flight-to-gate map, indexed like the schedule's flights.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Assignment {
    gate_of: Vec<usize>,
}

impl Assignment {
    pub fn new(gate_of: Vec<usize>) -> Self {
        Assignment { gate_of }
    }

    pub fn gate_of(&self) -> &[usize] {
        &self.gate_of
    }

    pub fn gate(&self, flight: usize) -> usize {
        self.gate_of[flight]
    }

    pub fn len(&self) -> usize {
        self.gate_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gate_of.is_empty()
    }

    /// Number of distinct gates with at least one flight.
    pub fn gates_used(&self) -> usize {
        let mut gates: Vec<usize> = self.gate_of.clone();
        gates.sort_unstable();
        gates.dedup();
        gates.len()
    }

    /// Flight indices per gate, each list ordered by scheduled arrival.
    pub fn flights_by_gate(&self, schedule: &Schedule) -> Vec<Vec<usize>> {
        let gates = self.gate_of.iter().copied().max().map_or(0, |g| g + 1).max(schedule.gate_count());
        let mut by_gate = vec![Vec::new(); gates];
        for i in schedule.arrival_order() {
            by_gate[self.gate_of[i]].push(i);
        }
        by_gate
    }

    /// Renames gates through `perm` (old gate `g` becomes `perm[g]`).
    pub fn relabeled(&self, perm: &[usize]) -> Assignment {
        Assignment::new(self.gate_of.iter().map(|&g| perm[g]).collect())
    }
}

pub(crate) fn check_total(schedule: &Schedule, assignment: &Assignment) -> Result<()> {
    if assignment.len() != schedule.len() {
        return Err(Error::IncompleteAssignment(format!(
            "{} flights in schedule, {} in assignment",
            schedule.len(),
            assignment.len()
        )));
    }
    if let Some((i, &g)) = assignment.gate_of.iter().enumerate().find(|(_, &g)| g >= schedule.gate_count()) {
        return Err(Error::IncompleteAssignment(format!(
            "flight {} on gate {g}, but only {} gates exist",
            schedule.flight(i).id,
            schedule.gate_count()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Neighborhood {
    Move,
    Swap,
    Both,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub buffer_min: f64,
    /// `None` selects `7 + |F| / 50`.
    pub tabu_tenure: Option<usize>,
    pub max_iterations: usize,
    /// Stop after this many iterations without a new best.
    pub max_stall: usize,
    pub neighborhood: Neighborhood,
    pub seed: u64,
    pub alpha: f64,
    pub restarts: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            buffer_min: DEFAULT_BUFFER_MIN,
            tabu_tenure: None,
            max_iterations: 5000,
            max_stall: 500,
            neighborhood: Neighborhood::Both,
            seed: 0,
            alpha: 1.0,
            restarts: 1,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.buffer_min.is_finite() && self.buffer_min >= 0.0) {
            return Err(Error::InvalidParameter(format!("buffer {} must be >= 0", self.buffer_min)));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::InvalidParameter(format!("alpha {} outside [0, 1]", self.alpha)));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidParameter("at least one restart is required".into()));
        }
        Ok(())
    }

    pub fn tenure_for(&self, flights: usize) -> usize {
        self.tabu_tenure.unwrap_or(7 + flights / 50)
    }
}

/// A same-gate pair closer than the buffer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub first: usize,
    pub second: usize,
    pub gate: usize,
    pub separation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Feasibility {
    pub violations: Vec<Violation>,
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the buffer constraint on every same-gate pair.
pub fn is_feasible(schedule: &Schedule, assignment: &Assignment, buffer_min: f64) -> Result<Feasibility> {
    check_total(schedule, assignment)?;
    let mut violations = Vec::new();
    for (gate, members) in assignment.flights_by_gate(schedule).iter().enumerate() {
        for (a, &i) in members.iter().enumerate() {
            for &k in &members[a + 1..] {
                let separation = schedule.separation(i, k);
                if separation < buffer_min {
                    violations.push(Violation {
                        first: i,
                        second: k,
                        gate,
                        separation,
                    });
                }
            }
        }
    }
    Ok(Feasibility { violations })
}

/// Smallest separation between any two flights sharing a gate, if any do.
pub fn min_same_gate_separation(schedule: &Schedule, assignment: &Assignment) -> Option<f64> {
    let mut best: Option<f64> = None;
    for members in assignment.flights_by_gate(schedule) {
        for (a, &i) in members.iter().enumerate() {
            for &k in &members[a + 1..] {
                let s = schedule.separation(i, k);
                best = Some(best.map_or(s, |b: f64| b.min(s)));
            }
        }
    }
    best
}

/// Sum of `a * b^sep` over same-gate pairs, each term multiplied by the
/// arriving passengers of the later flight when `weighted`.
pub fn objective_robust(schedule: &Schedule, assignment: &Assignment, curve: &ConflictCurve, weighted: bool) -> Result<f64> {
    check_total(schedule, assignment)?;
    let mut total = 0.0;
    for members in assignment.flights_by_gate(schedule) {
        for (a, &i) in members.iter().enumerate() {
            for &k in &members[a + 1..] {
                let sep = schedule.separation(i, k);
                if sep < 0.0 {
                    return Err(Error::InfeasibleInput(format!(
                        "flights {} and {} overlap on one gate",
                        schedule.flight(i).id,
                        schedule.flight(k).id
                    )));
                }
                let weight = if weighted {
                    schedule.flight(schedule.follower(i, k)).pax_in as f64
                } else {
                    1.0
                };
                total += curve.expected_duration(sep) * weight;
            }
        }
    }
    Ok(total)
}

/// Passenger-minutes walked between terminal and gates and between gates
/// of connecting flights.
pub fn objective_transit(
    schedule: &Schedule,
    assignment: &Assignment,
    ramp: &RampConfig,
    transfers: &TransferMatrix,
) -> Result<f64> {
    check_total(schedule, assignment)?;
    if let Some(&g) = assignment.gate_of.iter().find(|&&g| g >= ramp.gate_count()) {
        return Err(Error::MissingGeometry {
            gate: g,
            ramp_gates: ramp.gate_count(),
        });
    }
    let v = ramp.walk_speed;
    let mut total = 0.0;
    for (i, f) in schedule.flights().iter().enumerate() {
        let j = assignment.gate(i);
        total += f.pax_origin as f64 * ramp.checkpoint_dist[j] / v + f.pax_dest as f64 * ramp.baggage_dist[j] / v;
    }
    for (i, k, pax) in transfers.iter() {
        if i >= schedule.len() || k >= schedule.len() {
            return Err(Error::InvalidParameter(format!("transfer references flight index {}", i.max(k))));
        }
        total += pax as f64 * ramp.gate_to_gate[assignment.gate(i)][assignment.gate(k)] / v;
    }
    Ok(total)
}

pub fn combined_objective(
    schedule: &Schedule,
    assignment: &Assignment,
    curve: &ConflictCurve,
    ramp: &RampConfig,
    transfers: &TransferMatrix,
    alpha: f64,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!("alpha {alpha} outside [0, 1]")));
    }
    let transit = objective_transit(schedule, assignment, ramp, transfers)?;
    let robust = objective_robust(schedule, assignment, curve, true)?;
    Ok((1.0 - alpha) * transit + alpha * robust)
}

/// Ramp and transfer data for the transit term.
#[derive(Debug, Clone, Copy)]
pub struct TransitInputs<'a> {
    pub ramp: &'a RampConfig,
    pub transfers: &'a TransferMatrix,
}

/// What a solver minimises.
#[derive(Debug, Clone, Copy)]
pub enum Objective<'a> {
    /// Sum of surrogate conflict durations, optionally passenger-weighted.
    Robust { curve: &'a ConflictCurve, weighted: bool },
    /// `(1 - alpha) * transit + alpha * weighted robust`.
    Combined {
        curve: &'a ConflictCurve,
        transit: TransitInputs<'a>,
        alpha: f64,
    },
}

impl Objective<'_> {
    pub fn evaluate(&self, schedule: &Schedule, assignment: &Assignment) -> Result<f64> {
        match *self {
            Objective::Robust { curve, weighted } => objective_robust(schedule, assignment, curve, weighted),
            Objective::Combined { curve, transit, alpha } => {
                combined_objective(schedule, assignment, curve, transit.ramp, transit.transfers, alpha)
            }
        }
    }
}
