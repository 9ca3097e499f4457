//! Monte Carlo evaluation of a gate assignment.
//!
//! Each run draws an arrival delay for every flight, then walks each gate in
//! scheduled arrival order. An aircraft that finds its gate occupied waits
//! for the occupant to leave; the wait is a conflict. Departures follow from
//! the (possibly pushed) arrival through the turn model, so conflicts can
//! cascade down a gate.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::delay_model::{DelayDistribution, TurnModel};
use crate::error::{Error, Result};
use crate::optimizer::{check_total, Assignment};
use crate::rng;
use crate::schedule::Schedule;

/// How departure times are produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DepartureModel {
    /// Delay propagated from the effective arrival. With `draw_residual`
    /// off the residual is zero.
    Turn { model: TurnModel, draw_residual: bool },
    /// Departure delay drawn independently of the arrival.
    Independent(DelayDistribution),
}

impl DepartureModel {
    pub fn turn(model: TurnModel) -> Self {
        DepartureModel::Turn {
            model,
            draw_residual: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunOutcome {
    pub total_conflict_minutes: f64,
    pub conflict_count: usize,
}

/// Realized times of one run, indexed like the schedule's flights.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub nominal_arr: Vec<f64>,
    pub effective_arr: Vec<f64>,
    pub actual_dep: Vec<f64>,
    pub outcome: RunOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimOutcome {
    pub flights: usize,
    pub runs: Vec<RunOutcome>,
    pub mean_conflict_minutes: f64,
    pub std_conflict_minutes: f64,
    pub mean_conflict_count: f64,
    pub std_conflict_count: f64,
    /// Mean minutes and count divided by the number of flights.
    pub minutes_per_aircraft: f64,
    pub conflicts_per_aircraft: f64,
    /// Scheduled separations of consecutive flights, per gate.
    pub gate_separations: Vec<Vec<f64>>,
}

impl SimOutcome {
    /// Standard error of the mean conflict minutes.
    pub fn stderr_conflict_minutes(&self) -> f64 {
        self.std_conflict_minutes / (self.runs.len() as f64).sqrt()
    }
}

/// One simulated day.
pub fn simulate_run(
    schedule: &Schedule,
    assignment: &Assignment,
    arr_dist: &DelayDistribution,
    departures: &DepartureModel,
    seed: u64,
) -> Result<RunOutcome> {
    Ok(simulate_trace(schedule, assignment, arr_dist, departures, seed)?.outcome)
}

/// [`simulate_run`] keeping every realized time.
pub fn simulate_trace(
    schedule: &Schedule,
    assignment: &Assignment,
    arr_dist: &DelayDistribution,
    departures: &DepartureModel,
    seed: u64,
) -> Result<RunTrace> {
    check_total(schedule, assignment)?;
    let by_gate = assignment.flights_by_gate(schedule);
    simulate_prepared(schedule, &by_gate, arr_dist, departures, seed)
}

fn simulate_prepared(
    schedule: &Schedule,
    by_gate: &[Vec<usize>],
    arr_dist: &DelayDistribution,
    departures: &DepartureModel,
    seed: u64,
) -> Result<RunTrace> {
    arr_dist.validate()?;
    let n = schedule.len();
    let mut rng = rng::stream(seed, rng::stage::SIMULATION);

    // Draws happen in flight index order regardless of the assignment, so
    // two assignments simulated with one seed see the same delays.
    let mut arr_delay = Vec::with_capacity(n);
    let mut dep_draw = Vec::with_capacity(n);
    for _ in 0..n {
        arr_delay.push(arr_dist.sample(&mut rng).value);
        dep_draw.push(match departures {
            DepartureModel::Turn { model, draw_residual: true } => model.sample_residual(&mut rng),
            DepartureModel::Turn { draw_residual: false, .. } => 0.0,
            DepartureModel::Independent(d) => d.sample(&mut rng).value,
        });
    }

    let mut nominal_arr = vec![0.0; n];
    let mut effective_arr = vec![0.0; n];
    let mut actual_dep = vec![0.0; n];
    let mut outcome = RunOutcome {
        total_conflict_minutes: 0.0,
        conflict_count: 0,
    };
    for members in by_gate {
        let mut occupied_until: Option<f64> = None;
        for &i in members {
            let f = schedule.flight(i);
            let nominal = f.sched_arr + arr_delay[i];
            let mut effective = nominal;
            if let Some(leave) = occupied_until {
                if leave > nominal {
                    outcome.conflict_count += 1;
                    outcome.total_conflict_minutes += leave - nominal;
                    effective = leave;
                }
            }
            let dep = match departures {
                DepartureModel::Turn { model, .. } => f.sched_dep + model.propagate_delay(f.sched_dep, effective, dep_draw[i]),
                DepartureModel::Independent(_) => f.sched_dep + dep_draw[i],
            };
            // An aircraft cannot leave before it has parked.
            let dep = dep.max(effective);
            nominal_arr[i] = nominal;
            effective_arr[i] = effective;
            actual_dep[i] = dep;
            occupied_until = Some(dep);
        }
    }
    Ok(RunTrace {
        nominal_arr,
        effective_arr,
        actual_dep,
        outcome,
    })
}

/// Runs `runs` independent days; run `r` uses `derive_seed(seed, r)`.
pub fn simulate_many(
    schedule: &Schedule,
    assignment: &Assignment,
    arr_dist: &DelayDistribution,
    departures: &DepartureModel,
    runs: usize,
    seed: u64,
) -> Result<SimOutcome> {
    if runs == 0 {
        return Err(Error::InvalidParameter("at least one run is required".into()));
    }
    check_total(schedule, assignment)?;
    let by_gate = assignment.flights_by_gate(schedule);
    let records: Vec<RunOutcome> = (0..runs)
        .into_par_iter()
        .map(|r| {
            simulate_prepared(schedule, &by_gate, arr_dist, departures, rng::derive_seed(seed, r as u64)).map(|t| t.outcome)
        })
        .collect::<Result<_>>()?;

    let minutes: Vec<f64> = records.iter().map(|r| r.total_conflict_minutes).collect();
    let counts: Vec<f64> = records.iter().map(|r| r.conflict_count as f64).collect();
    let (mean_m, std_m) = mean_std(&minutes);
    let (mean_c, std_c) = mean_std(&counts);
    let per = schedule.len().max(1) as f64;
    let gate_separations = by_gate
        .iter()
        .map(|members| members.windows(2).map(|w| schedule.separation(w[0], w[1])).collect())
        .collect();
    Ok(SimOutcome {
        flights: schedule.len(),
        runs: records,
        mean_conflict_minutes: mean_m,
        std_conflict_minutes: std_m,
        mean_conflict_count: mean_c,
        std_conflict_count: std_c,
        minutes_per_aircraft: mean_m / per,
        conflicts_per_aircraft: mean_c / per,
        gate_separations,
    })
}

/// Sample mean and standard deviation (zero for a single value).
fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparationStats {
    pub pairs: usize,
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
}

/// Statistics of scheduled separations between consecutive flights on each
/// gate. All fields are zero when no gate holds two flights.
pub fn separation_stats(schedule: &Schedule, assignment: &Assignment) -> Result<SeparationStats> {
    check_total(schedule, assignment)?;
    let seps: Vec<f64> = assignment
        .flights_by_gate(schedule)
        .iter()
        .flat_map(|m| m.windows(2).map(|w| schedule.separation(w[0], w[1])).collect::<Vec<_>>())
        .collect();
    if seps.is_empty() {
        return Ok(SeparationStats {
            pairs: 0,
            mean: 0.0,
            std: 0.0,
        });
    }
    let n = seps.len() as f64;
    let mean = seps.iter().sum::<f64>() / n;
    let std = (seps.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / n).sqrt();
    Ok(SeparationStats {
        pairs: seps.len(),
        mean,
        std,
    })
}
