//! Tabu Search over flight-to-gate assignments.
//!
//! The neighbourhood is every feasible single-flight gate move plus every
//! feasible swap of two flights on different gates. Infeasible neighbours
//! are never visited. Moving flight `i` off gate `g` forbids `i` from
//! returning to `g` for `tenure` iterations unless doing so beats the best
//! objective seen so far (aspiration).
//!
//! Move values are computed in O(1) from per-(flight, gate) accumulators:
//! the robust cost flight `i` would share with gate `j`'s occupants, the
//! number of occupants of `j` it is incompatible with, and its transfer
//! cost if it sat on `j`. Applying a move updates these in O(|F| + deg·|G|).

use rand::Rng;
use rayon::prelude::*;

use super::{check_total, greedy_assign, is_feasible, random_feasible_assign, Assignment, Neighborhood, Objective, SolverConfig, TransitInputs};
use crate::conflict::ConflictCurve;
use crate::error::{Error, Result};
use crate::rng;
use crate::schedule::Schedule;

#[derive(Debug, Clone, PartialEq)]
pub struct TabuOutcome {
    pub assignment: Assignment,
    pub objective: f64,
    /// Objective of the first restart's starting point (the greedy packing
    /// unless an explicit start was supplied).
    pub initial_objective: f64,
    /// Best objective after each iteration of the winning restart; entry 0
    /// is its starting value.
    pub trace: Vec<f64>,
    pub iterations: usize,
    pub restart_objectives: Vec<f64>,
}

/// Solves the robust problem when `transit` is `None` (unweighted conflict
/// sum) and the combined problem with `config.alpha` otherwise.
pub fn tabu_search(
    schedule: &Schedule,
    config: &SolverConfig,
    curve: &ConflictCurve,
    transit: Option<TransitInputs<'_>>,
) -> Result<TabuOutcome> {
    let objective = match transit {
        None => Objective::Robust { curve, weighted: false },
        Some(transit) => Objective::Combined {
            curve,
            transit,
            alpha: config.alpha,
        },
    };
    tabu_search_with(schedule, config, &objective, None)
}

/// Tabu Search on an arbitrary objective, optionally from a given feasible
/// start (used by the first restart instead of the greedy packing).
pub fn tabu_search_with(
    schedule: &Schedule,
    config: &SolverConfig,
    objective: &Objective<'_>,
    start: Option<&Assignment>,
) -> Result<TabuOutcome> {
    config.validate()?;
    let ev = Evaluator::new(schedule, objective, config.buffer_min)?;

    let first = match start {
        Some(a) => {
            check_total(schedule, a)?;
            if !is_feasible(schedule, a, config.buffer_min)?.is_feasible() {
                return Err(Error::NoFeasibleStart);
            }
            a.clone()
        }
        None => greedy_assign(schedule, config.buffer_min).map_err(|_| Error::NoFeasibleStart)?,
    };
    let initial_objective = ev.full(first.gate_of());

    let runs: Vec<Run> = (0..config.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng::stream(rng::derive_seed(config.seed, r as u64), rng::stage::SOLVER);
            let init = if r == 0 {
                first.clone()
            } else {
                random_feasible_assign(schedule, config.buffer_min, &mut rng).unwrap_or_else(|| first.clone())
            };
            search(&ev, init.gate_of().to_vec(), config, &mut rng)
        })
        .collect();

    let restart_objectives: Vec<f64> = runs.iter().map(|r| r.best_value).collect();
    let winner = runs
        .into_iter()
        .enumerate()
        .min_by(|a, b| a.1.best_value.total_cmp(&b.1.best_value).then(a.0.cmp(&b.0)))
        .map(|(_, r)| r)
        .expect("at least one restart");

    Ok(TabuOutcome {
        objective: ev.full(&winner.best),
        assignment: Assignment::new(winner.best),
        initial_objective,
        trace: winner.trace,
        iterations: winner.iterations,
        restart_objectives,
    })
}

/// Dense cost model of one instance.
struct Evaluator {
    n: usize,
    gates: usize,
    compatible: Vec<bool>,
    pair_cost: Vec<f64>,
    unary: Vec<f64>,
    transfer_cost: Vec<f64>,
    partners: Vec<Vec<(usize, f64)>>,
    dist: Vec<f64>,
}

impl Evaluator {
    fn new(schedule: &Schedule, objective: &Objective<'_>, buffer_min: f64) -> Result<Self> {
        let n = schedule.len();
        let gates = schedule.gate_count();
        let (curve, weighted, robust_scale) = match *objective {
            Objective::Robust { curve, weighted } => (curve, weighted, 1.0),
            Objective::Combined { curve, alpha, .. } => {
                if !(0.0..=1.0).contains(&alpha) {
                    return Err(Error::InvalidParameter(format!("alpha {alpha} outside [0, 1]")));
                }
                (curve, true, alpha)
            }
        };
        curve.validate()?;

        let mut compatible = vec![true; n * n];
        let mut pair_cost = vec![0.0; n * n];
        for i in 0..n {
            for k in (i + 1)..n {
                let sep = schedule.separation(i, k);
                let ok = sep >= buffer_min;
                compatible[i * n + k] = ok;
                compatible[k * n + i] = ok;
                let weight = if weighted {
                    schedule.flight(schedule.follower(i, k)).pax_in as f64
                } else {
                    1.0
                };
                let c = robust_scale * curve.expected_duration(sep) * weight;
                pair_cost[i * n + k] = c;
                pair_cost[k * n + i] = c;
            }
        }

        let mut unary = vec![0.0; n * gates];
        let mut transfer_cost = Vec::new();
        let mut partners = vec![Vec::new(); n];
        let mut dist = Vec::new();
        if let Objective::Combined {
            transit: TransitInputs { ramp, transfers },
            alpha,
            ..
        } = *objective
        {
            ramp.validate()?;
            if ramp.gate_count() < gates {
                return Err(Error::MissingGeometry {
                    gate: ramp.gate_count(),
                    ramp_gates: ramp.gate_count(),
                });
            }
            let scale = (1.0 - alpha) / ramp.walk_speed;
            for (i, f) in schedule.flights().iter().enumerate() {
                for j in 0..gates {
                    unary[i * gates + j] =
                        scale * (f.pax_origin as f64 * ramp.checkpoint_dist[j] + f.pax_dest as f64 * ramp.baggage_dist[j]);
                }
            }
            transfer_cost = vec![0.0; n * n];
            for (i, k, pax) in transfers.iter() {
                if i >= n || k >= n {
                    return Err(Error::InvalidParameter(format!("transfer references flight index {}", i.max(k))));
                }
                let c = scale * pax as f64;
                if c > 0.0 {
                    transfer_cost[i * n + k] = c;
                    transfer_cost[k * n + i] = c;
                    partners[i].push((k, c));
                    partners[k].push((i, c));
                }
            }
            dist = (0..gates * gates)
                .map(|jl| ramp.gate_to_gate[jl / gates][jl % gates])
                .collect();
        }

        Ok(Evaluator {
            n,
            gates,
            compatible,
            pair_cost,
            unary,
            transfer_cost,
            partners,
            dist,
        })
    }

    fn has_transfers(&self) -> bool {
        !self.dist.is_empty()
    }

    /// Objective of `gate_of` evaluated from scratch.
    fn full(&self, gate_of: &[usize]) -> f64 {
        let n = self.n;
        let mut total: f64 = (0..n).map(|i| self.unary[i * self.gates + gate_of[i]]).sum();
        for i in 0..n {
            for k in (i + 1)..n {
                if gate_of[i] == gate_of[k] {
                    total += self.pair_cost[i * n + k];
                }
                if self.has_transfers() {
                    total += self.transfer_cost[i * n + k] * self.dist[gate_of[i] * self.gates + gate_of[k]];
                }
            }
        }
        total
    }
}

struct State<'e> {
    ev: &'e Evaluator,
    gate_of: Vec<usize>,
    shared: Vec<f64>,
    clashes: Vec<u32>,
    linked: Vec<f64>,
    value: f64,
}

impl<'e> State<'e> {
    fn new(ev: &'e Evaluator, gate_of: Vec<usize>) -> Self {
        let (n, g) = (ev.n, ev.gates);
        let mut shared = vec![0.0; n * g];
        let mut clashes = vec![0u32; n * g];
        let mut linked = vec![0.0; n * g];
        for i in 0..n {
            for k in 0..n {
                if i == k {
                    continue;
                }
                let gk = gate_of[k];
                shared[i * g + gk] += ev.pair_cost[i * n + k];
                if !ev.compatible[i * n + k] {
                    clashes[i * g + gk] += 1;
                }
            }
            for &(p, c) in &ev.partners[i] {
                let gp = gate_of[p];
                for j in 0..g {
                    linked[i * g + j] += c * ev.dist[j * g + gp];
                }
            }
        }
        let value = ev.full(&gate_of);
        State {
            ev,
            gate_of,
            shared,
            clashes,
            linked,
            value,
        }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> usize {
        i * self.ev.gates + j
    }

    #[inline]
    fn move_delta(&self, i: usize, to: usize) -> f64 {
        let from = self.gate_of[i];
        let (a, b) = (self.at(i, to), self.at(i, from));
        self.ev.unary[a] - self.ev.unary[b] + self.shared[a] - self.shared[b] + self.linked[a] - self.linked[b]
    }

    #[inline]
    fn can_move(&self, i: usize, to: usize) -> bool {
        self.clashes[self.at(i, to)] == 0
    }

    #[inline]
    fn can_swap(&self, i: usize, k: usize) -> bool {
        let own = u32::from(!self.ev.compatible[i * self.ev.n + k]);
        let (gi, gk) = (self.gate_of[i], self.gate_of[k]);
        self.clashes[self.at(i, gk)] == own && self.clashes[self.at(k, gi)] == own
    }

    #[inline]
    fn swap_delta(&self, i: usize, k: usize) -> f64 {
        let ev = self.ev;
        let (gi, gk) = (self.gate_of[i], self.gate_of[k]);
        let w = ev.pair_cost[i * ev.n + k];
        let mut d = self.move_delta(i, gk) + self.move_delta(k, gi) - 2.0 * w;
        if ev.has_transfers() {
            d += 2.0 * ev.transfer_cost[i * ev.n + k] * ev.dist[gi * ev.gates + gk];
        }
        d
    }

    fn apply_move(&mut self, i: usize, to: usize) {
        let ev = self.ev;
        let (n, g) = (ev.n, ev.gates);
        let from = self.gate_of[i];
        if from == to {
            return;
        }
        self.value += self.move_delta(i, to);
        for k in 0..n {
            if k == i {
                continue;
            }
            let w = ev.pair_cost[k * n + i];
            self.shared[k * g + from] -= w;
            self.shared[k * g + to] += w;
            if !ev.compatible[k * n + i] {
                self.clashes[k * g + from] -= 1;
                self.clashes[k * g + to] += 1;
            }
        }
        for &(p, c) in &ev.partners[i] {
            for j in 0..g {
                self.linked[p * g + j] += c * (ev.dist[j * g + to] - ev.dist[j * g + from]);
            }
        }
        self.gate_of[i] = to;
    }
}

#[derive(Debug, Clone, Copy)]
enum Step {
    Move { flight: usize, to: usize },
    Swap { first: usize, second: usize },
}

struct Run {
    best: Vec<usize>,
    best_value: f64,
    trace: Vec<f64>,
    iterations: usize,
}

fn search<R: Rng + ?Sized>(ev: &Evaluator, init: Vec<usize>, config: &SolverConfig, rng: &mut R) -> Run {
    let (n, g) = (ev.n, ev.gates);
    let mut state = State::new(ev, init);
    let tenure = config.tenure_for(n);
    let mut tabu_until = vec![0usize; n * g];
    let mut best = state.gate_of.clone();
    let mut best_value = state.value;
    let mut trace = vec![best_value];
    let mut stall = 0;
    let mut iterations = 0;
    let use_moves = matches!(config.neighborhood, Neighborhood::Move | Neighborhood::Both);
    let use_swaps = matches!(config.neighborhood, Neighborhood::Swap | Neighborhood::Both);

    for iter in 1..=config.max_iterations {
        // Every objective term is nonnegative.
        if best_value <= 1e-12 {
            break;
        }
        let aspiration = best_value - 1e-9 * (1.0 + best_value.abs());
        let mut chosen: Option<Step> = None;
        let mut chosen_delta = f64::INFINITY;
        let mut ties = 0u32;
        let mut consider = |delta: f64, step: Step, rng: &mut R| {
            let tol = 1e-12 * (1.0 + delta.abs());
            if delta < chosen_delta - tol {
                chosen_delta = delta;
                chosen = Some(step);
                ties = 1;
            } else if (delta - chosen_delta).abs() <= tol {
                ties += 1;
                if rng.random_range(0..ties) == 0 {
                    chosen = Some(step);
                }
            }
        };

        if use_moves {
            for i in 0..n {
                let from = state.gate_of[i];
                for to in 0..g {
                    if to == from || !state.can_move(i, to) {
                        continue;
                    }
                    let delta = state.move_delta(i, to);
                    let tabu = tabu_until[i * g + to] > iter;
                    if tabu && state.value + delta >= aspiration {
                        continue;
                    }
                    consider(delta, Step::Move { flight: i, to }, rng);
                }
            }
        }
        if use_swaps {
            for i in 0..n {
                let gi = state.gate_of[i];
                for k in (i + 1)..n {
                    let gk = state.gate_of[k];
                    if gi == gk || !state.can_swap(i, k) {
                        continue;
                    }
                    let delta = state.swap_delta(i, k);
                    let tabu = tabu_until[i * g + gk] > iter || tabu_until[k * g + gi] > iter;
                    if tabu && state.value + delta >= aspiration {
                        continue;
                    }
                    consider(delta, Step::Swap { first: i, second: k }, rng);
                }
            }
        }

        let Some(step) = chosen else { break };
        iterations = iter;
        match step {
            Step::Move { flight, to } => {
                let from = state.gate_of[flight];
                state.apply_move(flight, to);
                tabu_until[flight * g + from] = iter + tenure;
            }
            Step::Swap { first, second } => {
                let (g1, g2) = (state.gate_of[first], state.gate_of[second]);
                state.apply_move(first, g2);
                state.apply_move(second, g1);
                tabu_until[first * g + g1] = iter + tenure;
                tabu_until[second * g + g2] = iter + tenure;
            }
        }

        if state.value < aspiration {
            best_value = state.value;
            best.clone_from(&state.gate_of);
            stall = 0;
        } else {
            stall += 1;
        }
        trace.push(best_value);
        if stall >= config.max_stall {
            break;
        }
    }

    Run {
        best_value: ev.full(&best),
        best,
        trace,
        iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::{curve, flight, generated};
    use super::super::{exhaustive_solve, objective_robust};
    use super::*;
    use crate::schedule::TransferMatrix;
    use crate::transit::ParallelRamp;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn spreads_flights_when_gates_suffice() {
        let flights = (0..5).map(|k| flight(&format!("f{k}"), 100.0 * k as f64, 100.0 * k as f64 + 50.0, 10)).collect();
        let s = Schedule::new(flights, 5).unwrap();
        let out = tabu_search(&s, &SolverConfig::default(), &curve(), None).unwrap();
        assert_eq!(out.objective, 0.0);
        assert_eq!(out.assignment.gates_used(), 5);
        assert!(out.initial_objective > 0.0);
    }

    #[test]
    fn matches_enumeration_on_six_flights() {
        let times = [(0.0, 40.0), (20.0, 70.0), (60.0, 100.0), (90.0, 140.0), (120.0, 170.0), (150.0, 200.0)];
        let flights = times
            .iter()
            .enumerate()
            .map(|(k, &(a, d))| flight(&format!("f{k}"), a, d, 10))
            .collect();
        let s = Schedule::new(flights, 3).unwrap();
        let c = curve();
        let exact = exhaustive_solve(&s, 15.0, |a| objective_robust(&s, a, &c, false).unwrap()).unwrap();
        let out = tabu_search(&s, &SolverConfig::default(), &c, None).unwrap();
        assert!((out.objective - exact.objective).abs() < 1e-9, "{} vs {}", out.objective, exact.objective);
        assert!(is_feasible(&s, &out.assignment, 15.0).unwrap().is_feasible());
    }

    #[test]
    fn infeasible_instance_has_no_start() {
        let s = Schedule::new(vec![flight("a", 0.0, 60.0, 1), flight("b", 30.0, 90.0, 1)], 1).unwrap();
        assert!(matches!(
            tabu_search(&s, &SolverConfig::default(), &curve(), None),
            Err(Error::NoFeasibleStart)
        ));
    }

    #[test]
    fn deterministic_per_seed() {
        let (s, _) = generated(40, 3, 2);
        let cfg = SolverConfig {
            restarts: 3,
            seed: 9,
            ..Default::default()
        };
        let a = tabu_search(&s, &cfg, &curve(), None).unwrap();
        let b = tabu_search(&s, &cfg, &curve(), None).unwrap();
        assert_eq!(a, b);
    }

    fn transit_instance(seed: u64) -> (Schedule, TransferMatrix, crate::transit::RampConfig) {
        let (s, t) = generated(24, seed, 3);
        let ramp = ParallelRamp {
            gates_per_concourse: s.gate_count().div_ceil(2),
            ..Default::default()
        }
        .build()
        .unwrap();
        (s, t, ramp)
    }

    #[test]
    fn combined_objective_agrees_with_direct_evaluation() {
        let (s, t, ramp) = transit_instance(4);
        let c = curve();
        let cfg = SolverConfig {
            alpha: 0.3,
            max_iterations: 300,
            ..Default::default()
        };
        let out = tabu_search(&s, &cfg, &c, Some(TransitInputs { ramp: &ramp, transfers: &t })).unwrap();
        let direct = super::super::combined_objective(&s, &out.assignment, &c, &ramp, &t, 0.3).unwrap();
        assert!((out.objective - direct).abs() < 1e-6 * (1.0 + direct));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        /// Incremental accumulators agree with from-scratch evaluation
        /// after an arbitrary sequence of feasible moves and swaps.
        #[test]
        fn incremental_deltas_match_full_evaluation(seed in 0u64..1000, alpha in 0.0f64..1.0, steps in 1usize..40) {
            let (s, t, ramp) = transit_instance(seed);
            let c = curve();
            let objective = Objective::Combined { curve: &c, transit: TransitInputs { ramp: &ramp, transfers: &t }, alpha };
            let ev = Evaluator::new(&s, &objective, 15.0).unwrap();
            let init = greedy_assign(&s, 15.0).unwrap();
            let mut st = State::new(&ev, init.gate_of().to_vec());
            let mut r = rng::stream(seed, 77);
            for _ in 0..steps {
                let i = r.random_range(0..s.len());
                if r.random::<bool>() {
                    let to = r.random_range(0..s.gate_count());
                    if to != st.gate_of[i] && st.can_move(i, to) {
                        let predicted = st.value + st.move_delta(i, to);
                        st.apply_move(i, to);
                        prop_assert!((predicted - ev.full(&st.gate_of)).abs() < 1e-7 * (1.0 + predicted.abs()));
                    }
                } else {
                    let k = r.random_range(0..s.len());
                    if k != i && st.gate_of[i] != st.gate_of[k] && st.can_swap(i, k) {
                        let predicted = st.value + st.swap_delta(i, k);
                        let (gi, gk) = (st.gate_of[i], st.gate_of[k]);
                        st.apply_move(i, gk);
                        st.apply_move(k, gi);
                        prop_assert!((predicted - ev.full(&st.gate_of)).abs() < 1e-7 * (1.0 + predicted.abs()));
                    }
                }
                let asg = Assignment::new(st.gate_of.clone());
                prop_assert!(is_feasible(&s, &asg, 15.0).unwrap().is_feasible());
            }
            let direct = objective.evaluate(&s, &Assignment::new(st.gate_of.clone())).unwrap();
            prop_assert!((ev.full(&st.gate_of) - direct).abs() < 1e-7 * (1.0 + direct));
        }
    }

    #[test]
    fn trace_is_nonincreasing_and_bounded_by_start() {
        let (s, _) = generated(50, 8, 1);
        let out = tabu_search(&s, &SolverConfig::default(), &curve(), None).unwrap();
        assert!(out.trace.windows(2).all(|w| w[1] <= w[0]));
        assert!(out.objective <= out.initial_objective + 1e-9);
        assert!(is_feasible(&s, &out.assignment, 15.0).unwrap().is_feasible());
    }
}
