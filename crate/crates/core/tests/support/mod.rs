//! Property checks shared by the invariant tests and the acceptance runner.
//!
//! Each check drives proptest with a fixed ChaCha seed and returns the
//! (shrunk) counterexample as an error string.

#![allow(dead_code)]

use std::fmt::Debug;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rand::Rng;

use robust_gates::conflict::{expected_conflict_duration_exact, fit_conflict_curve, separation_grid, ConflictCurve, SeparationMinutes};
use robust_gates::delay_model::{fit_shifted_lognormal, DelayDistribution, TurnModel};
use robust_gates::optimizer::{
    exhaustive_solve, greedy_assign, is_feasible, min_gates_required, min_same_gate_separation, objective_robust,
    objective_transit, random_feasible_assign, tabu_search, Assignment, SolverConfig,
};
use robust_gates::quadrature::{integrate, QuadOptions};
use robust_gates::rng;
use robust_gates::schedule::{
    gate_separation, pair_turns, scale_traffic, ArrivalRecord, DepartureRecord, Flight, Schedule, TransferMatrix,
};
use robust_gates::simulator::{simulate_many, simulate_trace, DepartureModel};
use robust_gates::transit::{make_horseshoe_ramp, HorseshoeArms, ParallelRamp, RampConfig};

pub type Check = Result<(), String>;

pub const BUFFER: f64 = 15.0;

fn run<S>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Check
where
    S: Strategy,
    S::Value: Debug,
{
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn fail(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

// ---------------------------------------------------------------------------
// Strategies
// ---------------------------------------------------------------------------

pub fn any_dist() -> impl Strategy<Value = DelayDistribution> {
    (-1.0f64..4.0, 0.1f64..1.5, -60.0f64..10.0).prop_map(|(mu, sigma, c)| DelayDistribution::new(mu, sigma, c).unwrap())
}

/// Flights as `(arrival, turn, pax)` on a one-day integer-minute grid.
pub fn any_flights(max: usize) -> impl Strategy<Value = Vec<Flight>> {
    prop::collection::vec((0u32..900, 20u32..150, 0u32..200), 2..max).prop_map(|raw| {
        raw.into_iter()
            .enumerate()
            .map(|(k, (arr, turn, pax))| Flight {
                id: format!("f{k}"),
                tail: format!("t{k}"),
                sched_arr: arr as f64,
                sched_dep: (arr + turn) as f64,
                pax_in: pax,
                pax_origin: pax / 3,
                pax_dest: pax / 2,
            })
            .collect()
    })
}

/// A schedule with between zero and `spare` gates beyond the minimum.
pub fn any_schedule(max: usize, spare: usize) -> impl Strategy<Value = Schedule> {
    (any_flights(max), 0..=spare).prop_map(|(flights, extra)| {
        let s = Schedule::new(flights, 1).unwrap();
        let need = min_gates_required(&s, BUFFER);
        s.with_gate_count(need + extra).unwrap()
    })
}

fn reference_curve() -> ConflictCurve {
    ConflictCurve::new(11.63, 0.9476, DelayDistribution::REFERENCE_DEPARTURE, DelayDistribution::REFERENCE_ARRIVAL).unwrap()
}

fn random_transfers(s: &Schedule, seed: u64) -> TransferMatrix {
    let mut r = rng::stream(seed, 99);
    let mut t = TransferMatrix::new();
    for _ in 0..s.len() {
        let i = r.random_range(0..s.len());
        let k = r.random_range(0..s.len());
        if i != k {
            t.add(i, k, r.random_range(1..20)).unwrap();
        }
    }
    t
}

fn random_assignment(s: &Schedule, gates: usize, seed: u64) -> Assignment {
    let mut r = rng::stream(seed, 98);
    Assignment::new((0..s.len()).map(|_| r.random_range(0..gates)).collect())
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * (1.0 + a.abs().max(b.abs()))
}

// ---------------------------------------------------------------------------
// Delay laws and turn model
// ---------------------------------------------------------------------------

pub fn pdf_nonnegative_and_zero_below_shift() -> Check {
    run(256, (any_dist(), -100.0f64..400.0), |(d, x)| {
        let p = d.pdf(x);
        prop_assert!(p >= 0.0 && p.is_finite());
        prop_assert_eq!(d.pdf(d.shift_c), 0.0);
        if x <= d.shift_c {
            prop_assert_eq!(p, 0.0);
        }
        Ok(())
    })
}

pub fn pdf_integrates_to_one() -> Check {
    run(48, any_dist(), |d| {
        let cuts = [1e-12, 0.01, 0.1, 0.5, 0.9, 0.99, 1.0 - 1e-12].map(|p| d.quantile(p));
        let opts = QuadOptions {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_intervals: 400,
        };
        let mut total = 2e-12;
        for w in cuts.windows(2) {
            total += integrate(|x| d.pdf(x), w[0], w[1], &opts).map_err(|e| fail(e.to_string()))?.value;
        }
        prop_assert!((total - 1.0).abs() <= 1e-6, "integral {}", total);
        Ok(())
    })
}

pub fn propagation_nondecreasing_in_arrival() -> Check {
    let model = (0.0f64..20.0, 0.0f64..1.5, 0.0f64..120.0).prop_map(|(c, b, m)| TurnModel::new(c, b, m, 0.0).unwrap());
    run(256, (model, 0.0f64..600.0, -200.0f64..600.0, 0.0f64..100.0), |(t, sd, a, step)| {
        prop_assert!(t.propagate_delay(sd, a + step, 0.0) >= t.propagate_delay(sd, a, 0.0));
        Ok(())
    })
}

pub fn samples_stay_above_shift() -> Check {
    run(64, (any_dist(), any::<u64>()), |(d, seed)| {
        let mut r = rng::stream(seed, 0);
        for _ in 0..500 {
            let x = d.sample(&mut r).value;
            prop_assert!(x > d.shift_c, "{} <= {}", x, d.shift_c);
        }
        Ok(())
    })
}

/// Recovery within 0.05 in mu and sigma and 0.5 min in shift from 10^5 draws.
pub fn lognormal_fit_recovers_parameters() -> Check {
    let laws = [
        DelayDistribution::REFERENCE_DEPARTURE,
        DelayDistribution::REFERENCE_ARRIVAL,
        DelayDistribution::new(2.5, 0.6, -20.0).unwrap(),
    ];
    for (k, law) in laws.iter().enumerate() {
        let mut r = rng::stream(1000 + k as u64, rng::stage::SAMPLING);
        let data: Vec<f64> = (0..100_000).map(|_| law.sample(&mut r).value).collect();
        let fit = fit_shifted_lognormal(&data).map_err(|e| e.to_string())?;
        let ok = (fit.mu - law.mu).abs() < 0.05 && (fit.sigma - law.sigma).abs() < 0.05 && (fit.shift_c - law.shift_c).abs() < 0.5;
        if !ok {
            return Err(format!("law {law:?} fitted as {fit:?}"));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Conflict integral
// ---------------------------------------------------------------------------

pub fn exact_conflict_monotone_and_vanishing() -> Check {
    let seps = [-30.0, 0.0, 15.0, 30.0, 60.0, 90.0, 120.0, 240.0, 480.0, 1000.0];
    let laws = (any_dist(), any_dist());
    run(12, laws, |(dep, arr)| {
        let exact = |s: f64| expected_conflict_duration_exact(&dep, &arr, SeparationMinutes(s)).map_err(|e| fail(e.to_string()));
        let v: Vec<f64> = seps.iter().map(|&s| exact(s)).collect::<Result<_, _>>()?;
        prop_assert!(v.iter().all(|&x| x >= 0.0));
        for w in v.windows(2) {
            prop_assert!(w[1] <= w[0] + 2e-4, "not nonincreasing: {:?}", v);
        }
        // Beyond the bulk of both laws only a sliver of tail mass remains.
        let far = dep.quantile(1.0 - 1e-6) - arr.quantile(1e-6);
        let tail = exact(far.max(1000.0))?;
        prop_assert!(tail <= 1e-3 * v[0].max(1.0), "E({}) = {} vs E(-30) = {}", far, tail, v[0]);
        Ok(())
    })
}

pub fn exact_conflict_translation_invariant() -> Check {
    run(24, (0.0f64..900.0, 30.0f64..120.0, -20.0f64..120.0, -300.0f64..300.0), |(arr, turn, sep, shift)| {
        let mk = |id: &str, a: f64, d: f64| Flight {
            id: id.into(),
            tail: id.into(),
            sched_arr: a,
            sched_dep: d,
            pax_in: 0,
            pax_origin: 0,
            pax_dest: 0,
        };
        let dep_at = arr + turn;
        let a = (mk("a", arr, dep_at), mk("b", dep_at + sep, dep_at + sep + 60.0));
        let b = (
            mk("a", arr + shift, dep_at + shift),
            mk("b", dep_at + sep + shift, dep_at + sep + 60.0 + shift),
        );
        let sa = gate_separation(&a.0, &a.1).unwrap();
        let sb = gate_separation(&b.0, &b.1).unwrap();
        prop_assert!((sa.0 - sb.0).abs() < 1e-9);
        let (dep, arr_d) = (DelayDistribution::REFERENCE_DEPARTURE, DelayDistribution::REFERENCE_ARRIVAL);
        let ea = expected_conflict_duration_exact(&dep, &arr_d, sa).unwrap();
        let eb = expected_conflict_duration_exact(&dep, &arr_d, sb).unwrap();
        prop_assert!((ea - eb).abs() < 1e-9);
        Ok(())
    })
}

/// Largest relative error of the fitted surrogate against the exact value
/// over separations 0..=90.
pub fn surrogate_holdout_error() -> Result<f64, String> {
    let (dep, arr) = (DelayDistribution::REFERENCE_DEPARTURE, DelayDistribution::REFERENCE_ARRIVAL);
    let curve = fit_conflict_curve(&dep, &arr, &separation_grid(120.0, 5.0)).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for s in 0..=90 {
        let exact = expected_conflict_duration_exact(&dep, &arr, SeparationMinutes(s as f64)).map_err(|e| e.to_string())?;
        worst = worst.max((curve.expected_duration(s as f64) - exact).abs() / exact);
    }
    Ok(worst)
}

pub fn surrogate_matches_exact() -> Check {
    let worst = surrogate_holdout_error()?;
    if worst < 0.10 {
        Ok(())
    } else {
        Err(format!("sup relative error over [0, 90] is {:.1}%", 100.0 * worst))
    }
}

// ---------------------------------------------------------------------------
// Schedule
// ---------------------------------------------------------------------------

pub fn separation_symmetric() -> Check {
    run(128, any_flights(20), |flights| {
        for i in 0..flights.len() {
            for k in 0..flights.len() {
                if i == k {
                    prop_assert!(gate_separation(&flights[i], &flights[k]).is_err());
                    continue;
                }
                let a = gate_separation(&flights[i], &flights[k]).unwrap();
                let b = gate_separation(&flights[k], &flights[i]).unwrap();
                prop_assert_eq!(a, b);
            }
        }
        Ok(())
    })
}

pub fn pairing_conserves_counts() -> Check {
    let event = (0u8..4, any::<bool>(), 0u32..1400, -20i32..120);
    run(128, prop::collection::vec(event, 0..60), |events| {
        let mut arrivals = Vec::new();
        let mut departures = Vec::new();
        for (k, (tail, is_dep, t, delay)) in events.into_iter().enumerate() {
            let tail = format!("N{tail}");
            if is_dep {
                departures.push(DepartureRecord {
                    flight_id: format!("d{k}"),
                    tail,
                    sched_dep: t as f64,
                    act_dep: (t as i32 + delay) as f64,
                });
            } else {
                arrivals.push(ArrivalRecord {
                    flight_id: format!("a{k}"),
                    tail,
                    sched_arr: t as f64,
                    act_arr: (t as i32 + delay) as f64,
                });
            }
        }
        let p = pair_turns(&arrivals, &departures);
        prop_assert_eq!(p.matched, p.pairs.len() + p.filtered_scheduled + p.filtered_actual);
        prop_assert_eq!(p.matched + p.unmatched_arrivals, arrivals.len());
        prop_assert_eq!(p.matched + p.unmatched_departures, departures.len());
        Ok(())
    })
}

pub fn scaling_preserves_base() -> Check {
    run(64, (any_schedule(40, 2), 1.0f64..=2.0, any::<u64>()), |(s, f, seed)| {
        let scaled = scale_traffic(&s, f, seed).map_err(|e| fail(e.to_string()))?;
        prop_assert_eq!(&scaled.flights()[..s.len()], s.flights());
        prop_assert_eq!(scaled.len(), s.len() + ((f - 1.0) * s.len() as f64).round() as usize);
        prop_assert_eq!(scaled.gate_count(), s.gate_count());
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// Optimizer
// ---------------------------------------------------------------------------

pub fn solver_outputs_feasible() -> Check {
    run(40, (any_schedule(14, 2), any::<u64>()), |(s, seed)| {
        let curve = reference_curve();
        let feasible = |a: &Assignment| is_feasible(&s, a, BUFFER).unwrap().is_feasible();
        let g = greedy_assign(&s, BUFFER).map_err(|e| fail(e.to_string()))?;
        prop_assert!(feasible(&g));
        let mut r = rng::stream(seed, 0);
        if let Some(a) = random_feasible_assign(&s, BUFFER, &mut r) {
            prop_assert!(feasible(&a));
        }
        let cfg = SolverConfig {
            seed,
            max_iterations: 300,
            restarts: 2,
            ..Default::default()
        };
        let t = tabu_search(&s, &cfg, &curve, None).map_err(|e| fail(e.to_string()))?;
        prop_assert!(feasible(&t.assignment));
        prop_assert!(t.objective <= t.initial_objective + 1e-9);
        prop_assert!(t.trace.windows(2).all(|w| w[1] <= w[0]), "trace increases");
        if (s.gate_count() as f64).powi(s.len() as i32) <= 1e5 {
            let e = exhaustive_solve(&s, BUFFER, |a| objective_robust(&s, a, &curve, false).unwrap()).map_err(|e| fail(e.to_string()))?;
            prop_assert!(feasible(&e.assignment));
            prop_assert!(e.objective <= t.objective + 1e-9);
        }
        if let Some(m) = min_same_gate_separation(&s, &t.assignment) {
            prop_assert!(m >= BUFFER);
        }
        Ok(())
    })
}

pub fn robust_objective_sign() -> Check {
    run(64, (any_schedule(20, 3), any::<u64>()), |(s, seed)| {
        let curve = reference_curve();
        let mut r = rng::stream(seed, 0);
        let Some(a) = random_feasible_assign(&s, BUFFER, &mut r) else { return Ok(()) };
        let v = objective_robust(&s, &a, &curve, false).unwrap();
        let w = objective_robust(&s, &a, &curve, true).unwrap();
        prop_assert!(v >= 0.0 && w >= 0.0);
        let shared = a.gates_used() < s.len();
        prop_assert_eq!(v == 0.0, !shared);
        Ok(())
    })
}

pub fn greedy_packs_to_exact_buffer() -> Check {
    run(32, (2usize..20, 20u32..120), |(n, turn)| {
        let flights = (0..n)
            .map(|k| {
                let arr = k as f64 * (turn as f64 + BUFFER);
                Flight {
                    id: format!("c{k}"),
                    tail: format!("c{k}"),
                    sched_arr: arr,
                    sched_dep: arr + turn as f64,
                    pax_in: 1,
                    pax_origin: 0,
                    pax_dest: 0,
                }
            })
            .collect();
        let s = Schedule::new(flights, 3).unwrap();
        let g = greedy_assign(&s, BUFFER).unwrap();
        prop_assert_eq!(min_same_gate_separation(&s, &g), Some(BUFFER));
        prop_assert_eq!(g.gates_used(), 1);
        Ok(())
    })
}

fn permuted_ramp(ramp: &RampConfig, perm: &[usize]) -> RampConfig {
    let n = ramp.gate_count();
    let mut out = ramp.clone();
    for g in 0..n {
        out.gate_positions[perm[g]] = ramp.gate_positions[g];
        out.checkpoint_dist[perm[g]] = ramp.checkpoint_dist[g];
        out.baggage_dist[perm[g]] = ramp.baggage_dist[g];
        for l in 0..n {
            out.gate_to_gate[perm[g]][perm[l]] = ramp.gate_to_gate[g][l];
        }
    }
    out
}

pub fn relabeling_gates_preserves_objectives() -> Check {
    let ramp = ParallelRamp {
        gates_per_concourse: 6,
        ..Default::default()
    }
    .build()
    .unwrap();
    let perm = Just((0..ramp.gate_count()).collect::<Vec<usize>>()).prop_shuffle();
    run(64, (any_flights(20), perm, any::<u64>()), |(flights, perm, seed)| {
        let s = Schedule::new(flights, ramp.gate_count()).unwrap();
        let curve = reference_curve();
        let transfers = random_transfers(&s, seed);
        let mut r = rng::stream(seed, 0);
        if let Some(a) = random_feasible_assign(&s, BUFFER, &mut r) {
            let b = a.relabeled(&perm);
            for weighted in [false, true] {
                let (x, y) = (
                    objective_robust(&s, &a, &curve, weighted).unwrap(),
                    objective_robust(&s, &b, &curve, weighted).unwrap(),
                );
                prop_assert!(close(x, y, 1e-12), "robust {} vs {}", x, y);
            }
        }
        let a = random_assignment(&s, ramp.gate_count(), seed);
        let moved = permuted_ramp(&ramp, &perm);
        let x = objective_transit(&s, &a, &ramp, &transfers).unwrap();
        let y = objective_transit(&s, &a.relabeled(&perm), &moved, &transfers).unwrap();
        prop_assert!(close(x, y, 1e-12), "transit {} vs {}", x, y);
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// Transit
// ---------------------------------------------------------------------------

fn any_ramp() -> impl Strategy<Value = RampConfig> {
    let parallel = (1usize..10, 1usize..4, 10.0f64..100.0, 50.0f64..500.0, 30.0f64..100.0, 100.0f64..600.0).prop_map(
        |(gpc, concourses, pitch, gap, walk, mover)| {
            ParallelRamp {
                gates_per_concourse: gpc,
                concourses,
                gate_pitch: pitch,
                concourse_gap: gap,
                walk_speed: walk,
                mover_speed: mover,
            }
            .build()
            .unwrap()
        },
    );
    let horseshoe = (2usize..30, 50.0f64..500.0, 20.0f64..300.0, 50.0f64..500.0, 30.0f64..100.0).prop_map(
        |(gates, left, base, right, walk)| make_horseshoe_ramp(gates, HorseshoeArms { left, base, right }, walk).unwrap(),
    );
    prop_oneof![parallel, horseshoe]
}

pub fn ramp_distances_are_metric() -> Check {
    run(96, any_ramp(), |ramp| {
        ramp.validate().map_err(|e| fail(e.to_string()))?;
        let n = ramp.gate_count();
        for j in 0..n {
            prop_assert_eq!(ramp.gate_to_gate[j][j], 0.0);
            prop_assert!(ramp.checkpoint_dist[j] >= 0.0 && ramp.baggage_dist[j] >= 0.0);
            for l in 0..n {
                prop_assert!(ramp.gate_to_gate[j][l] >= 0.0);
                prop_assert_eq!(ramp.gate_to_gate[j][l], ramp.gate_to_gate[l][j]);
            }
        }
        prop_assert!(ramp.satisfies_triangle_inequality(1e-9));
        Ok(())
    })
}

pub fn transit_linear_in_distance_and_speed() -> Check {
    run(96, (any_ramp(), any_flights(20), 0.1f64..10.0, any::<u64>()), |(ramp, flights, factor, seed)| {
        let s = Schedule::new(flights, ramp.gate_count()).unwrap();
        let transfers = random_transfers(&s, seed);
        let a = random_assignment(&s, ramp.gate_count(), seed);
        let base = objective_transit(&s, &a, &ramp, &transfers).unwrap();
        let scaled = objective_transit(&s, &a, &ramp.scaled(factor), &transfers).unwrap();
        prop_assert!(close(scaled, factor * base, 1e-12), "{} vs {}", scaled, factor * base);
        let mut fast = ramp.clone();
        fast.walk_speed *= 2.0;
        let halved = objective_transit(&s, &a, &fast, &transfers).unwrap();
        prop_assert!(close(halved, base / 2.0, 1e-12), "{} vs {}", halved, base / 2.0);
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// Simulator
// ---------------------------------------------------------------------------

fn reference_departures() -> DepartureModel {
    DepartureModel::Turn {
        model: TurnModel {
            residual_sigma: 5.0,
            ..TurnModel::REFERENCE
        },
        draw_residual: true,
    }
}

pub fn simulator_arrivals_only_move_later() -> Check {
    run(64, (any_schedule(30, 3), any::<u64>(), any::<bool>()), |(s, seed, use_greedy)| {
        let a = if use_greedy {
            greedy_assign(&s, BUFFER).unwrap()
        } else {
            random_assignment(&s, s.gate_count(), seed)
        };
        let t = simulate_trace(&s, &a, &DelayDistribution::REFERENCE_ARRIVAL, &reference_departures(), seed).unwrap();
        prop_assert!(t.outcome.total_conflict_minutes >= 0.0);
        for i in 0..s.len() {
            prop_assert!(t.effective_arr[i] >= t.nominal_arr[i]);
        }
        for members in a.flights_by_gate(&s) {
            for w in members.windows(2) {
                prop_assert!(t.effective_arr[w[1]] >= t.effective_arr[w[0]], "gate order broken");
            }
        }
        Ok(())
    })
}

/// When no departure delay of a gate's occupant exceeds the separation to
/// the next flight plus that flight's arrival delay, nothing conflicts.
pub fn simulator_quiet_when_delays_fit() -> Check {
    run(96, (any_schedule(30, 3), any::<u64>(), 0.05f64..0.8), |(s, seed, sigma)| {
        let a = greedy_assign(&s, BUFFER).unwrap();
        let arr = DelayDistribution::new(1.0, sigma, -3.0).unwrap();
        let dep = DepartureModel::Independent(DelayDistribution::new(1.0, sigma, -3.0).unwrap());
        let t = simulate_trace(&s, &a, &arr, &dep, seed).unwrap();
        let mut fits = true;
        for members in a.flights_by_gate(&s) {
            for w in members.windows(2) {
                let (p, n) = (s.flight(w[0]), s.flight(w[1]));
                let dep_delay = t.actual_dep[w[0]] - p.sched_dep;
                let arr_delay = t.nominal_arr[w[1]] - n.sched_arr;
                fits &= dep_delay - arr_delay <= s.separation(w[0], w[1]);
            }
        }
        if fits {
            prop_assert_eq!(t.outcome.conflict_count, 0);
            prop_assert_eq!(t.outcome.total_conflict_minutes, 0.0);
        }
        Ok(())
    })
}

pub fn simulator_deterministic() -> Check {
    run(16, (any_schedule(30, 2), any::<u64>()), |(s, seed)| {
        let a = greedy_assign(&s, BUFFER).unwrap();
        let x = simulate_many(&s, &a, &DelayDistribution::REFERENCE_ARRIVAL, &reference_departures(), 20, seed).unwrap();
        let y = simulate_many(&s, &a, &DelayDistribution::REFERENCE_ARRIVAL, &reference_departures(), 20, seed).unwrap();
        prop_assert_eq!(serde_json::to_string(&x).unwrap(), serde_json::to_string(&y).unwrap());
        let mean = x.runs.iter().map(|r| r.total_conflict_minutes).sum::<f64>() / 20.0;
        prop_assert!(close(mean, x.mean_conflict_minutes, 1e-12));
        Ok(())
    })
}

/// Two flights on one gate with independently drawn delays against the
/// conflict integral, at several separations.
pub fn simulator_matches_integral_on_pair() -> Check {
    let (dep, arr) = (DelayDistribution::REFERENCE_DEPARTURE, DelayDistribution::REFERENCE_ARRIVAL);
    for (k, sep) in [0.0, 15.0, 42.0, 90.0].into_iter().enumerate() {
        let mk = |id: &str, a: f64, d: f64| Flight {
            id: id.into(),
            tail: id.into(),
            sched_arr: a,
            sched_dep: d,
            pax_in: 0,
            pax_origin: 0,
            pax_dest: 0,
        };
        let s = Schedule::new(vec![mk("a", 0.0, 400.0), mk("b", 400.0 + sep, 480.0 + sep)], 1).unwrap();
        let out = simulate_many(&s, &Assignment::new(vec![0, 0]), &arr, &DepartureModel::Independent(dep), 50_000, 500 + k as u64)
            .map_err(|e| e.to_string())?;
        let exact = expected_conflict_duration_exact(&dep, &arr, SeparationMinutes(sep)).map_err(|e| e.to_string())?;
        let z = (out.mean_conflict_minutes - exact) / out.stderr_conflict_minutes();
        if z.abs() >= 3.0 {
            return Err(format!("sep {sep}: simulated {:.4} vs exact {exact:.4} (z = {z:.2})", out.mean_conflict_minutes));
        }
    }
    Ok(())
}

/// Every invariant, in module order.
pub fn all_checks() -> Vec<(&'static str, fn() -> Check)> {
    vec![
        ("delay: pdf nonnegative, zero at and below the shift", pdf_nonnegative_and_zero_below_shift),
        ("delay: pdf integrates to 1 within 1e-6", pdf_integrates_to_one),
        ("delay: propagation nondecreasing in actual arrival", propagation_nondecreasing_in_arrival),
        ("delay: fit recovers known parameters", lognormal_fit_recovers_parameters),
        ("delay: samples stay above the shift", samples_stay_above_shift),
        ("conflict: exact value nonnegative, nonincreasing, vanishing", exact_conflict_monotone_and_vanishing),
        ("conflict: translation invariance", exact_conflict_translation_invariant),
        ("conflict: surrogate within 10% of exact on [0, 90]", surrogate_matches_exact),
        ("schedule: separation symmetry", separation_symmetric),
        ("schedule: pairing conserves counts", pairing_conserves_counts),
        ("schedule: scaling preserves base flights", scaling_preserves_base),
        ("optimizer: solver outputs feasible, trace nonincreasing", solver_outputs_feasible),
        ("optimizer: robust objective sign", robust_objective_sign),
        ("optimizer: greedy chain packs to the buffer", greedy_packs_to_exact_buffer),
        ("optimizer: gate relabeling invariance", relabeling_gates_preserves_objectives),
        ("transit: distances metric", ramp_distances_are_metric),
        ("transit: linear in distance and speed", transit_linear_in_distance_and_speed),
        ("simulator: arrivals only move later, gate order kept", simulator_arrivals_only_move_later),
        ("simulator: no conflict when delays fit", simulator_quiet_when_delays_fit),
        ("simulator: deterministic per seed", simulator_deterministic),
        ("simulator: two-flight integral cross-check", simulator_matches_integral_on_pair),
    ]
}
