use rand::Rng;

use super::Assignment;
use crate::error::{Error, Result};
use crate::schedule::Schedule;

/// First-fit packing in order of scheduled arrival.
///
/// Each flight goes to the lowest-index gate whose latest occupant leaves
/// at least `buffer_min` minutes before it arrives. Because flights are
/// taken by arrival time, comparing against the latest occupant suffices.
pub fn greedy_assign(schedule: &Schedule, buffer_min: f64) -> Result<Assignment> {
    let gates = schedule.gate_count();
    let mut last: Vec<Option<usize>> = vec![None; gates];
    let mut gate_of = vec![usize::MAX; schedule.len()];
    for i in schedule.arrival_order() {
        let gate = (0..gates)
            .find(|&g| last[g].is_none_or(|p| schedule.separation(p, i) >= buffer_min))
            .ok_or_else(|| Error::NoFeasibleGate {
                flight: schedule.flight(i).id.clone(),
                gates,
            })?;
        last[gate] = Some(i);
        gate_of[i] = gate;
    }
    Ok(Assignment::new(gate_of))
}

/// Fewest gates any feasible assignment needs.
///
/// Occupancies padded by the buffer form an interval graph, on which
/// first-fit in arrival order is optimal.
pub fn min_gates_required(schedule: &Schedule, buffer_min: f64) -> usize {
    let mut last: Vec<usize> = Vec::new();
    for i in schedule.arrival_order() {
        match last.iter().position(|&p| schedule.separation(p, i) >= buffer_min) {
            Some(g) => last[g] = i,
            None => last.push(i),
        }
    }
    last.len()
}

/// Like [`greedy_assign`] but each flight picks uniformly among the gates it
/// fits on. Returns `None` when some flight finds no gate.
pub fn random_feasible_assign<R: Rng + ?Sized>(schedule: &Schedule, buffer_min: f64, rng: &mut R) -> Option<Assignment> {
    let gates = schedule.gate_count();
    let mut last: Vec<Option<usize>> = vec![None; gates];
    let mut gate_of = vec![usize::MAX; schedule.len()];
    let mut open = Vec::with_capacity(gates);
    for i in schedule.arrival_order() {
        open.clear();
        open.extend((0..gates).filter(|&g| last[g].is_none_or(|p| schedule.separation(p, i) >= buffer_min)));
        if open.is_empty() {
            return None;
        }
        let gate = open[rng.random_range(0..open.len())];
        last[gate] = Some(i);
        gate_of[i] = gate;
    }
    Some(Assignment::new(gate_of))
}

#[cfg(test)]
mod tests {
    use super::super::tests::flight;
    use super::super::{is_feasible, min_same_gate_separation};
    use super::*;
    use crate::rng;

    #[test]
    fn overlapping_flights_split() {
        let s = Schedule::new(vec![flight("a", 0.0, 60.0, 1), flight("b", 30.0, 90.0, 1)], 2).unwrap();
        let a = greedy_assign(&s, 15.0).unwrap();
        assert_eq!(a.gate_of(), &[0, 1]);
        assert_eq!(a.gates_used(), 2);
        assert_eq!(min_gates_required(&s, 15.0), 2);
    }

    #[test]
    fn packs_when_buffer_allows() {
        let s = Schedule::new(vec![flight("a", 0.0, 60.0, 1), flight("b", 80.0, 140.0, 1)], 2).unwrap();
        assert_eq!(greedy_assign(&s, 15.0).unwrap().gate_of(), &[0, 0]);
    }

    #[test]
    fn chain_at_exact_buffer_stays_on_one_gate() {
        let flights = (0..10)
            .map(|k| {
                let arr = k as f64 * 75.0;
                flight(&format!("f{k}"), arr, arr + 60.0, 1)
            })
            .collect();
        let s = Schedule::new(flights, 3).unwrap();
        let a = greedy_assign(&s, 15.0).unwrap();
        assert!(a.gate_of().iter().all(|&g| g == 0));
        assert_eq!(min_same_gate_separation(&s, &a), Some(15.0));
        assert_eq!(min_gates_required(&s, 15.0), 1);
        assert_eq!(min_gates_required(&s, 15.5), 2);
    }

    #[test]
    fn reports_exhausted_gates() {
        let s = Schedule::new(vec![flight("a", 0.0, 60.0, 1), flight("b", 30.0, 90.0, 1)], 1).unwrap();
        assert!(matches!(greedy_assign(&s, 15.0), Err(Error::NoFeasibleGate { .. })));
        let mut r = rng::stream(1, 0);
        assert!(random_feasible_assign(&s, 15.0, &mut r).is_none());
    }

    #[test]
    fn random_construction_is_feasible() {
        let flights = (0..30)
            .map(|k| {
                let arr = (k * 37 % 300) as f64;
                flight(&format!("f{k}"), arr, arr + 45.0, 1)
            })
            .collect();
        let s = Schedule::new(flights, 12).unwrap();
        let mut r = rng::stream(3, 0);
        let a = random_feasible_assign(&s, 15.0, &mut r).unwrap();
        assert!(is_feasible(&s, &a, 15.0).unwrap().is_feasible());
    }
}
