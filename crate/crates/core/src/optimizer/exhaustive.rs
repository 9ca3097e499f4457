use super::Assignment;
use crate::error::{Error, Result};
use crate::schedule::Schedule;

/// Largest `|G|^|F|` the enumerator accepts.
pub const MAX_ENUMERATION: f64 = 1e7;

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub assignment: Assignment,
    pub objective: f64,
}

/// Global minimum of `objective` over all feasible assignments.
///
/// Depth-first enumeration in flight index order; a branch is cut as soon
/// as the newly placed flight violates the buffer with an earlier flight on
/// its gate. Among equal optima the lexicographically smallest gate vector
/// wins.
pub fn exhaustive_solve<F>(schedule: &Schedule, buffer_min: f64, objective: F) -> Result<Solution>
where
    F: Fn(&Assignment) -> f64,
{
    let n = schedule.len();
    let gates = schedule.gate_count();
    if (gates as f64).powi(n as i32) > MAX_ENUMERATION {
        return Err(Error::TooLarge { gates, flights: n });
    }
    let mut compatible = vec![true; n * n];
    for i in 0..n {
        for k in (i + 1)..n {
            let ok = schedule.separation(i, k) >= buffer_min;
            compatible[i * n + k] = ok;
            compatible[k * n + i] = ok;
        }
    }

    let mut gate_of = vec![0usize; n];
    let mut best: Option<Solution> = None;
    let mut visit = |gate_of: &[usize]| {
        let asg = Assignment::new(gate_of.to_vec());
        let value = objective(&asg);
        if best.as_ref().is_none_or(|b| value < b.objective) {
            best = Some(Solution {
                assignment: asg,
                objective: value,
            });
        }
    };
    descend(0, &mut gate_of, gates, &compatible, &mut visit);
    best.ok_or(Error::Infeasible)
}

fn descend(depth: usize, gate_of: &mut [usize], gates: usize, compatible: &[bool], visit: &mut impl FnMut(&[usize])) {
    let n = gate_of.len();
    if depth == n {
        visit(gate_of);
        return;
    }
    for g in 0..gates {
        if (0..depth).all(|p| gate_of[p] != g || compatible[p * n + depth]) {
            gate_of[depth] = g;
            descend(depth + 1, gate_of, gates, compatible, visit);
        }
    }
}
