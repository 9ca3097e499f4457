//! Python bindings: delay laws, conflict curves, schedules, solvers and the
//! Monte Carlo evaluator.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use robust_gates as core;
use robust_gates::delay_model::TurnObservation;
use robust_gates::optimizer::{min_gates_required, TransitInputs};
use robust_gates::rng;
use robust_gates::schedule::GeneratorParams;
use robust_gates::transit::ParallelRamp;

fn err(e: core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Shifted log-normal delay law, in minutes.
#[pyclass(name = "DelayDistribution", module = "robust_gates_py", from_py_object)]
#[derive(Clone)]
struct PyDelay(core::DelayDistribution);

#[pymethods]
impl PyDelay {
    #[new]
    fn new(mu: f64, sigma: f64, shift_c: f64) -> PyResult<Self> {
        core::DelayDistribution::new(mu, sigma, shift_c).map(PyDelay).map_err(err)
    }

    #[staticmethod]
    fn reference_arrival() -> Self {
        PyDelay(core::DelayDistribution::REFERENCE_ARRIVAL)
    }

    #[staticmethod]
    fn reference_departure() -> Self {
        PyDelay(core::DelayDistribution::REFERENCE_DEPARTURE)
    }

    /// Maximum-likelihood fit.
    #[staticmethod]
    fn fit(delays: Vec<f64>) -> PyResult<Self> {
        core::fit_shifted_lognormal(&delays).map(PyDelay).map_err(err)
    }

    #[getter]
    fn mu(&self) -> f64 {
        self.0.mu
    }

    #[getter]
    fn sigma(&self) -> f64 {
        self.0.sigma
    }

    #[getter]
    fn shift_c(&self) -> f64 {
        self.0.shift_c
    }

    fn pdf(&self, x: f64) -> f64 {
        self.0.pdf(x)
    }

    fn mean(&self) -> f64 {
        self.0.mean()
    }

    fn quantile(&self, p: f64) -> f64 {
        self.0.quantile(p)
    }

    /// `n` draws from the seeded sampling stream.
    #[pyo3(signature = (n, seed=0))]
    fn sample(&self, n: usize, seed: u64) -> Vec<f64> {
        let mut g = rng::stream(seed, rng::stage::SAMPLING);
        (0..n).map(|_| self.0.sample(&mut g).value).collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "DelayDistribution(mu={}, sigma={}, shift_c={})",
            self.0.mu, self.0.sigma, self.0.shift_c
        )
    }
}

/// Departure delay propagated from a late arrival.
#[pyclass(name = "TurnModel", module = "robust_gates_py", from_py_object)]
#[derive(Clone)]
struct PyTurn(core::TurnModel);

#[pymethods]
impl PyTurn {
    #[new]
    #[pyo3(signature = (fixed_delay, propagation_ratio, min_turn, residual_sigma=0.0))]
    fn new(fixed_delay: f64, propagation_ratio: f64, min_turn: f64, residual_sigma: f64) -> PyResult<Self> {
        core::TurnModel::new(fixed_delay, propagation_ratio, min_turn, residual_sigma)
            .map(PyTurn)
            .map_err(err)
    }

    #[staticmethod]
    fn reference() -> Self {
        PyTurn(core::TurnModel::REFERENCE)
    }

    /// Least-squares fit from `(scheduled_dep, actual_arr, dep_delay)` triples.
    #[staticmethod]
    fn fit(observations: Vec<(f64, f64, f64)>) -> PyResult<Self> {
        let obs: Vec<TurnObservation> = observations
            .into_iter()
            .map(|(scheduled_dep, actual_arr, dep_delay)| TurnObservation {
                scheduled_dep,
                actual_arr,
                dep_delay,
            })
            .collect();
        core::fit_turn_model(&obs).map(|f| PyTurn(f.model)).map_err(err)
    }

    #[getter]
    fn fixed_delay(&self) -> f64 {
        self.0.fixed_delay
    }

    #[getter]
    fn propagation_ratio(&self) -> f64 {
        self.0.propagation_ratio
    }

    #[getter]
    fn min_turn(&self) -> f64 {
        self.0.min_turn
    }

    #[getter]
    fn residual_sigma(&self) -> f64 {
        self.0.residual_sigma
    }

    #[pyo3(signature = (scheduled_dep, actual_arr, residual=0.0))]
    fn propagate_delay(&self, scheduled_dep: f64, actual_arr: f64, residual: f64) -> f64 {
        self.0.propagate_delay(scheduled_dep, actual_arr, residual)
    }
}

/// Exponential fit of expected conflict minutes against separation.
#[pyclass(name = "ConflictCurve", module = "robust_gates_py", from_py_object)]
#[derive(Clone)]
struct PyCurve(core::ConflictCurve);

#[pymethods]
impl PyCurve {
    #[staticmethod]
    #[pyo3(signature = (dep, arr, max=120.0, step=5.0))]
    fn fit(dep: &PyDelay, arr: &PyDelay, max: f64, step: f64) -> PyResult<Self> {
        let grid = core::conflict::separation_grid(max, step);
        core::fit_conflict_curve(&dep.0, &arr.0, &grid).map(PyCurve).map_err(err)
    }

    #[getter]
    fn a(&self) -> f64 {
        self.0.intercept_a
    }

    #[getter]
    fn b(&self) -> f64 {
        self.0.base_b
    }

    /// Fitted expected conflict minutes at `sep`.
    fn __call__(&self, sep: f64) -> f64 {
        core::expected_conflict_duration_fast(&self.0, sep.into())
    }

    /// `(sep, exact)` pairs the fit was made from.
    fn samples(&self) -> Vec<(f64, f64)> {
        self.0.samples.iter().map(|s| (s.sep_min, s.exact_min)).collect()
    }
}

/// Exact expected conflict minutes at planned separation `sep`.
#[pyfunction]
fn conflict_exact(dep: &PyDelay, arr: &PyDelay, sep: f64) -> PyResult<f64> {
    core::expected_conflict_duration_exact(&dep.0, &arr.0, sep.into()).map_err(err)
}

/// Flights, gate count and transfer passengers.
#[pyclass(name = "Schedule", module = "robust_gates_py", from_py_object)]
#[derive(Clone)]
struct PySchedule {
    schedule: core::Schedule,
    transfers: core::TransferMatrix,
}

#[pymethods]
impl PySchedule {
    /// Synthetic hub day; `compact` squeezes it into a four-hour window.
    #[staticmethod]
    #[pyo3(signature = (flights, gates, seed=1, compact=false))]
    fn generate(flights: usize, gates: usize, seed: u64, compact: bool) -> PyResult<Self> {
        let params = if compact {
            GeneratorParams::compact(flights, gates)
        } else {
            GeneratorParams {
                flights,
                gates,
                ..GeneratorParams::default()
            }
        };
        let (schedule, transfers) = core::generate_schedule(&params, seed).map_err(err)?;
        Ok(PySchedule { schedule, transfers })
    }

    /// From `(flight_id, sched_arr, sched_dep)` rows, without transfers.
    #[staticmethod]
    fn from_rows(rows: Vec<(String, f64, f64)>, gates: usize) -> PyResult<Self> {
        let flights = rows
            .into_iter()
            .map(|(id, sched_arr, sched_dep)| core::Flight {
                tail: id.clone(),
                id,
                sched_arr,
                sched_dep,
                pax_in: 0,
                pax_origin: 0,
                pax_dest: 0,
            })
            .collect();
        let schedule = core::Schedule::new(flights, gates).map_err(err)?;
        Ok(PySchedule {
            schedule,
            transfers: core::TransferMatrix::new(),
        })
    }

    /// Reads a schedule CSV and, optionally, a transfers CSV.
    #[staticmethod]
    #[pyo3(signature = (path, gates, transfers=None))]
    fn read_csv(path: std::path::PathBuf, gates: usize, transfers: Option<std::path::PathBuf>) -> PyResult<Self> {
        let schedule = core::io::read_schedule_csv(&path, gates).map_err(err)?;
        let transfers = match transfers {
            Some(p) => core::io::read_transfers_csv(&p, &schedule).map_err(err)?,
            None => core::TransferMatrix::new(),
        };
        Ok(PySchedule { schedule, transfers })
    }

    /// Traffic multiplied by `factor`.
    #[pyo3(signature = (factor, seed=1))]
    fn scaled(&self, factor: f64, seed: u64) -> PyResult<Self> {
        let schedule = core::scale_traffic(&self.schedule, factor, seed).map_err(err)?;
        Ok(PySchedule {
            schedule,
            transfers: core::TransferMatrix::new(),
        })
    }

    fn __len__(&self) -> usize {
        self.schedule.len()
    }

    #[getter]
    fn gates(&self) -> usize {
        self.schedule.gate_count()
    }

    /// `(flight_id, sched_arr, sched_dep)` in schedule order.
    fn flights(&self) -> Vec<(String, f64, f64)> {
        self.schedule
            .flights()
            .iter()
            .map(|f| (f.id.clone(), f.sched_arr, f.sched_dep))
            .collect()
    }

    /// Fewest gates that fit every flight at `buffer` minutes.
    #[pyo3(signature = (buffer=15.0))]
    fn min_gates(&self, buffer: f64) -> usize {
        min_gates_required(&self.schedule, buffer)
    }
}

/// Gate geometry and walking times.
#[pyclass(name = "Ramp", module = "robust_gates_py", from_py_object)]
#[derive(Clone)]
struct PyRamp(core::RampConfig);

#[pymethods]
impl PyRamp {
    #[staticmethod]
    #[pyo3(signature = (gates, concourses=2))]
    fn parallel(gates: usize, concourses: usize) -> PyResult<Self> {
        if concourses == 0 || gates % concourses != 0 {
            return Err(PyValueError::new_err(format!(
                "{gates} gates do not split over {concourses} concourses"
            )));
        }
        ParallelRamp {
            gates_per_concourse: gates / concourses,
            concourses,
            ..ParallelRamp::default()
        }
        .build()
        .map(PyRamp)
        .map_err(err)
    }

    #[staticmethod]
    fn horseshoe(gates: usize) -> PyResult<Self> {
        let walk = ParallelRamp::default().walk_speed;
        core::make_horseshoe_ramp(gates, Default::default(), walk)
            .map(PyRamp)
            .map_err(err)
    }

    #[getter]
    fn gates(&self) -> usize {
        self.0.gate_positions.len()
    }
}

fn solver_config(buffer: f64, seed: u64, restarts: usize, alpha: f64) -> PyResult<core::SolverConfig> {
    let cfg = core::SolverConfig {
        buffer_min: buffer,
        seed,
        restarts,
        alpha,
        ..core::SolverConfig::default()
    };
    cfg.validate().map_err(err)?;
    Ok(cfg)
}

fn to_assignment(s: &PySchedule, gates: Vec<usize>) -> PyResult<core::Assignment> {
    if gates.len() != s.schedule.len() {
        return Err(PyValueError::new_err(format!(
            "{} gates given for {} flights",
            gates.len(),
            s.schedule.len()
        )));
    }
    Ok(core::Assignment::new(gates))
}

/// Earliest-arrival packing; returns the gate of each flight.
#[pyfunction]
#[pyo3(signature = (schedule, buffer=15.0))]
fn greedy_assign(schedule: &PySchedule, buffer: f64) -> PyResult<Vec<usize>> {
    core::greedy_assign(&schedule.schedule, buffer)
        .map(|a| a.gate_of().to_vec())
        .map_err(err)
}

/// Tabu Search; returns `(gates, objective)`. With a ramp the transit term
/// enters at weight `1 - alpha`.
#[pyfunction]
#[pyo3(signature = (schedule, curve, buffer=15.0, seed=1, restarts=1, ramp=None, alpha=1.0))]
fn tabu_assign(
    schedule: &PySchedule,
    curve: &PyCurve,
    buffer: f64,
    seed: u64,
    restarts: usize,
    ramp: Option<&PyRamp>,
    alpha: f64,
) -> PyResult<(Vec<usize>, f64)> {
    let cfg = solver_config(buffer, seed, restarts, alpha)?;
    let transit = ramp.map(|r| TransitInputs {
        ramp: &r.0,
        transfers: &schedule.transfers,
    });
    let out = core::tabu_search(&schedule.schedule, &cfg, &curve.0, transit).map_err(err)?;
    Ok((out.assignment.gate_of().to_vec(), out.objective))
}

/// Sum of fitted conflict minutes over consecutive flights at each gate.
#[pyfunction]
#[pyo3(signature = (schedule, gates, curve, weighted=false))]
fn robust_objective(schedule: &PySchedule, gates: Vec<usize>, curve: &PyCurve, weighted: bool) -> PyResult<f64> {
    let a = to_assignment(schedule, gates)?;
    core::objective_robust(&schedule.schedule, &a, &curve.0, weighted).map_err(err)
}

/// Monte Carlo days; returns summary statistics and per-run conflicts.
#[pyfunction]
#[pyo3(signature = (schedule, gates, runs=100, seed=1, arrival=None, turn_model=None))]
fn simulate<'py>(
    py: Python<'py>,
    schedule: &PySchedule,
    gates: Vec<usize>,
    runs: usize,
    seed: u64,
    arrival: Option<&PyDelay>,
    turn_model: Option<&PyTurn>,
) -> PyResult<Bound<'py, PyDict>> {
    let a = to_assignment(schedule, gates)?;
    let arr = arrival.map_or(core::DelayDistribution::REFERENCE_ARRIVAL, |d| d.0);
    let dep = core::DepartureModel::turn(turn_model.map_or(core::TurnModel::REFERENCE, |t| t.0));
    let out = core::simulate_many(&schedule.schedule, &a, &arr, &dep, runs, seed).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("flights", out.flights)?;
    d.set_item("mean_conflict_minutes", out.mean_conflict_minutes)?;
    d.set_item("std_conflict_minutes", out.std_conflict_minutes)?;
    d.set_item("mean_conflict_count", out.mean_conflict_count)?;
    d.set_item("std_conflict_count", out.std_conflict_count)?;
    d.set_item("minutes_per_aircraft", out.minutes_per_aircraft)?;
    d.set_item("conflicts_per_aircraft", out.conflicts_per_aircraft)?;
    d.set_item(
        "run_minutes",
        out.runs.iter().map(|r| r.total_conflict_minutes).collect::<Vec<_>>(),
    )?;
    d.set_item("run_counts", out.runs.iter().map(|r| r.conflict_count).collect::<Vec<_>>())?;
    Ok(d)
}

/// Solves once per alpha; returns `(alpha, transit, robust, gates)` tuples.
#[pyfunction]
#[pyo3(signature = (schedule, curve, ramp, alphas, buffer=15.0, seed=1, restarts=1))]
fn alpha_sweep(
    schedule: &PySchedule,
    curve: &PyCurve,
    ramp: &PyRamp,
    alphas: Vec<f64>,
    buffer: f64,
    seed: u64,
    restarts: usize,
) -> PyResult<Vec<(f64, f64, f64, Vec<usize>)>> {
    let cfg = solver_config(buffer, seed, restarts, 1.0)?;
    let points =
        core::alpha_sweep(&schedule.schedule, &cfg, &curve.0, &ramp.0, &schedule.transfers, &alphas).map_err(err)?;
    Ok(points
        .into_iter()
        .map(|p| (p.alpha, p.transit, p.robust, p.assignment.gate_of().to_vec()))
        .collect())
}

#[pymodule]
fn robust_gates_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDelay>()?;
    m.add_class::<PyTurn>()?;
    m.add_class::<PyCurve>()?;
    m.add_class::<PySchedule>()?;
    m.add_class::<PyRamp>()?;
    m.add_function(wrap_pyfunction!(conflict_exact, m)?)?;
    m.add_function(wrap_pyfunction!(greedy_assign, m)?)?;
    m.add_function(wrap_pyfunction!(tabu_assign, m)?)?;
    m.add_function(wrap_pyfunction!(robust_objective, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(alpha_sweep, m)?)?;
    Ok(())
}
