use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::json;

use robust_gates::conflict::{fit_conflict_curve, separation_grid, ConflictCurve};
use robust_gates::delay_model::{fit_shifted_lognormal, fit_turn_model, DelayDistribution, TurnModel, TurnObservation};
use robust_gates::io::{
    read_delays_csv, read_json, read_schedule_csv, read_transfers_csv, write_schedule_csv, write_transfers_csv,
    AssignmentFile,
};
use robust_gates::manifest::RunManifest;
use robust_gates::optimizer::{
    alpha_sweep, exhaustive_solve, greedy_assign, is_feasible, min_gates_required, min_same_gate_separation,
    objective_robust, objective_transit, tabu_search, Assignment, Objective, SolverConfig, TransitInputs,
};
use robust_gates::rng::derive_seed;
use robust_gates::schedule::{generate_schedule, pair_turns, scale_traffic, GeneratorParams, Schedule, TransferMatrix};
use robust_gates::simulator::{separation_stats, simulate_many, DepartureModel, SimOutcome};
use robust_gates::transit::{make_horseshoe_ramp, ParallelRamp, RampConfig};

use crate::config::RunConfig;
use crate::output::{num, opt, OutDir};
use crate::{Cli, Command, CurveArgs, LayoutArg, Policy, ScheduleArgs, SimArgs};

/// Output of `fit`, read back by the curve and simulation commands.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DelayModelFile {
    pub arrival: DelayDistribution,
    pub departure: DelayDistribution,
    #[serde(default)]
    pub arrival_samples: usize,
    #[serde(default)]
    pub departure_samples: usize,
}

/// Output of `turnfit`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TurnModelFile {
    pub model: TurnModel,
    #[serde(default)]
    pub sse: f64,
    #[serde(default)]
    pub ratio_identified: bool,
    #[serde(default)]
    pub pairs: usize,
}

struct Ctx {
    seed: u64,
    out_dir: PathBuf,
    cfg: RunConfig,
}

impl Ctx {
    fn out(&self, command: &str, args: serde_json::Value) -> Result<OutDir> {
        let config = json!({ "run": self.cfg, "args": args });
        OutDir::new(&self.out_dir, RunManifest::new(command, self.seed, config))
    }

    fn solver(&self, buffer: Option<f64>, alpha: Option<f64>, restarts: Option<usize>) -> Result<SolverConfig> {
        let mut s = self.cfg.solver.clone();
        s.seed = self.seed;
        if let Some(b) = buffer {
            s.buffer_min = b;
        }
        if let Some(a) = alpha {
            s.alpha = a;
        }
        if let Some(r) = restarts {
            s.restarts = r;
        }
        s.validate()?;
        Ok(s)
    }
}

pub fn run(cli: Cli) -> Result<()> {
    let ctx = Ctx {
        seed: cli.seed,
        out_dir: cli.out_dir,
        cfg: RunConfig::load(cli.config.as_deref())?,
    };
    match cli.command {
        Command::Fit { delays, bin_width } => fit(&ctx, &delays, bin_width),
        Command::Turnfit { delays, bin_width } => turnfit(&ctx, &delays, bin_width),
        Command::ConflictCurve { delay_model, max, step } => conflict_curve(&ctx, delay_model.as_deref(), max, step),
        Command::GenSchedule { flights, gates, compact } => gen_schedule(&ctx, flights, gates, compact),
        Command::GenRamp {
            layout,
            gates,
            concourses,
        } => gen_ramp(&ctx, layout, gates, concourses),
        Command::Assign {
            schedule,
            models,
            policy,
            buffer,
            alpha,
            restarts,
            ramp,
            transfers,
        } => {
            let solver = ctx.solver(buffer, alpha, restarts)?;
            let transit = ramp.zip(transfers);
            assign(&ctx, &schedule, &models, policy, solver, transit)
        }
        Command::Simulate {
            schedule,
            assignment,
            delay_model,
            sim,
        } => simulate(&ctx, &schedule, &assignment, delay_model.as_deref(), &sim),
        Command::Tradeoff {
            schedule,
            models,
            ramp,
            transfers,
            alphas,
            restarts,
        } => {
            let solver = ctx.solver(None, None, restarts)?;
            tradeoff(&ctx, &schedule, &models, &ramp, &transfers, &alphas, solver)
        }
        Command::Pipeline {
            schedule,
            models,
            baseline,
            scales,
            buffer,
            sim,
        } => {
            let solver = ctx.solver(buffer, None, None)?;
            pipeline(&ctx, &schedule, &models, baseline.as_deref(), &scales, &sim, solver)
        }
    }
}

// ---------------------------------------------------------------------------
// Loading
// ---------------------------------------------------------------------------

fn load_schedule(args: &ScheduleArgs, out: &mut OutDir) -> Result<Schedule> {
    ensure!(args.gates > 0, "--gates must be positive");
    out.input(&args.schedule)?;
    read_schedule_csv(&args.schedule, args.gates).with_context(|| format!("loading schedule {}", args.schedule.display()))
}

/// `(departure, arrival)` laws from a `fit` output, or the reference laws.
fn load_laws(path: Option<&Path>, out: &mut OutDir) -> Result<(DelayDistribution, DelayDistribution)> {
    match path {
        None => Ok((DelayDistribution::REFERENCE_DEPARTURE, DelayDistribution::REFERENCE_ARRIVAL)),
        Some(p) => {
            out.input(p)?;
            let m: DelayModelFile = read_json(p).with_context(|| format!("loading delay model {}", p.display()))?;
            m.departure.validate()?;
            m.arrival.validate()?;
            Ok((m.departure, m.arrival))
        }
    }
}

fn load_turn_model(path: Option<&Path>, out: &mut OutDir) -> Result<TurnModel> {
    match path {
        None => Ok(TurnModel::REFERENCE),
        Some(p) => {
            out.input(p)?;
            let m: TurnModelFile = read_json(p).with_context(|| format!("loading turn model {}", p.display()))?;
            m.model.validate()?;
            Ok(m.model)
        }
    }
}

fn load_curve(ctx: &Ctx, args: &CurveArgs, out: &mut OutDir) -> Result<ConflictCurve> {
    if let Some(p) = &args.curve {
        out.input(p)?;
        let c: ConflictCurve = read_json(p).with_context(|| format!("loading conflict curve {}", p.display()))?;
        c.validate()?;
        return Ok(c);
    }
    let (dep, arr) = load_laws(args.delay_model.as_deref(), out)?;
    let grid = separation_grid(ctx.cfg.sep_grid_max, ctx.cfg.sep_grid_step);
    fit_conflict_curve(&dep, &arr, &grid).context("fitting the conflict curve")
}

fn load_transit(ramp: &Path, transfers: &Path, schedule: &Schedule, out: &mut OutDir) -> Result<(RampConfig, TransferMatrix)> {
    out.input(ramp)?;
    out.input(transfers)?;
    let r: RampConfig = read_json(ramp).with_context(|| format!("loading ramp {}", ramp.display()))?;
    r.validate()?;
    ensure!(
        r.gate_count() >= schedule.gate_count(),
        "ramp {} describes {} gates but the schedule uses {}",
        ramp.display(),
        r.gate_count(),
        schedule.gate_count()
    );
    let t = read_transfers_csv(transfers, schedule).with_context(|| format!("loading transfers {}", transfers.display()))?;
    Ok((r, t))
}

fn departures(model: TurnModel, sim: &SimArgs) -> DepartureModel {
    DepartureModel::Turn {
        model,
        draw_residual: !sim.no_residual,
    }
}

// ---------------------------------------------------------------------------
// Delay models
// ---------------------------------------------------------------------------

/// Rows `(lo, hi, count)` over bins of `width` covering `xs`.
fn histogram(xs: &[f64], width: f64) -> Vec<(f64, f64, usize)> {
    let lo = (xs.iter().copied().fold(f64::INFINITY, f64::min) / width).floor() * width;
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let bins = (((hi - lo) / width).floor() as usize) + 1;
    let mut counts = vec![0usize; bins];
    for &x in xs {
        counts[(((x - lo) / width).floor() as usize).min(bins - 1)] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(k, c)| (lo + k as f64 * width, lo + (k + 1) as f64 * width, c))
        .collect()
}

fn fit(ctx: &Ctx, delays: &Path, bin_width: f64) -> Result<()> {
    ensure!(bin_width > 0.0, "--bin-width must be positive");
    let mut out = ctx.out("fit", json!({ "delays": delays, "bin_width": bin_width }))?;
    out.input(delays)?;
    let records = read_delays_csv(delays)?;
    let arr_delays = records.arrival_delays();
    let dep_delays = records.departure_delays();
    let arrival = fit_shifted_lognormal(&arr_delays).context("fitting arrival delays")?;
    let departure = fit_shifted_lognormal(&dep_delays).context("fitting departure delays")?;

    let mut rows = Vec::new();
    for (kind, xs, law) in [("arrival", &arr_delays, &arrival), ("departure", &dep_delays, &departure)] {
        let n = xs.len() as f64;
        for (lo, hi, count) in histogram(xs, bin_width) {
            rows.push(vec![
                kind.to_owned(),
                num(lo),
                num(hi),
                count.to_string(),
                num(count as f64 / (n * bin_width)),
                num(law.pdf(0.5 * (lo + hi))),
            ]);
        }
    }
    out.json(
        "delay_model.json",
        &DelayModelFile {
            arrival,
            departure,
            arrival_samples: arr_delays.len(),
            departure_samples: dep_delays.len(),
        },
    )?;
    out.csv(
        "delay_histogram.csv",
        &["kind", "bin_lo_min", "bin_hi_min", "count", "density", "fitted_pdf_mid"],
        &rows,
    )?;
    println!(
        "arrival: mu={:.4} sigma={:.4} c={:.3} ({} delays)",
        arrival.mu,
        arrival.sigma,
        arrival.shift_c,
        arr_delays.len()
    );
    println!(
        "departure: mu={:.4} sigma={:.4} c={:.3} ({} delays)",
        departure.mu,
        departure.sigma,
        departure.shift_c,
        dep_delays.len()
    );
    out.finish()
}

fn turnfit(ctx: &Ctx, delays: &Path, bin_width: f64) -> Result<()> {
    ensure!(bin_width > 0.0, "--bin-width must be positive");
    let mut out = ctx.out("turnfit", json!({ "delays": delays, "bin_width": bin_width }))?;
    out.input(delays)?;
    let records = read_delays_csv(delays)?;
    let pairing = pair_turns(&records.arrivals, &records.departures);
    if pairing.matched == 0 {
        bail!("{}: no arrival matches a later departure of the same tail", delays.display());
    }
    if pairing.pairs.is_empty() {
        bail!("{}: all {} matched turns were filtered out", delays.display(), pairing.matched);
    }
    let obs: Vec<TurnObservation> = pairing
        .pairs
        .iter()
        .map(|p| TurnObservation {
            scheduled_dep: p.sched_dep,
            actual_arr: p.act_arr,
            dep_delay: p.dep_delay(),
        })
        .collect();
    let fit = fit_turn_model(&obs).context("fitting the turn model")?;

    let turns: Vec<f64> = pairing.pairs.iter().map(|p| p.scheduled_turn()).collect();
    let hist: Vec<Vec<String>> = histogram(&turns, bin_width)
        .into_iter()
        .map(|(lo, hi, c)| vec![num(lo), num(hi), c.to_string()])
        .collect();
    let retained = pairing.pairs.len();
    let report = [
        ("matched", pairing.matched),
        ("filtered_scheduled_turn", pairing.filtered_scheduled),
        ("filtered_actual_turn", pairing.filtered_actual),
        ("retained", retained),
        ("unmatched_arrivals", pairing.unmatched_arrivals),
        ("unmatched_departures", pairing.unmatched_departures),
    ];
    let report_rows: Vec<Vec<String>> = report.iter().map(|(k, v)| vec![k.to_string(), v.to_string()]).collect();

    out.json(
        "turn_model.json",
        &TurnModelFile {
            model: fit.model,
            sse: fit.sse,
            ratio_identified: fit.ratio_identified,
            pairs: retained,
        },
    )?;
    out.csv("turn_histogram.csv", &["sched_turn_lo_min", "sched_turn_hi_min", "count"], &hist)?;
    out.csv("turn_filter_report.csv", &["stage", "count"], &report_rows)?;
    println!(
        "{} pairs matched, {} filtered out, {} used",
        pairing.matched,
        pairing.matched - retained,
        retained
    );
    println!(
        "C={:.4} b={:.4} m={} residual_sigma={:.4}",
        fit.model.fixed_delay, fit.model.propagation_ratio, fit.model.min_turn, fit.model.residual_sigma
    );
    out.finish()
}

fn write_curve(out: &mut OutDir, curve: &ConflictCurve) -> Result<()> {
    let rows: Vec<Vec<String>> = curve
        .samples
        .iter()
        .map(|s| vec![num(s.sep_min), num(s.exact_min), num(curve.expected_duration(s.sep_min))])
        .collect();
    out.csv("conflict_curve.csv", &["sep_min", "exact_min", "fitted_min"], &rows)?;
    out.json("conflict_curve.json", curve)
}

fn conflict_curve(ctx: &Ctx, delay_model: Option<&Path>, max: Option<f64>, step: Option<f64>) -> Result<()> {
    let max = max.unwrap_or(ctx.cfg.sep_grid_max);
    let step = step.unwrap_or(ctx.cfg.sep_grid_step);
    ensure!(step > 0.0 && max > 0.0, "--max and --step must be positive");
    let mut out = ctx.out("conflict-curve", json!({ "delay_model": delay_model, "max": max, "step": step }))?;
    let (dep, arr) = load_laws(delay_model, &mut out)?;
    let curve = fit_conflict_curve(&dep, &arr, &separation_grid(max, step))?;
    write_curve(&mut out, &curve)?;
    println!("a={:.4} b={:.5}", curve.intercept_a, curve.base_b);
    out.finish()
}

// ---------------------------------------------------------------------------
// Instances
// ---------------------------------------------------------------------------

fn gen_schedule(ctx: &Ctx, flights: Option<usize>, gates: Option<usize>, compact: bool) -> Result<()> {
    let mut params = if compact {
        GeneratorParams::compact(ctx.cfg.generator.flights, ctx.cfg.generator.gates)
    } else {
        ctx.cfg.generator.clone()
    };
    if let Some(f) = flights {
        params.flights = f;
    }
    if let Some(g) = gates {
        params.gates = g;
    }
    let mut out = ctx.out("gen-schedule", json!({ "generator": params }))?;
    let (schedule, transfers) = generate_schedule(&params, ctx.seed)?;
    let mut buf = Vec::new();
    write_schedule_csv(&schedule, &mut buf)?;
    out.bytes("schedule.csv", buf)?;
    let mut buf = Vec::new();
    write_transfers_csv(&schedule, &transfers, &mut buf)?;
    out.bytes("transfers.csv", buf)?;
    println!(
        "{} flights, {} transfer pairs; at least {} gates needed at a {} min buffer",
        schedule.len(),
        transfers.len(),
        min_gates_required(&schedule, ctx.cfg.solver.buffer_min),
        ctx.cfg.solver.buffer_min
    );
    out.finish()
}

fn gen_ramp(ctx: &Ctx, layout: LayoutArg, gates: usize, concourses: Option<usize>) -> Result<()> {
    let mut out = ctx.out(
        "gen-ramp",
        json!({ "layout": format!("{layout:?}").to_lowercase(), "gates": gates, "concourses": concourses }),
    )?;
    let ramp = match layout {
        LayoutArg::Parallel => {
            let concourses = concourses.unwrap_or(ctx.cfg.parallel_ramp.concourses);
            ensure!(
                concourses > 0 && gates % concourses == 0,
                "--gates {gates} is not a multiple of {concourses} concourses"
            );
            ParallelRamp {
                gates_per_concourse: gates / concourses,
                concourses,
                ..ctx.cfg.parallel_ramp
            }
            .build()?
        }
        LayoutArg::Horseshoe => {
            ensure!(concourses.is_none(), "--concourses applies to parallel ramps only");
            make_horseshoe_ramp(gates, ctx.cfg.horseshoe, ctx.cfg.parallel_ramp.walk_speed)?
        }
    };
    out.json("ramp.json", &ramp)?;
    out.finish()
}

// ---------------------------------------------------------------------------
// Assignment
// ---------------------------------------------------------------------------

fn solve(
    schedule: &Schedule,
    policy: Policy,
    solver: &SolverConfig,
    curve: &ConflictCurve,
    transit: Option<TransitInputs<'_>>,
) -> Result<Assignment> {
    Ok(match policy {
        Policy::Greedy => greedy_assign(schedule, solver.buffer_min)?,
        Policy::Tabu => tabu_search(schedule, solver, curve, transit)?.assignment,
        Policy::Exhaustive => {
            let objective = match transit {
                None => Objective::Robust { curve, weighted: false },
                Some(transit) => Objective::Combined {
                    curve,
                    transit,
                    alpha: solver.alpha,
                },
            };
            exhaustive_solve(schedule, solver.buffer_min, |a| {
                objective.evaluate(schedule, a).unwrap_or(f64::INFINITY)
            })?
            .assignment
        }
    })
}

fn assign(
    ctx: &Ctx,
    args: &ScheduleArgs,
    models: &CurveArgs,
    policy: Policy,
    solver: SolverConfig,
    transit_paths: Option<(PathBuf, PathBuf)>,
) -> Result<()> {
    let mut out = ctx.out(
        "assign",
        json!({
            "schedule": args.schedule, "gates": args.gates, "policy": format!("{policy:?}").to_lowercase(),
            "curve": models.curve, "delay_model": models.delay_model, "solver": solver,
            "transit": transit_paths,
        }),
    )?;
    let schedule = load_schedule(args, &mut out)?;
    let curve = load_curve(ctx, models, &mut out)?;
    let transit = match &transit_paths {
        Some((r, t)) => Some(load_transit(r, t, &schedule, &mut out)?),
        None => None,
    };
    if transit.is_none() && solver.alpha < 1.0 && policy != Policy::Greedy {
        bail!("alpha {} weighs transit time; pass --ramp and --transfers", solver.alpha);
    }
    let inputs = transit.as_ref().map(|(ramp, transfers)| TransitInputs { ramp, transfers });
    let assignment = solve(&schedule, policy, &solver, &curve, inputs)?;

    let feas = is_feasible(&schedule, &assignment, solver.buffer_min)?;
    let seps = separation_stats(&schedule, &assignment)?;
    let mut report = vec![
        ("policy", format!("{policy:?}").to_lowercase()),
        ("flights", schedule.len().to_string()),
        ("gates", schedule.gate_count().to_string()),
        ("gates_used", assignment.gates_used().to_string()),
        ("buffer_min", num(solver.buffer_min)),
        ("buffer_violations", feas.violations.len().to_string()),
        ("min_separation_min", opt(min_same_gate_separation(&schedule, &assignment))),
        ("mean_separation_min", num(seps.mean)),
        ("robust_objective", num(objective_robust(&schedule, &assignment, &curve, false)?)),
        ("robust_weighted", num(objective_robust(&schedule, &assignment, &curve, true)?)),
    ];
    if let Some((ramp, transfers)) = &transit {
        report.push(("transit_objective", num(objective_transit(&schedule, &assignment, ramp, transfers)?)));
        report.push(("alpha", num(solver.alpha)));
    }
    let rows: Vec<Vec<String>> = report.iter().map(|(k, v)| vec![k.to_string(), v.clone()]).collect();

    out.json("assignment.json", &AssignmentFile::from_assignment(&schedule, &assignment))?;
    out.csv("objective_report.csv", &["metric", "value"], &rows)?;
    for (k, v) in &report {
        println!("{k}: {v}");
    }
    out.finish()
}

fn simulate(ctx: &Ctx, args: &ScheduleArgs, assignment: &Path, delay_model: Option<&Path>, sim: &SimArgs) -> Result<()> {
    ensure!(sim.runs > 0, "--runs must be positive");
    let mut out = ctx.out(
        "simulate",
        json!({
            "schedule": args.schedule, "gates": args.gates, "assignment": assignment,
            "delay_model": delay_model, "turn_model": sim.turn_model, "runs": sim.runs,
            "residual": !sim.no_residual,
        }),
    )?;
    let schedule = load_schedule(args, &mut out)?;
    out.input(assignment)?;
    let file: AssignmentFile = read_json(assignment).with_context(|| format!("loading {}", assignment.display()))?;
    let asg = file.to_assignment(&schedule)?;
    let (_, arr) = load_laws(delay_model, &mut out)?;
    let turn = load_turn_model(sim.turn_model.as_deref(), &mut out)?;
    let outcome = simulate_many(&schedule, &asg, &arr, &departures(turn, sim), sim.runs, ctx.seed)?;

    let rows: Vec<Vec<String>> = outcome
        .runs
        .iter()
        .enumerate()
        .map(|(r, o)| vec![r.to_string(), num(o.total_conflict_minutes), o.conflict_count.to_string()])
        .collect();
    out.json("simulation.json", &outcome)?;
    out.csv("simulation_runs.csv", &["run", "conflict_minutes", "conflict_count"], &rows)?;
    println!(
        "{} runs: conflict {:.3} +/- {:.3} min, {:.3} conflicts per day",
        sim.runs,
        outcome.mean_conflict_minutes,
        outcome.stderr_conflict_minutes(),
        outcome.mean_conflict_count
    );
    out.finish()
}

fn tradeoff(
    ctx: &Ctx,
    args: &ScheduleArgs,
    models: &CurveArgs,
    ramp: &Path,
    transfers: &Path,
    alphas: &[f64],
    solver: SolverConfig,
) -> Result<()> {
    ensure!(!alphas.is_empty(), "--alphas is empty");
    let mut out = ctx.out(
        "tradeoff",
        json!({
            "schedule": args.schedule, "gates": args.gates, "ramp": ramp, "transfers": transfers,
            "alphas": alphas, "curve": models.curve, "delay_model": models.delay_model, "solver": solver,
        }),
    )?;
    let schedule = load_schedule(args, &mut out)?;
    let curve = load_curve(ctx, models, &mut out)?;
    let (ramp, transfers) = load_transit(ramp, transfers, &schedule, &mut out)?;
    let points = alpha_sweep(&schedule, &solver, &curve, &ramp, &transfers, alphas)?;
    let rows: Vec<Vec<String>> = points
        .iter()
        .map(|p| vec![num(p.alpha), num(p.transit), num(p.robust), num(p.sum)])
        .collect();
    out.csv("tradeoff.csv", &["alpha", "transit", "robust", "sum"], &rows)?;
    for p in &points {
        println!("alpha {:.2}: transit {:.1}, robust {:.3}", p.alpha, p.transit, p.robust);
    }
    out.finish()
}

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

struct PolicyResult {
    scale: f64,
    policy: &'static str,
    flights: usize,
    gates_used: usize,
    violations: usize,
    robust: Option<f64>,
    sim: SimOutcome,
    sep_mean: f64,
    sep_std: f64,
}

impl PolicyResult {
    fn row(&self) -> Vec<String> {
        vec![
            num(self.scale),
            self.policy.to_owned(),
            self.flights.to_string(),
            self.gates_used.to_string(),
            num(self.sep_mean),
            num(self.sep_std),
            self.violations.to_string(),
            opt(self.robust),
            num(self.sim.mean_conflict_minutes),
            num(self.sim.std_conflict_minutes),
            num(self.sim.mean_conflict_count),
            num(self.sim.std_conflict_count),
            num(self.sim.minutes_per_aircraft),
            num(self.sim.conflicts_per_aircraft),
        ]
    }
}

const COMPARISON_HEADER: [&str; 14] = [
    "scale",
    "policy",
    "flights",
    "gates_used",
    "mean_separation_min",
    "std_separation_min",
    "buffer_violations",
    "robust_objective",
    "mean_conflict_min",
    "std_conflict_min",
    "mean_conflict_count",
    "std_conflict_count",
    "conflict_min_per_aircraft",
    "conflicts_per_aircraft",
];

fn pipeline(
    ctx: &Ctx,
    args: &ScheduleArgs,
    models: &CurveArgs,
    baseline: Option<&Path>,
    scales: &[f64],
    sim: &SimArgs,
    solver: SolverConfig,
) -> Result<()> {
    ensure!(!scales.is_empty(), "--scales is empty");
    ensure!(sim.runs > 0, "--runs must be positive");
    let mut out = ctx.out(
        "pipeline",
        json!({
            "schedule": args.schedule, "gates": args.gates, "baseline": baseline, "scales": scales,
            "curve": models.curve, "delay_model": models.delay_model, "turn_model": sim.turn_model,
            "runs": sim.runs, "residual": !sim.no_residual, "solver": solver,
        }),
    )?;
    let base = load_schedule(args, &mut out)?;
    let curve = load_curve(ctx, models, &mut out).context("stage: conflict curve")?;
    let arr = curve.arr_dist;
    let turn = load_turn_model(sim.turn_model.as_deref(), &mut out)?;
    let dep_model = departures(turn, sim);
    let baseline = match baseline {
        Some(p) => {
            out.input(p)?;
            let file: AssignmentFile = read_json(p).with_context(|| format!("loading baseline {}", p.display()))?;
            Some(file.to_assignment(&base).context("stage: baseline")?)
        }
        None => None,
    };

    let mut results = Vec::new();
    for (si, &scale) in scales.iter().enumerate() {
        let schedule = scale_traffic(&base, scale, ctx.seed).with_context(|| format!("stage: scale {scale}"))?;
        let sim_seed = derive_seed(ctx.seed, si as u64);
        let mut candidates: Vec<(&'static str, Assignment)> = Vec::new();
        for (name, policy) in [("greedy", Policy::Greedy), ("tabu", Policy::Tabu)] {
            let a = solve(&schedule, policy, &solver, &curve, None)
                .with_context(|| format!("stage: {name} assignment at scale {scale}"))?;
            candidates.push((name, a));
        }
        if let (Some(b), true) = (&baseline, scale == 1.0) {
            candidates.push(("baseline", b.clone()));
        }
        for (policy, a) in candidates {
            let violations = is_feasible(&schedule, &a, solver.buffer_min)?.violations.len();
            ensure!(
                policy == "baseline" || violations == 0,
                "{policy} assignment at scale {scale} breaks the buffer {violations} times"
            );
            let seps = separation_stats(&schedule, &a)?;
            let outcome = simulate_many(&schedule, &a, &arr, &dep_model, sim.runs, sim_seed)
                .with_context(|| format!("stage: simulating {policy} at scale {scale}"))?;
            results.push(PolicyResult {
                scale,
                policy,
                flights: schedule.len(),
                gates_used: a.gates_used(),
                violations,
                robust: objective_robust(&schedule, &a, &curve, false).ok(),
                sep_mean: seps.mean,
                sep_std: seps.std,
                sim: outcome,
            });
        }
    }

    let rows: Vec<Vec<String>> = results.iter().map(PolicyResult::row).collect();
    let mut series = Vec::new();
    for r in &results {
        for (gate, seps) in r.sim.gate_separations.iter().enumerate() {
            for s in seps {
                series.push(vec![num(r.scale), r.policy.to_owned(), gate.to_string(), num(*s)]);
            }
        }
    }
    write_curve(&mut out, &curve)?;
    out.csv("pipeline_comparison.csv", &COMPARISON_HEADER, &rows)?;
    out.csv("pipeline_separations.csv", &["scale", "policy", "gate", "separation_min"], &series)?;
    println!("scale  policy    sep_mean  conflict_min  conflicts  violations");
    for r in &results {
        println!(
            "{:<5}  {:<8}  {:>8.1}  {:>12.2}  {:>9.2}  {:>10}",
            r.scale, r.policy, r.sep_mean, r.sim.mean_conflict_minutes, r.sim.mean_conflict_count, r.violations
        );
    }
    out.finish()
}
