//! Expected gate-conflict duration as a function of planned gate separation.
//!
//! For a departing flight `i` and the next arrival `k` on the same gate, the
//! conflict lasts `max(0, dly_d(i) - dly_a(k) - sep)` minutes. With independent
//! shifted log-normal delays its expectation depends on the schedule only
//! through `z = sep - c_d + c_a` and equals
//!
//! ```text
//! ∫_0^∞ ∫_{y+z}^∞ (x - y - z) f_dep(x) f_arr(y) dx dy
//! ```
//!
//! over the unshifted densities. The exact value is computed by iterated
//! adaptive quadrature (in log coordinates, where both integrands are
//! Gaussian bumps); the optimizer uses the exponential surrogate `a * b^sep`.

use std::cell::Cell;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::delay_model::{standard_normal_quantile, DelayDistribution};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadOptions};

/// Planned gap between a scheduled departure and the next scheduled arrival
/// on the same gate. Negative when the two occupancies overlap.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SeparationMinutes(pub f64);

impl From<f64> for SeparationMinutes {
    fn from(v: f64) -> Self {
        SeparationMinutes(v)
    }
}

impl SeparationMinutes {
    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConflictOptions {
    /// Each log-normal is truncated at its `tail_probability` and
    /// `1 - tail_probability` quantiles.
    pub tail_probability: f64,
    /// Target absolute error of the double integral, in minutes.
    pub abs_tol: f64,
}

impl Default for ConflictOptions {
    fn default() -> Self {
        ConflictOptions {
            tail_probability: 1e-8,
            abs_tol: 1e-4,
        }
    }
}

pub fn expected_conflict_duration_exact(
    dep: &DelayDistribution,
    arr: &DelayDistribution,
    sep: SeparationMinutes,
) -> Result<f64> {
    expected_conflict_duration_exact_with(dep, arr, sep, &ConflictOptions::default())
}

pub fn expected_conflict_duration_exact_with(
    dep: &DelayDistribution,
    arr: &DelayDistribution,
    sep: SeparationMinutes,
    opts: &ConflictOptions,
) -> Result<f64> {
    dep.validate()?;
    arr.validate()?;
    if !sep.0.is_finite() {
        return Err(Error::InvalidParameter(format!("non-finite separation {}", sep.0)));
    }
    if !(opts.tail_probability > 0.0 && opts.tail_probability < 0.5 && opts.abs_tol > 0.0) {
        return Err(Error::InvalidParameter("bad conflict quadrature options".into()));
    }
    let z = sep.0 - dep.shift_c + arr.shift_c;
    let q = -standard_normal_quantile(opts.tail_probability);

    let gauss = |t: f64, mu: f64, sigma: f64| {
        let s = (t - mu) / sigma;
        (-0.5 * s * s).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt())
    };

    let (u_lo, u_hi) = (dep.mu - q * dep.sigma, dep.mu + q * dep.sigma);
    let (v_lo, v_hi) = (arr.mu - q * arr.sigma, arr.mu + q * arr.sigma);

    let inner_opts = QuadOptions {
        abs_tol: opts.abs_tol * 1e-4,
        rel_tol: 1e-10,
        max_intervals: 400,
    };
    let outer_opts = QuadOptions {
        abs_tol: opts.abs_tol * 1e-2,
        rel_tol: 1e-10,
        max_intervals: 400,
    };

    let inner_failure: Cell<Option<Error>> = Cell::new(None);

    // Inner integral over the departure delay x = e^u > max(0, k).
    let excess = |k: f64| -> f64 {
        let lower = if k > 0.0 { k.ln().max(u_lo) } else { u_lo };
        if lower >= u_hi {
            return 0.0;
        }
        match integrate(|u| (u.exp() - k) * gauss(u, dep.mu, dep.sigma), lower, u_hi, &inner_opts) {
            Ok(r) => r.value.max(0.0),
            Err(e) => {
                inner_failure.set(Some(e));
                0.0
            }
        }
    };

    // Outer integral over the arrival delay y = e^v.
    let outer = integrate(|v| gauss(v, arr.mu, arr.sigma) * excess(v.exp() + z), v_lo, v_hi, &outer_opts)?;
    if let Some(e) = inner_failure.take() {
        return Err(e);
    }
    if outer.error > opts.abs_tol {
        return Err(Error::QuadratureNonConvergence {
            error_estimate: outer.error,
            tolerance: opts.abs_tol,
        });
    }
    Ok(outer.value.max(0.0))
}

/// Exact integral value at one grid separation, kept with a fitted curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub sep_min: f64,
    pub exact_min: f64,
}

/// Exponential surrogate `a * b^sep` of the expected conflict duration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConflictCurve {
    pub intercept_a: f64,
    pub base_b: f64,
    pub dep_dist: DelayDistribution,
    pub arr_dist: DelayDistribution,
    #[serde(default)]
    pub samples: Vec<CurveSample>,
}

impl ConflictCurve {
    pub fn new(intercept_a: f64, base_b: f64, dep_dist: DelayDistribution, arr_dist: DelayDistribution) -> Result<Self> {
        let curve = ConflictCurve {
            intercept_a,
            base_b,
            dep_dist,
            arr_dist,
            samples: Vec::new(),
        };
        curve.validate()?;
        Ok(curve)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.intercept_a.is_finite() && self.intercept_a >= 0.0) {
            return Err(Error::InvalidParameter(format!("intercept a = {} must be >= 0", self.intercept_a)));
        }
        if !(self.base_b > 0.0 && self.base_b < 1.0) {
            return Err(Error::InvalidParameter(format!("base b = {} must lie in (0, 1)", self.base_b)));
        }
        Ok(())
    }

    /// Surrogate expected conflict duration at `sep` minutes.
    #[inline]
    pub fn expected_duration(&self, sep: f64) -> f64 {
        self.intercept_a * self.base_b.powf(sep)
    }
}

pub fn expected_conflict_duration_fast(curve: &ConflictCurve, sep: SeparationMinutes) -> f64 {
    curve.expected_duration(sep.0)
}

/// `0, step, 2*step, ..., max` (inclusive when `max` is a multiple of `step`).
pub fn separation_grid(max: f64, step: f64) -> Vec<f64> {
    let n = (max / step + 1e-9).floor() as usize;
    (0..=n).map(|k| k as f64 * step).collect()
}

pub fn fit_conflict_curve(dep: &DelayDistribution, arr: &DelayDistribution, sep_grid: &[f64]) -> Result<ConflictCurve> {
    fit_conflict_curve_with(dep, arr, sep_grid, &ConflictOptions::default())
}

pub fn fit_conflict_curve_with(
    dep: &DelayDistribution,
    arr: &DelayDistribution,
    sep_grid: &[f64],
    opts: &ConflictOptions,
) -> Result<ConflictCurve> {
    if sep_grid.len() < 5 {
        return Err(Error::InvalidParameter(format!(
            "separation grid needs at least 5 points, got {}",
            sep_grid.len()
        )));
    }
    let lo = sep_grid.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = sep_grid.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(hi - lo >= 60.0) {
        return Err(Error::InvalidParameter(format!(
            "separation grid must span at least 60 minutes, spans {}",
            hi - lo
        )));
    }
    let exact: Vec<f64> = sep_grid
        .par_iter()
        .map(|&s| expected_conflict_duration_exact_with(dep, arr, SeparationMinutes(s), opts))
        .collect::<Result<_>>()?;
    let (a, b) = fit_exponential(sep_grid, &exact)?;
    let mut curve = ConflictCurve::new(a, b, *dep, *arr)?;
    curve.samples = sep_grid
        .iter()
        .zip(&exact)
        .map(|(&sep_min, &exact_min)| CurveSample { sep_min, exact_min })
        .collect();
    Ok(curve)
}

/// Least-squares fit of `v ≈ a * b^s` in linear space.
///
/// For fixed `b` the optimal `a` is closed form, so the residual is
/// profiled over `b` alone: a coarse scan of `(0, 1)` followed by
/// golden-section refinement.
pub fn fit_exponential(seps: &[f64], values: &[f64]) -> Result<(f64, f64)> {
    if seps.len() != values.len() || seps.len() < 2 {
        return Err(Error::FitFailure("need at least two (sep, value) points".into()));
    }
    if values.iter().all(|&v| v < 1e-9) {
        return Err(Error::FitFailure("all conflict durations are below 1e-9 minutes".into()));
    }
    if values.iter().chain(seps).any(|v| !v.is_finite()) {
        return Err(Error::FitFailure("non-finite input".into()));
    }
    let best_a = |b: f64| {
        let mut num = 0.0;
        let mut den = 0.0;
        for (&s, &v) in seps.iter().zip(values) {
            let p = b.powf(s);
            num += v * p;
            den += p * p;
        }
        if den > 0.0 {
            (num / den).max(0.0)
        } else {
            0.0
        }
    };
    let sse = |b: f64| {
        let a = best_a(b);
        seps.iter()
            .zip(values)
            .map(|(&s, &v)| (v - a * b.powf(s)).powi(2))
            .sum::<f64>()
    };

    const LO: f64 = 1e-3;
    const HI: f64 = 1.0 - 1e-9;
    let n: usize = 2000;
    let step = (HI - LO) / n as f64;
    let mut best_k: usize = 0;
    let mut best_v = f64::INFINITY;
    for k in 0..=n {
        let v = sse(LO + step * k as f64);
        if v < best_v {
            best_v = v;
            best_k = k;
        }
    }
    let a_lo = LO + step * best_k.saturating_sub(1) as f64;
    let a_hi = (LO + step * (best_k + 1) as f64).min(HI);
    let b = crate::delay_model::golden_section_max(|b| -sse(b), a_lo, a_hi, 1e-14);
    let a = best_a(b);
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::FitFailure(format!("degenerate intercept {a}")));
    }
    Ok((a, b))
}
