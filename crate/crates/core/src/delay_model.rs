//! Gate-delay distributions and the turn-time delay propagation model.
//!
//! Arrival and departure delays follow a shifted log-normal law: the delay
//! minus a (usually negative) shift `c` is log-normal with log-mean `mu` and
//! log-standard-deviation `sigma`. Departure delays of a turning aircraft
//! are related to its arrival through a piecewise-linear model with a
//! minimum turn time `m` below which lost turn time propagates at ratio `b`.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::rng;

/// Minimum sample count accepted by the fitting routines.
pub const MIN_FIT_SAMPLES: usize = 30;

const SIGMA_FLOOR: f64 = 1e-9;

/// Shifted log-normal delay law, in minutes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DelayDistribution {
    pub mu: f64,
    pub sigma: f64,
    pub shift_c: f64,
}

/// One delay draw in minutes; negative values are early operations.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct DelaySample {
    pub value: f64,
}

impl DelayDistribution {
    /// Reference departure-delay law.
    pub const REFERENCE_DEPARTURE: DelayDistribution = DelayDistribution {
        mu: 1.802,
        sigma: 1.242,
        shift_c: -5.275,
    };

    /// Reference arrival-delay law.
    pub const REFERENCE_ARRIVAL: DelayDistribution = DelayDistribution {
        mu: 3.812,
        sigma: 0.2814,
        shift_c: -49.0,
    };

    pub fn new(mu: f64, sigma: f64, shift_c: f64) -> Result<Self> {
        let dist = DelayDistribution { mu, sigma, shift_c };
        dist.validate()?;
        Ok(dist)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu.is_finite() && self.shift_c.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "non-finite delay parameters mu={} c={}",
                self.mu, self.shift_c
            )));
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sigma must be positive, got {}",
                self.sigma
            )));
        }
        Ok(())
    }

    /// The same law with zero shift, i.e. the plain log-normal part.
    pub fn unshifted(&self) -> Self {
        DelayDistribution {
            shift_c: 0.0,
            ..*self
        }
    }

    /// Probability density at `x` minutes. Zero on `(-inf, shift_c]`.
    pub fn pdf(&self, x: f64) -> f64 {
        let t = x - self.shift_c;
        if !(t > 0.0) {
            return 0.0;
        }
        let sigma = self.sigma.max(SIGMA_FLOOR);
        let z = (t.ln() - self.mu) / sigma;
        (-0.5 * z * z).exp() / (t * sigma * (2.0 * PI).sqrt())
    }

    pub fn ln_pdf(&self, x: f64) -> f64 {
        let t = x - self.shift_c;
        if !(t > 0.0) {
            return f64::NEG_INFINITY;
        }
        let sigma = self.sigma.max(SIGMA_FLOOR);
        let lt = t.ln();
        let z = (lt - self.mu) / sigma;
        -0.5 * z * z - lt - sigma.ln() - 0.5 * (2.0 * PI).ln()
    }

    pub fn mean(&self) -> f64 {
        (self.mu + 0.5 * self.sigma * self.sigma).exp() + self.shift_c
    }

    pub fn median(&self) -> f64 {
        self.mu.exp() + self.shift_c
    }

    pub fn variance(&self) -> f64 {
        let s2 = self.sigma * self.sigma;
        (s2.exp() - 1.0) * (2.0 * self.mu + s2).exp()
    }

    /// The `p`-quantile, for `p` in `(0, 1)`.
    pub fn quantile(&self, p: f64) -> f64 {
        (self.mu + self.sigma * standard_normal_quantile(p)).exp() + self.shift_c
    }

    /// Draws one delay from `rng`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> DelaySample {
        let z: f64 = StandardNormal.sample(rng);
        let mut value = (self.mu + self.sigma * z).exp() + self.shift_c;
        if value <= self.shift_c {
            value = self.shift_c.next_up();
        }
        DelaySample { value }
    }
}

/// Draws a single delay from the seeded sampling stream.
pub fn sample_delay(dist: &DelayDistribution, seed: u64) -> DelaySample {
    let mut rng = rng::stream(seed, rng::stage::SAMPLING);
    dist.sample(&mut rng)
}

pub(crate) fn standard_normal_quantile(p: f64) -> f64 {
    Normal::standard().inverse_cdf(p)
}

/// Search window for the shift parameter of [`fit_shifted_lognormal`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Smallest gap between the shift and the smallest observation.
    pub min_offset: f64,
    /// Largest gap between the shift and the smallest observation.
    pub max_offset: f64,
    /// Number of log-spaced grid points scanned before golden-section refinement.
    pub grid_points: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            min_offset: 1e-4,
            max_offset: 200.0,
            grid_points: 241,
        }
    }
}

/// Maximum-likelihood fit of a shifted log-normal law.
pub fn fit_shifted_lognormal(delays: &[f64]) -> Result<DelayDistribution> {
    fit_shifted_lognormal_with(delays, &FitOptions::default())
}

/// Profile-likelihood fit: for a candidate shift the MLE of `mu` and `sigma`
/// is closed form, so only the shift is searched numerically.
pub fn fit_shifted_lognormal_with(delays: &[f64], opts: &FitOptions) -> Result<DelayDistribution> {
    if delays.len() < MIN_FIT_SAMPLES {
        return Err(Error::TooFewSamples {
            got: delays.len(),
            need: MIN_FIT_SAMPLES,
        });
    }
    if delays.iter().any(|x| !x.is_finite()) {
        return Err(Error::DegenerateData("non-finite delay value".into()));
    }
    let min = delays.iter().copied().fold(f64::INFINITY, f64::min);
    let max = delays.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max - min <= 0.0 {
        return Err(Error::DegenerateData("all delays are equal".into()));
    }
    if !(opts.min_offset > 0.0 && opts.max_offset > opts.min_offset && opts.grid_points >= 3) {
        return Err(Error::InvalidParameter("bad shift search window".into()));
    }

    // Search over u = ln(min - c).
    let profile = |u: f64| profile_log_likelihood(delays, min - u.exp()).0;
    let lo = opts.min_offset.ln();
    let hi = opts.max_offset.ln();
    let step = (hi - lo) / (opts.grid_points - 1) as f64;
    let mut best_idx = 0;
    let mut best_val = f64::NEG_INFINITY;
    for k in 0..opts.grid_points {
        let v = profile(lo + step * k as f64);
        if v > best_val {
            best_val = v;
            best_idx = k;
        }
    }
    let a = lo + step * best_idx.saturating_sub(1) as f64;
    let b = lo + step * (best_idx + 1).min(opts.grid_points - 1) as f64;
    let u = golden_section_max(profile, a, b, 1e-10);
    let shift_c = min - u.exp();
    let (_, mu, sigma) = profile_log_likelihood(delays, shift_c);
    DelayDistribution::new(mu, sigma.max(SIGMA_FLOOR), shift_c)
}

/// Returns `(log-likelihood, mu_hat, sigma_hat)` at shift `c`.
fn profile_log_likelihood(data: &[f64], c: f64) -> (f64, f64, f64) {
    let n = data.len() as f64;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for &x in data {
        let l = (x - c).ln();
        sum += l;
        sum_sq += l * l;
    }
    let mu = sum / n;
    let var = (sum_sq / n - mu * mu).max(0.0);
    if var <= 0.0 || !mu.is_finite() {
        return (f64::NEG_INFINITY, mu, 0.0);
    }
    let sigma = var.sqrt();
    let ll = -sum - n * sigma.ln() - 0.5 * n * ((2.0 * PI).ln() + 1.0);
    (ll, mu, sigma)
}

pub(crate) fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Departure delay model of a turning aircraft:
/// `delay = C + b * max(0, m - available_turn) + e`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurnModel {
    #[serde(rename = "C")]
    pub fixed_delay: f64,
    #[serde(rename = "b")]
    pub propagation_ratio: f64,
    #[serde(rename = "m")]
    pub min_turn: f64,
    pub residual_sigma: f64,
}

impl TurnModel {
    /// Reference turn model. No residual spread is known, so
    /// the reference residual is zero.
    pub const REFERENCE: TurnModel = TurnModel {
        fixed_delay: 3.379,
        propagation_ratio: 0.96,
        min_turn: 48.0,
        residual_sigma: 0.0,
    };

    pub fn new(fixed_delay: f64, propagation_ratio: f64, min_turn: f64, residual_sigma: f64) -> Result<Self> {
        let model = TurnModel {
            fixed_delay,
            propagation_ratio,
            min_turn,
            residual_sigma,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.fixed_delay, self.propagation_ratio, self.min_turn, self.residual_sigma]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParameter("non-finite turn model parameter".into()));
        }
        if self.propagation_ratio < 0.0 || self.min_turn < 0.0 || self.residual_sigma < 0.0 {
            return Err(Error::InvalidParameter(
                "turn model needs b >= 0, m >= 0 and residual_sigma >= 0".into(),
            ));
        }
        Ok(())
    }

    /// Departure delay for an aircraft that actually arrived at `actual_arr`
    /// and is scheduled out at `scheduled_dep`.
    pub fn propagate_delay(&self, scheduled_dep: f64, actual_arr: f64, residual: f64) -> f64 {
        let available_turn = scheduled_dep - actual_arr;
        self.fixed_delay + self.propagation_ratio * (self.min_turn - available_turn).max(0.0) + residual
    }

    /// Draws a residual `e ~ N(0, residual_sigma)`.
    pub fn sample_residual<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if self.residual_sigma == 0.0 {
            return 0.0;
        }
        let z: f64 = StandardNormal.sample(rng);
        self.residual_sigma * z
    }
}

/// One observed turn used to fit a [`TurnModel`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurnObservation {
    pub scheduled_dep: f64,
    pub actual_arr: f64,
    pub dep_delay: f64,
}

impl TurnObservation {
    pub fn available_turn(&self) -> f64 {
        self.scheduled_dep - self.actual_arr
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurnFit {
    pub model: TurnModel,
    pub sse: f64,
    /// False when no observation falls below the chosen breakpoint, in which
    /// case `b` cannot be estimated and is reported as zero.
    pub ratio_identified: bool,
}

/// Largest breakpoint scanned by [`fit_turn_model`], in minutes.
pub const MAX_BREAKPOINT: u32 = 200;

/// Least-squares fit with an exhaustive integer-minute breakpoint scan.
pub fn fit_turn_model(pairs: &[TurnObservation]) -> Result<TurnFit> {
    if pairs.len() < MIN_FIT_SAMPLES {
        return Err(Error::TooFewSamples {
            got: pairs.len(),
            need: MIN_FIT_SAMPLES,
        });
    }
    if pairs
        .iter()
        .any(|p| !(p.scheduled_dep.is_finite() && p.actual_arr.is_finite() && p.dep_delay.is_finite()))
    {
        return Err(Error::DegenerateData("non-finite turn observation".into()));
    }
    let n = pairs.len() as f64;
    let y_mean = pairs.iter().map(|p| p.dep_delay).sum::<f64>() / n;
    let syy: f64 = pairs.iter().map(|p| (p.dep_delay - y_mean).powi(2)).sum();

    let mut best: Option<(f64, f64, f64, u32, bool)> = None;
    for m in 0..=MAX_BREAKPOINT {
        let mf = m as f64;
        let short = |p: &TurnObservation| (mf - p.available_turn()).max(0.0);
        let x_mean = pairs.iter().map(short).sum::<f64>() / n;
        let mut sxx = 0.0;
        let mut sxy = 0.0;
        for p in pairs {
            let dx = short(p) - x_mean;
            sxx += dx * dx;
            sxy += dx * (p.dep_delay - y_mean);
        }
        let (c, b, sse, identified) = if sxx > 0.0 {
            let b = sxy / sxx;
            if b >= 0.0 {
                (y_mean - b * x_mean, b, (syy - b * sxy).max(0.0), true)
            } else {
                (y_mean, 0.0, syy, true)
            }
        } else {
            (y_mean, 0.0, syy, false)
        };
        let better = match best {
            None => true,
            Some((_, _, best_sse, _, _)) => sse < best_sse - 1e-12 * (1.0 + best_sse),
        };
        if better {
            best = Some((c, b, sse, m, identified));
        }
    }
    let (c, b, _, m, identified) = best.expect("breakpoint grid is non-empty");

    // Recompute residuals directly rather than trusting the normal-equation SSE.
    let model_no_resid = TurnModel {
        fixed_delay: c,
        propagation_ratio: b,
        min_turn: m as f64,
        residual_sigma: 0.0,
    };
    let sse: f64 = pairs
        .iter()
        .map(|p| (p.dep_delay - model_no_resid.propagate_delay(p.scheduled_dep, p.actual_arr, 0.0)).powi(2))
        .sum();
    Ok(TurnFit {
        model: TurnModel {
            residual_sigma: (sse / n).sqrt(),
            ..model_no_resid
        },
        sse,
        ratio_identified: identified,
    })
}
