use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use robust_gates::optimizer::SolverConfig;
use robust_gates::schedule::GeneratorParams;
use robust_gates::transit::{HorseshoeArms, ParallelRamp};

/// Defaults that `--config` may override. Command-line flags win over both.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub solver: SolverConfig,
    pub generator: GeneratorParams,
    pub parallel_ramp: ParallelRamp,
    pub horseshoe: HorseshoeArms,
    /// Separation grid of the conflict-curve fit, in minutes.
    pub sep_grid_max: f64,
    pub sep_grid_step: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            solver: SolverConfig::default(),
            generator: GeneratorParams::default(),
            parallel_ramp: ParallelRamp::default(),
            horseshoe: HorseshoeArms::default(),
            sep_grid_max: 120.0,
            sep_grid_step: 5.0,
        }
    }
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            None => Ok(RunConfig::default()),
            Some(p) => robust_gates::io::read_json(p).with_context(|| format!("reading config {}", p.display())),
        }
    }
}
