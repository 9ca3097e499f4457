//! Ramp geometry: walking distances from the security checkpoint and the
//! baggage claim to each gate, gate-to-gate distances, and passenger speed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layout {
    Parallel,
    Horseshoe,
    Custom,
}

/// Distances are in metres, speed in metres per minute.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RampConfig {
    pub gate_positions: Vec<[f64; 2]>,
    pub checkpoint_dist: Vec<f64>,
    pub baggage_dist: Vec<f64>,
    pub gate_to_gate: Vec<Vec<f64>>,
    pub walk_speed: f64,
    pub layout_tag: Layout,
}

impl RampConfig {
    pub fn gate_count(&self) -> usize {
        self.checkpoint_dist.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.checkpoint_dist.len();
        if n == 0 {
            return Err(Error::BadDimensions("ramp has no gates".into()));
        }
        if self.baggage_dist.len() != n || self.gate_to_gate.len() != n || self.gate_positions.len() != n {
            return Err(Error::BadDimensions(format!(
                "inconsistent gate counts: positions {}, checkpoint {}, baggage {}, matrix {}",
                self.gate_positions.len(),
                n,
                self.baggage_dist.len(),
                self.gate_to_gate.len()
            )));
        }
        if !(self.walk_speed.is_finite() && self.walk_speed > 0.0) {
            return Err(Error::BadDimensions(format!("walk speed {} must be positive", self.walk_speed)));
        }
        for (j, row) in self.gate_to_gate.iter().enumerate() {
            if row.len() != n {
                return Err(Error::BadDimensions(format!("distance row {j} has {} entries", row.len())));
            }
            if row[j] != 0.0 {
                return Err(Error::BadDimensions(format!("nonzero diagonal at gate {j}")));
            }
            for (l, &d) in row.iter().enumerate() {
                if !(d.is_finite() && d >= 0.0) {
                    return Err(Error::BadDimensions(format!("bad distance d[{j}][{l}] = {d}")));
                }
                if d != self.gate_to_gate[l][j] {
                    return Err(Error::BadDimensions(format!("asymmetric distance between gates {j} and {l}")));
                }
            }
        }
        let dists = self.checkpoint_dist.iter().chain(&self.baggage_dist);
        if dists.into_iter().any(|d| !(d.is_finite() && *d >= 0.0)) {
            return Err(Error::BadDimensions("negative or non-finite terminal distance".into()));
        }
        Ok(())
    }

    /// True when `d[j][l] <= d[j][m] + d[m][l]` for all gate triples.
    pub fn satisfies_triangle_inequality(&self, tol: f64) -> bool {
        let d = &self.gate_to_gate;
        let n = d.len();
        (0..n).all(|j| (0..n).all(|l| (0..n).all(|m| d[j][l] <= d[j][m] + d[m][l] + tol)))
    }

    /// Copy with every distance multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> RampConfig {
        RampConfig {
            gate_positions: self.gate_positions.iter().map(|p| [p[0] * factor, p[1] * factor]).collect(),
            checkpoint_dist: self.checkpoint_dist.iter().map(|d| d * factor).collect(),
            baggage_dist: self.baggage_dist.iter().map(|d| d * factor).collect(),
            gate_to_gate: self
                .gate_to_gate
                .iter()
                .map(|row| row.iter().map(|d| d * factor).collect())
                .collect(),
            walk_speed: self.walk_speed,
            layout_tag: self.layout_tag,
        }
    }
}

/// Parallel concourses served from the terminal by a people mover.
///
/// Concourse `c` is a straight row of gates centred on its mover station,
/// which sits `(c + 1) * concourse_gap` metres from the terminal. Mover
/// legs are converted to walking-equivalent metres by the ratio
/// `walk_speed / mover_speed`. The checkpoint and baggage claim are both
/// in the terminal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ParallelRamp {
    pub gates_per_concourse: usize,
    pub concourses: usize,
    pub gate_pitch: f64,
    pub concourse_gap: f64,
    pub walk_speed: f64,
    pub mover_speed: f64,
}

impl Default for ParallelRamp {
    fn default() -> Self {
        ParallelRamp {
            gates_per_concourse: 18,
            concourses: 2,
            gate_pitch: 50.0,
            concourse_gap: 300.0,
            walk_speed: 60.0,
            mover_speed: 300.0,
        }
    }
}

impl ParallelRamp {
    pub fn build(&self) -> Result<RampConfig> {
        if self.gates_per_concourse == 0 || self.concourses == 0 {
            return Err(Error::BadDimensions("need at least one gate and one concourse".into()));
        }
        let positive = [self.gate_pitch, self.concourse_gap, self.walk_speed, self.mover_speed];
        if positive.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::BadDimensions("pitch, gap and speeds must be positive".into()));
        }
        let connector = self.concourse_gap * self.walk_speed / self.mover_speed;
        let n = self.gates_per_concourse;
        let mut concourse = Vec::new();
        let mut offset = Vec::new();
        let mut positions = Vec::new();
        for c in 0..self.concourses {
            for g in 0..n {
                let x = (g as f64 - (n as f64 - 1.0) / 2.0) * self.gate_pitch;
                concourse.push(c);
                offset.push(x);
                positions.push([x, (c + 1) as f64 * self.concourse_gap]);
            }
        }
        let total = concourse.len();
        let mut d = vec![vec![0.0; total]; total];
        for j in 0..total {
            for l in 0..total {
                if j == l {
                    continue;
                }
                d[j][l] = if concourse[j] == concourse[l] {
                    (offset[j] - offset[l]).abs()
                } else {
                    offset[j].abs() + offset[l].abs() + concourse[j].abs_diff(concourse[l]) as f64 * connector
                };
            }
        }
        let terminal: Vec<f64> = (0..total)
            .map(|j| offset[j].abs() + (concourse[j] + 1) as f64 * connector)
            .collect();
        let ramp = RampConfig {
            gate_positions: positions,
            checkpoint_dist: terminal.clone(),
            baggage_dist: terminal,
            gate_to_gate: d,
            walk_speed: self.walk_speed,
            layout_tag: Layout::Parallel,
        };
        ramp.validate()?;
        Ok(ramp)
    }
}

pub fn make_parallel_ramp(
    gates_per_concourse: usize,
    concourses: usize,
    gate_pitch: f64,
    concourse_gap: f64,
    walk_speed: f64,
) -> Result<RampConfig> {
    ParallelRamp {
        gates_per_concourse,
        concourses,
        gate_pitch,
        concourse_gap,
        walk_speed,
        ..Default::default()
    }
    .build()
}

/// Lengths of the three horseshoe segments, in metres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HorseshoeArms {
    pub left: f64,
    pub base: f64,
    pub right: f64,
}

impl Default for HorseshoeArms {
    fn default() -> Self {
        HorseshoeArms {
            left: 400.0,
            base: 200.0,
            right: 400.0,
        }
    }
}

impl HorseshoeArms {
    pub fn path_length(&self) -> f64 {
        self.left + self.base + self.right
    }

    /// Planar position at arc length `s` along left arm, base, right arm.
    fn point(&self, s: f64) -> [f64; 2] {
        if s <= self.left {
            [0.0, self.left - s]
        } else if s <= self.left + self.base {
            [s - self.left, 0.0]
        } else {
            [self.base, s - self.left - self.base]
        }
    }
}

/// Gates evenly spaced along a U-shaped walkway, tip to tip. Distances are
/// measured along the walkway; the terminal sits at the middle of the base.
pub fn make_horseshoe_ramp(gates: usize, arms: HorseshoeArms, walk_speed: f64) -> Result<RampConfig> {
    if gates < 2 {
        return Err(Error::BadDimensions("a horseshoe needs at least two gates".into()));
    }
    let lengths = [arms.left, arms.base, arms.right, walk_speed];
    if lengths.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::BadDimensions("arm lengths and walk speed must be positive".into()));
    }
    let total = arms.path_length();
    let pitch = total / (gates - 1) as f64;
    let arc: Vec<f64> = (0..gates).map(|g| g as f64 * pitch).collect();
    let terminal_at = arms.left + arms.base / 2.0;
    let terminal: Vec<f64> = arc.iter().map(|s| (s - terminal_at).abs()).collect();
    let d = arc
        .iter()
        .map(|sj| arc.iter().map(|sl| (sj - sl).abs()).collect())
        .collect();
    let ramp = RampConfig {
        gate_positions: arc.iter().map(|&s| arms.point(s)).collect(),
        checkpoint_dist: terminal.clone(),
        baggage_dist: terminal,
        gate_to_gate: d,
        walk_speed,
        layout_tag: Layout::Horseshoe,
    };
    ramp.validate()?;
    Ok(ramp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjacent_gates_on_one_concourse() {
        let r = make_parallel_ramp(2, 1, 50.0, 300.0, 60.0).unwrap();
        assert_eq!(r.gate_to_gate[0][1], 50.0);
        assert_eq!(r.gate_count(), 2);
    }

    #[test]
    fn cross_concourse_distance() {
        let spec = ParallelRamp {
            gates_per_concourse: 4,
            ..Default::default()
        };
        let r = spec.build().unwrap();
        // gate 0 of concourse 0 sits 75 m from its station; gate 1 of
        // concourse 1 sits 25 m from its own. Connector: 300 m at 300 m/min
        // equals 60 m of walking.
        assert!((r.gate_to_gate[0][5] - (75.0 + 25.0 + 60.0)).abs() < 1e-12);
        assert!((r.checkpoint_dist[5] - (25.0 + 120.0)).abs() < 1e-12);
    }

    #[test]
    fn default_parallel_ramp_is_a_metric() {
        let r = ParallelRamp::default().build().unwrap();
        assert_eq!(r.gate_count(), 36);
        assert!(r.satisfies_triangle_inequality(1e-9));
        for j in 0..36 {
            assert_eq!(r.gate_to_gate[j][j], 0.0);
            for l in 0..36 {
                assert_eq!(r.gate_to_gate[j][l], r.gate_to_gate[l][j]);
            }
        }
    }

    #[test]
    fn horseshoe_distances() {
        let arms = HorseshoeArms {
            left: 300.0,
            base: 150.0,
            right: 300.0,
        };
        let r = make_horseshoe_ramp(16, arms, 60.0).unwrap();
        assert!((r.gate_to_gate[0][1] - 50.0).abs() < 1e-12);
        assert!((r.gate_to_gate[0][15] - 750.0).abs() < 1e-12);
        assert_eq!(r.gate_to_gate[3][9], r.gate_to_gate[9][3]);
        assert!(r.satisfies_triangle_inequality(1e-9));
        assert_eq!(r.gate_positions[0], [0.0, 300.0]);
        assert_eq!(r.gate_positions[15], [150.0, 300.0]);
    }

    #[test]
    fn rejects_bad_dimensions() {
        assert!(make_parallel_ramp(0, 1, 50.0, 300.0, 60.0).is_err());
        assert!(make_parallel_ramp(2, 1, -5.0, 300.0, 60.0).is_err());
        assert!(make_horseshoe_ramp(1, HorseshoeArms::default(), 60.0).is_err());
        assert!(make_horseshoe_ramp(10, HorseshoeArms::default(), 0.0).is_err());
    }

    #[test]
    fn validation_catches_asymmetry() {
        let mut r = make_parallel_ramp(3, 1, 50.0, 300.0, 60.0).unwrap();
        r.gate_to_gate[0][2] = 7.0;
        assert!(r.validate().is_err());
    }

    #[test]
    fn json_round_trip() {
        let r = make_horseshoe_ramp(5, HorseshoeArms::default(), 60.0).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"horseshoe\""));
        let back: RampConfig = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }
}
