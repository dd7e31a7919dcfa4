//! TOML scenario files.
//!
//! The schema is strict: unknown keys are rejected and value constraints (positive radii,
//! positive semidefinite covariances, ...) are checked while parsing, so errors carry
//! the line and column of the offending value.
//!
//! ```toml
//! version = "1"
//! k = 1.0                 # or: eta = 0.5
//! n_candidates = 16
//! s_max = 2.0
//! dt = 0.1
//! max_steps = 300
//! goal_tolerance = 0.1
//! seed = 7
//! ego_uncertainty_enabled = true
//!
//! [[robots]]
//! start = [0.0, 0.0]
//! goal = [10.0, 0.0]
//! radius = 0.5
//! preferred_speed = 1.0
//! pos_cov = [[0.01, 0.0], [0.0, 0.01]]
//! vel_cov = [[0.01, 0.0], [0.0, 0.01]]
//! actuation_cov = [[0.01, 0.0], [0.0, 0.01]]
//! ```

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::geometry::{Sym2, Vec2};
use crate::simulator::{RobotSpec, Scenario};
use crate::surrogate::cantelli_k;

pub const SUPPORTED_VERSIONS: &[&str] = &["1"];

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid scenario: {0}")]
    Invalid(String),
}

/// A float that must be strictly positive and finite.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Positive(pub f64);

impl TryFrom<f64> for Positive {
    type Error = String;
    fn try_from(v: f64) -> Result<Self, Self::Error> {
        if v > 0.0 && v.is_finite() {
            Ok(Positive(v))
        } else {
            Err(format!("expected a positive number, got {v}"))
        }
    }
}

impl From<Positive> for f64 {
    fn from(v: Positive) -> f64 {
        v.0
    }
}

/// A float in `[0, inf)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct NonNegative(pub f64);

impl TryFrom<f64> for NonNegative {
    type Error = String;
    fn try_from(v: f64) -> Result<Self, Self::Error> {
        if v >= 0.0 && v.is_finite() {
            Ok(NonNegative(v))
        } else {
            Err(format!("expected a non-negative number, got {v}"))
        }
    }
}

impl From<NonNegative> for f64 {
    fn from(v: NonNegative) -> f64 {
        v.0
    }
}

/// A probability in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Confidence(pub f64);

impl TryFrom<f64> for Confidence {
    type Error = String;
    fn try_from(v: f64) -> Result<Self, Self::Error> {
        if (0.0..1.0).contains(&v) {
            Ok(Confidence(v))
        } else {
            Err(format!("expected a probability in [0, 1), got {v}"))
        }
    }
}

impl From<Confidence> for f64 {
    fn from(v: Confidence) -> f64 {
        v.0
    }
}

/// A symmetric positive semidefinite 2x2 matrix written as nested arrays.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[[f64; 2]; 2]", into = "[[f64; 2]; 2]")]
pub struct Covariance(pub Sym2);

impl TryFrom<[[f64; 2]; 2]> for Covariance {
    type Error = String;
    fn try_from(m: [[f64; 2]; 2]) -> Result<Self, Self::Error> {
        if m.iter().flatten().any(|v| !v.is_finite()) {
            return Err("covariance entries must be finite".into());
        }
        if (m[0][1] - m[1][0]).abs() > 1e-12 * (1.0 + m[0][1].abs()) {
            return Err(format!("covariance must be symmetric, got {m:?}"));
        }
        crate::geometry::clamp_psd(Sym2::from(m))
            .map(Covariance)
            .map_err(|e| e.to_string())
    }
}

impl From<Covariance> for [[f64; 2]; 2] {
    fn from(c: Covariance) -> Self {
        c.0.into()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RobotEntry {
    pub start: [f64; 2],
    pub goal: [f64; 2],
    pub radius: Positive,
    pub preferred_speed: Positive,
    pub pos_cov: Covariance,
    pub vel_cov: Covariance,
    pub actuation_cov: Covariance,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<NonNegative>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<Confidence>,
    pub n_candidates: usize,
    pub s_max: Positive,
    pub dt: Positive,
    pub max_steps: usize,
    pub goal_tolerance: Positive,
    pub seed: u64,
    pub ego_uncertainty_enabled: bool,
    pub robots: Vec<RobotEntry>,
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        let file: ScenarioFile = toml::from_str(text)?;
        file.check()?;
        Ok(file)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ScenarioError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    fn check(&self) -> Result<(), ScenarioError> {
        let invalid = |m: String| Err(ScenarioError::Invalid(m));
        if !SUPPORTED_VERSIONS.contains(&self.version.as_str()) {
            return invalid(format!(
                "unsupported version {:?} (supported: {})",
                self.version,
                SUPPORTED_VERSIONS.join(", ")
            ));
        }
        match (self.k, self.eta) {
            (Some(_), Some(_)) | (None, None) => {
                return invalid("exactly one of `k` or `eta` must be given".into())
            }
            _ => {}
        }
        if self.n_candidates == 0 {
            return invalid("n_candidates must be at least 1".into());
        }
        if self.robots.is_empty() {
            return invalid("at least one [[robots]] entry is required".into());
        }
        for (i, r) in self.robots.iter().enumerate() {
            if r.start.iter().chain(&r.goal).any(|v| !v.is_finite()) {
                return invalid(format!("robot {i}: start and goal must be finite"));
            }
        }
        Ok(())
    }

    /// Confidence parameter `k`, converted from `eta` when that is what the file gives.
    pub fn k(&self) -> f64 {
        match (self.k, self.eta) {
            (Some(k), _) => k.0,
            (None, Some(eta)) => cantelli_k(eta.0).expect("eta checked at parse time"),
            (None, None) => unreachable!("checked at parse time"),
        }
    }

    pub fn to_scenario(&self) -> Scenario {
        Scenario {
            robots: self
                .robots
                .iter()
                .map(|r| RobotSpec {
                    start: Vec2::from(r.start),
                    goal: Vec2::from(r.goal),
                    radius: r.radius.0,
                    preferred_speed: r.preferred_speed.0,
                    pos_cov: r.pos_cov.0,
                    vel_cov: r.vel_cov.0,
                    actuation_cov: r.actuation_cov.0,
                })
                .collect(),
            k: self.k(),
            n_candidates: self.n_candidates,
            s_max: self.s_max.0,
            dt: self.dt.0,
            max_steps: self.max_steps,
            goal_tolerance: self.goal_tolerance.0,
            seed: self.seed,
            ego_uncertainty_enabled: self.ego_uncertainty_enabled,
        }
    }

    /// Canonical TOML text.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }
}

impl fmt::Display for ScenarioFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_toml())
    }
}

/// The example scenarios shipped with the crate.
pub mod bundled {
    use super::ScenarioFile;

    pub const THREE_ROBOT: &str = include_str!("../../../scenarios/three_robot.toml");
    pub const TWO_ROBOT_CROSSING: &str = include_str!("../../../scenarios/two_robot_crossing.toml");
    pub const HEAD_ON: &str = include_str!("../../../scenarios/head_on.toml");

    pub fn three_robot() -> ScenarioFile {
        ScenarioFile::parse(THREE_ROBOT).expect("bundled scenario parses")
    }

    pub fn two_robot_crossing() -> ScenarioFile {
        ScenarioFile::parse(TWO_ROBOT_CROSSING).expect("bundled scenario parses")
    }

    pub fn head_on() -> ScenarioFile {
        ScenarioFile::parse(HEAD_ON).expect("bundled scenario parses")
    }
}
