//! Implementations behind the command-line subcommands. Each returns structured results
//! and writes its files; the binary only parses arguments and maps errors to exit codes.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use log::info;
use serde::Serialize;

use crate::baselines::{inflated_feasible_scales, orca_halfplane_from_pair, porca_feasible_scales, InflationConfig};
use crate::geometry::{intersect_all, Gaussian2, IntervalSet, Sym2, Vec2};
use crate::moments::{scaled_polys, UncertainPair};
use crate::scenario::ScenarioError;
use crate::simulator::{plan_first_step, run, validate_plan, RunOptions, RunSummary, Scenario, StepLog};
use crate::surrogate::{cantelli_eta, cantelli_k, solve_exact, solve_taylor, SurrogateProblem};
use crate::PrvoError;

#[derive(Debug, thiserror::Error)]
pub enum CommandError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Core(#[from] PrvoError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

fn write_file(path: &Path, contents: &str) -> Result<(), CommandError> {
    fs::write(path, contents).map_err(|source| CommandError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn create_dir(path: &Path) -> Result<(), CommandError> {
    fs::create_dir_all(path).map_err(|source| CommandError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Contents of `summary.json`.
#[derive(Clone, Debug, Serialize)]
pub struct SummaryFile {
    pub seed: u64,
    pub k: f64,
    pub cantelli_bound: f64,
    pub steps: usize,
    pub goal_reached: Vec<bool>,
    pub all_reached: bool,
    pub min_distance: f64,
    pub collisions: usize,
    pub infeasible_steps: usize,
    pub min_empirical_eta: Option<f64>,
}

pub struct SimulateOutput {
    pub logs: Vec<StepLog>,
    pub summary: RunSummary,
}

impl SimulateOutput {
    pub fn collided(&self) -> bool {
        self.summary.collisions > 0
    }
}

pub const TRAJECTORY_HEADER: &str = "step,robot,mean_x,mean_y,cmd_vx,cmd_vy,exec_vx,exec_vy,s,candidate,feasible";

/// Runs `scenario` and writes `trajectory.csv`, `summary.json` and, when validating,
/// `eta.csv` into `out_dir`.
pub fn simulate(scenario: &Scenario, out_dir: &Path, validate: Option<usize>) -> Result<SimulateOutput, CommandError> {
    let (logs, summary) = run(scenario, &RunOptions { validate })?;
    create_dir(out_dir)?;

    let mut traj = String::from(TRAJECTORY_HEADER);
    traj.push('\n');
    for step in &logs {
        for r in &step.robots {
            let (s, cand, feasible) = match &r.plan {
                Some(p) => (
                    p.s.map(|s| s.to_string()).unwrap_or_default(),
                    p.candidate.map(|c| c.to_string()).unwrap_or_default(),
                    p.feasible.to_string(),
                ),
                None => (String::new(), String::new(), String::new()),
            };
            writeln!(
                traj,
                "{},{},{},{},{},{},{},{},{},{},{}",
                step.step,
                r.robot,
                r.position.x,
                r.position.y,
                r.commanded.x,
                r.commanded.y,
                r.executed.x,
                r.executed.y,
                s,
                cand,
                feasible
            )
            .unwrap();
        }
    }
    write_file(&out_dir.join("trajectory.csv"), &traj)?;

    if validate.is_some() {
        let mut eta = String::from("step,robot,neighbor,eta,stderr,n\n");
        for step in &logs {
            for r in &step.robots {
                for (j, e) in &r.eta {
                    writeln!(eta, "{},{},{},{},{},{}", step.step, r.robot, j, e.eta, e.stderr(), e.n).unwrap();
                }
            }
        }
        write_file(&out_dir.join("eta.csv"), &eta)?;
    }

    let file = SummaryFile {
        seed: scenario.seed,
        k: scenario.k,
        cantelli_bound: cantelli_eta(scenario.k),
        steps: summary.steps,
        goal_reached: summary.goal_reached.clone(),
        all_reached: summary.all_reached(),
        min_distance: summary.min_distance,
        collisions: summary.collisions,
        infeasible_steps: summary.infeasible_steps,
        min_empirical_eta: summary.min_empirical_eta,
    };
    let json = serde_json::to_string_pretty(&file).expect("summary serializes");
    write_file(&out_dir.join("summary.json"), &(json + "\n"))?;
    info!(
        "{} steps, {} collisions, all goals reached: {}",
        summary.steps,
        summary.collisions,
        summary.all_reached()
    );
    Ok(SimulateOutput { logs, summary })
}

/// One row of the Cantelli validation table.
#[derive(Clone, Debug, PartialEq)]
pub struct CantelliRow {
    pub k: f64,
    pub cantelli_bound: f64,
    /// Smallest empirical satisfaction over every constrained pair; `None` if no robot
    /// had a neighbor to avoid.
    pub min_empirical_eta: Option<f64>,
    pub samples: usize,
    pub pass: bool,
}

pub const CANTELLI_HEADER: &str = "k,cantelli_bound,min_empirical_eta,pass";

impl CantelliRow {
    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{}",
            self.k,
            self.cantelli_bound,
            self.min_empirical_eta.map(|e| e.to_string()).unwrap_or_default(),
            self.pass
        )
    }
}

/// Plans the first step of `scenario` at each `k` and checks the empirical satisfaction
/// of every pairwise constraint against the Cantelli bound, allowing two binomial
/// standard errors.
pub fn validate_cantelli(scenario: &Scenario, ks: &[f64], samples: usize) -> Result<Vec<CantelliRow>, CommandError> {
    ks.iter()
        .enumerate()
        .map(|(ki, &k)| {
            let mut sc = scenario.clone();
            sc.k = k;
            let bound = cantelli_eta(k);
            let mut min_eta: Option<f64> = None;
            for (i, (cmd, diag, beliefs)) in plan_first_step(&sc)?.into_iter().enumerate() {
                let seed = sc.seed.wrapping_add((ki as u64) << 32).wrapping_add(i as u64);
                for (_, e) in validate_plan(&beliefs, i, &diag, cmd, samples, seed)? {
                    min_eta = Some(min_eta.map_or(e.eta, |m: f64| m.min(e.eta)));
                }
            }
            let tol = 2.0 * (bound * (1.0 - bound) / samples as f64).sqrt();
            Ok(CantelliRow {
                k,
                cantelli_bound: bound,
                min_empirical_eta: min_eta,
                samples,
                pass: min_eta.is_none_or(|m| m >= bound - tol),
            })
        })
        .collect()
}

/// Method used to compute a feasible scale set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpaceMethod {
    /// Taylor surrogate of the PRVO constraint at confidence `k`.
    PrvoTaylor { k: f64 },
    /// Exact PRVO moment constraint at confidence `k`.
    PrvoExact { k: f64 },
    /// Deterministic RVO with radii grown by confidence contours.
    Inflation { confidence: f64, velocity_horizon: f64 },
    /// Probabilistic ORCA half-plane.
    Porca { eta: f64, time_horizon: f64 },
}

impl SpaceMethod {
    pub fn name(&self) -> &'static str {
        match self {
            SpaceMethod::PrvoTaylor { .. } => "prvo-taylor",
            SpaceMethod::PrvoExact { .. } => "prvo-exact",
            SpaceMethod::Inflation { .. } => "inflation",
            SpaceMethod::Porca { .. } => "porca",
        }
    }

    /// Builds a method from its name and a confidence given either as `k` or as `eta`.
    pub fn from_name(name: &str, k: Option<f64>, eta: Option<f64>) -> Result<Self, PrvoError> {
        let (k, eta) = match (k, eta) {
            (Some(_), Some(_)) => {
                return Err(PrvoError::InvalidArgument("give either k or eta, not both".into()))
            }
            (Some(k), None) => (k, cantelli_eta(k)),
            (None, Some(eta)) => (cantelli_k(eta)?, eta),
            (None, None) => (1.0, cantelli_eta(1.0)),
        };
        Ok(match name {
            "prvo-taylor" => SpaceMethod::PrvoTaylor { k },
            "prvo-exact" => SpaceMethod::PrvoExact { k },
            "inflation" => SpaceMethod::Inflation {
                confidence: eta,
                velocity_horizon: 1.0,
            },
            "porca" => SpaceMethod::Porca {
                eta,
                time_horizon: f64::INFINITY,
            },
            other => return Err(PrvoError::InvalidArgument(format!("unknown method {other:?}"))),
        })
    }
}

/// Feasible scale set of one robot along its goal-directed candidate.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceRow {
    pub robot: usize,
    pub direction: Vec2,
    pub set: IntervalSet,
}

pub const SPACE_HEADER: &str = "robot,method,dir_x,dir_y,feasible";

/// Solution space of every robot in the initial configuration, with beliefs centred on
/// the true states. Every other robot is treated as a neighbor.
pub fn solution_space(scenario: &Scenario, method: SpaceMethod) -> Result<Vec<SpaceRow>, CommandError> {
    scenario.validate()?;
    let domain = scenario.domain();
    let states: Vec<(Gaussian2, Gaussian2, Vec2)> = scenario
        .robots
        .iter()
        .map(|r| {
            let dir = (r.goal - r.start).normalized() * r.preferred_speed;
            (
                Gaussian2 { mean: r.start, cov: r.pos_cov },
                Gaussian2 { mean: dir, cov: r.vel_cov },
                dir,
            )
        })
        .collect();
    let mut rows = Vec::with_capacity(states.len());
    for (i, spec) in scenario.robots.iter().enumerate() {
        let dir = states[i].2;
        let mut sets = Vec::new();
        for (j, other) in scenario.robots.iter().enumerate() {
            if j == i {
                continue;
            }
            let act = if scenario.ego_uncertainty_enabled { spec.actuation_cov } else { Sym2::ZERO };
            let u = UncertainPair::new(
                states[i].0,
                states[j].0,
                states[i].1,
                states[j].1,
                act,
                spec.radius + other.radius,
            )?;
            let set = match method {
                SpaceMethod::PrvoTaylor { k } => {
                    solve_taylor(&SurrogateProblem::new(scaled_polys(&u, dir)?, k, domain)?)?
                }
                SpaceMethod::PrvoExact { k } => {
                    solve_exact(&SurrogateProblem::new(scaled_polys(&u, dir)?, k, domain)?)
                }
                SpaceMethod::Inflation {
                    confidence,
                    velocity_horizon,
                } => {
                    let cfg = InflationConfig::with_horizon(confidence, velocity_horizon)?;
                    inflated_feasible_scales(&u, dir, &cfg, domain)?.set
                }
                SpaceMethod::Porca { eta, time_horizon } => {
                    let h = orca_halfplane_from_pair(&u, time_horizon)?;
                    porca_feasible_scales(&h, dir, eta, domain)?
                }
            };
            sets.push(set);
        }
        let set = if sets.is_empty() {
            IntervalSet::single(domain)
        } else {
            intersect_all(&sets)
        };
        rows.push(SpaceRow { robot: i, direction: dir, set });
    }
    Ok(rows)
}

pub fn space_csv(method: SpaceMethod, rows: &[SpaceRow]) -> String {
    let mut out = String::from(SPACE_HEADER);
    out.push('\n');
    for r in rows {
        writeln!(out, "{},{},{},{},{}", r.robot, method.name(), r.direction.x, r.direction.y, r.set).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::bundled;

    #[test]
    fn simulate_writes_files() {
        let mut sc = bundled::head_on().to_scenario();
        sc.max_steps = 5;
        let dir = tempfile::tempdir().unwrap();
        let out = simulate(&sc, dir.path(), Some(200)).unwrap();
        assert_eq!(out.logs.len(), 5);
        let traj = fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
        assert_eq!(traj.lines().next().unwrap(), TRAJECTORY_HEADER);
        assert_eq!(traj.lines().count(), 1 + 5 * sc.robots.len());
        assert!(dir.path().join("eta.csv").exists());
        let summary: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
        assert_eq!(summary["steps"], 5);
    }

    #[test]
    fn method_names_round_trip() {
        for name in ["prvo-taylor", "prvo-exact", "inflation", "porca"] {
            assert_eq!(SpaceMethod::from_name(name, Some(1.0), None).unwrap().name(), name);
        }
        assert!(SpaceMethod::from_name("rvo", None, None).is_err());
        assert!(SpaceMethod::from_name("porca", Some(1.0), Some(0.5)).is_err());
    }

    #[test]
    fn solution_space_rows_per_robot() {
        let sc = bundled::two_robot_crossing().to_scenario();
        let rows = solution_space(&sc, SpaceMethod::PrvoExact { k: 1.0 }).unwrap();
        assert_eq!(rows.len(), 2);
        let csv = space_csv(SpaceMethod::PrvoExact { k: 1.0 }, &rows);
        assert!(csv.starts_with(SPACE_HEADER));
    }
}
