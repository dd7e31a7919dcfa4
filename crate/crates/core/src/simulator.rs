//! Multi-robot lockstep simulation with PRVO velocity selection.
//!
//! Every tick each robot perceives all robots (itself included) as Gaussians centered on
//! noisy observations of the true state, samples candidate headings, solves the
//! time-scaled surrogate against every neighbor along each candidate, and
//! commands the feasible velocity closest to its preferred one. Taylor solution sets are
//! restricted to scales where the surrogate holds exactly before selection. Execution adds
//! actuation noise.

use std::f64::consts::PI;

use log::{debug, trace};
use rand::Rng;

use crate::error::{PrvoError, Result};
use crate::geometry::{Gaussian2, Interval, IntervalSet, Sym2, Vec2};
use crate::moments::{scaled_polys, UncertainPair};
use crate::montecarlo::{draw_gaussian2, empirical_eta, substream, EtaEstimate};
use crate::surrogate::{solve_exact, solve_taylor, taylor_quadratic, SurrogateProblem};

/// Half-width of the heading fan that random candidates are drawn from.
pub const CANDIDATE_SPREAD: f64 = 2.0 * PI / 3.0;
const FALLBACK_GRID: usize = 400;

#[derive(Clone, Debug, PartialEq)]
pub struct RobotSpec {
    pub start: Vec2,
    pub goal: Vec2,
    pub radius: f64,
    pub preferred_speed: f64,
    /// Perception noise on position observations.
    pub pos_cov: Sym2,
    /// Perception noise on velocity observations.
    pub vel_cov: Sym2,
    /// Noise between commanded and executed velocity.
    pub actuation_cov: Sym2,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub robots: Vec<RobotSpec>,
    /// Surrogate confidence parameter.
    pub k: f64,
    pub n_candidates: usize,
    pub s_max: f64,
    pub dt: f64,
    pub max_steps: usize,
    pub goal_tolerance: f64,
    pub seed: u64,
    pub ego_uncertainty_enabled: bool,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(PrvoError::InvalidArgument(msg));
        if self.robots.is_empty() {
            return bad("scenario needs at least one robot".into());
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.goal_tolerance > 0.0) {
            return bad(format!("goal_tolerance must be positive, got {}", self.goal_tolerance));
        }
        if !(self.k >= 0.0 && self.k.is_finite()) {
            return bad(format!("k must be >= 0, got {}", self.k));
        }
        if !(self.s_max > 0.0) {
            return bad(format!("s_max must be positive, got {}", self.s_max));
        }
        if self.n_candidates == 0 {
            return bad("n_candidates must be at least 1".into());
        }
        for (i, r) in self.robots.iter().enumerate() {
            if !(r.radius > 0.0 && r.radius.is_finite()) {
                return bad(format!("robot {i}: radius must be positive"));
            }
            if !(r.preferred_speed > 0.0 && r.preferred_speed.is_finite()) {
                return bad(format!("robot {i}: preferred_speed must be positive"));
            }
            if !r.start.is_finite() || !r.goal.is_finite() {
                return Err(PrvoError::NonFinite("robot start/goal"));
            }
            for cov in [r.pos_cov, r.vel_cov, r.actuation_cov] {
                crate::geometry::clamp_psd(cov)?;
            }
        }
        Ok(())
    }

    pub fn domain(&self) -> Interval {
        Interval {
            lo: 0.0,
            hi: self.s_max,
        }
    }
}

/// What one robot believes about one robot at planning time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RobotBelief {
    pub radius: f64,
    pub position: Gaussian2,
    pub velocity: Gaussian2,
    pub actuation_cov: Sym2,
}

/// Candidate velocities of magnitude `speed`. Candidate 0 points at the goal; the others
/// have headings drawn uniformly within ±120° of it. A zero `toward_goal` yields a single
/// zero candidate.
pub fn generate_candidates(toward_goal: Vec2, speed: f64, n: usize, seed: u64) -> Vec<Vec2> {
    assert!(n >= 1, "need at least one candidate");
    if toward_goal.norm() == 0.0 {
        return vec![Vec2::ZERO];
    }
    let base = toward_goal.normalized() * speed;
    let mut rng = substream(seed, &[]);
    let mut out = Vec::with_capacity(n);
    out.push(base);
    for _ in 1..n {
        out.push(base.rotated(rng.random_range(-CANDIDATE_SPREAD..=CANDIDATE_SPREAD)));
    }
    out
}

/// Per-robot outcome of one planning call.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanDiagnostics {
    pub candidate: Option<usize>,
    pub s: Option<f64>,
    /// Feasible scale set of the chosen candidate against each neighbor.
    pub pair_sets: Vec<(usize, IntervalSet)>,
    /// Neighbors for which the chosen scale relies on the probabilistic constraint, i.e.
    /// the mean relative motion at that scale is still closing.
    pub constrained: Vec<usize>,
    /// Intersection over neighbors along the chosen candidate.
    pub feasible: IntervalSet,
    pub infeasible: bool,
    pub preferred: Vec2,
}

/// Uncertain pair as planned by `robot_id` against `other`.
fn pair_belief(beliefs: &[RobotBelief], robot_id: usize, other: usize, with_ego: bool) -> Result<UncertainPair> {
    let me = &beliefs[robot_id];
    let them = &beliefs[other];
    UncertainPair::new(
        me.position,
        them.position,
        me.velocity,
        them.velocity,
        if with_ego { me.actuation_cov } else { Sym2::ZERO },
        me.radius + them.radius,
    )
}

/// Scales at which the mean relative motion `2 s dir - v_i - v_j` points strictly away from the
/// neighbor's mean position. The constraint polynomial tests the whole line of relative
/// motion, so without this exemption it would also forbid moving apart.
pub fn receding_scales(u: &UncertainPair, dir: Vec2, domain: Interval) -> Result<IntervalSet> {
    let r = u.pj.mean - u.pi.mean;
    let v_sum = u.vi.mean + u.vj.mean;
    // r · w(s) < 0  <=>  -2 (r · dir) s + r · v_sum > 0. Strict, so that standing still
    // in an exact head-on (r · w = 0) does not count as moving apart.
    let (a1, a0) = (-2.0 * r.dot(dir), r.dot(v_sum));
    if a1 == 0.0 && a0 <= 0.0 {
        return Ok(IntervalSet::empty());
    }
    let closed = crate::geometry::quadratic_geq_zero(0.0, a1, a0, domain)?;
    Ok(IntervalSet::from_intervals(
        closed.intervals().iter().copied().filter(|iv| iv.width() > 0.0).collect(),
    ))
}

/// Preferred velocity: toward the goal at the preferred speed, slowed so as not to
/// overshoot within one step.
pub fn preferred_velocity(position: Vec2, goal: Vec2, speed: f64, dt: f64) -> Vec2 {
    let to_goal = goal - position;
    let dist = to_goal.norm();
    if dist == 0.0 {
        return Vec2::ZERO;
    }
    to_goal.normalized() * speed.min(dist / dt)
}

struct CandidatePlan {
    cost: f64,
    index: usize,
    s: f64,
    sets: Vec<IntervalSet>,
    receding: Vec<IntervalSet>,
    joint: IntervalSet,
}

/// Chooses the commanded velocity of `robot_id` from its beliefs about every robot.
///
/// `candidate_seed` drives the random candidate headings.
pub fn plan_step(
    scenario: &Scenario,
    beliefs: &[RobotBelief],
    robot_id: usize,
    candidate_seed: u64,
) -> Result<(Vec2, PlanDiagnostics)> {
    let spec = &scenario.robots[robot_id];
    let me = &beliefs[robot_id];
    let preferred = preferred_velocity(me.position.mean, spec.goal, spec.preferred_speed, scenario.dt);
    let candidates = generate_candidates(
        spec.goal - me.position.mean,
        spec.preferred_speed,
        scenario.n_candidates,
        candidate_seed,
    );
    let neighbors: Vec<usize> = (0..beliefs.len()).filter(|&j| j != robot_id).collect();

    if candidates[0] == Vec2::ZERO || neighbors.is_empty() {
        return Ok((
            preferred,
            PlanDiagnostics {
                candidate: Some(0),
                s: (candidates[0] != Vec2::ZERO)
                    .then(|| preferred.norm() / spec.preferred_speed),
                pair_sets: Vec::new(),
                constrained: Vec::new(),
                feasible: IntervalSet::single(scenario.domain()),
                infeasible: false,
                preferred,
            },
        ));
    }

    let pairs = neighbors
        .iter()
        .map(|&j| pair_belief(beliefs, robot_id, j, scenario.ego_uncertainty_enabled))
        .collect::<Result<Vec<_>>>()?;
    let domain = scenario.domain();

    let mut best: Option<CandidatePlan> = None;
    let mut fallback_problems = Vec::new();
    for (ci, dir) in candidates.iter().enumerate() {
        let mut sets = Vec::with_capacity(pairs.len());
        let mut receding = Vec::with_capacity(pairs.len());
        let mut problems = Vec::with_capacity(pairs.len());
        for u in &pairs {
            let problem = SurrogateProblem::new(scaled_polys(u, *dir)?, scenario.k, domain)?;
            let taylor = match solve_taylor(&problem) {
                Ok(set) => set,
                Err(PrvoError::VanishingVariance) => IntervalSet::empty(),
                Err(e) => return Err(e),
            };
            // The expansion is only accurate near s*; far from it the quadratic can admit
            // scales that violate the surrogate. Keep only the certified part.
            let certified = taylor.intersect(&solve_exact(&problem));
            let away = receding_scales(u, *dir, domain)?;
            sets.push(certified.union(&away));
            receding.push(away);
            problems.push(problem);
        }
        if ci == 0 {
            fallback_problems = problems;
        }
        let joint = crate::geometry::intersect_all(&sets);
        let target = dir.dot(preferred) / dir.norm_sq();
        let Some(s) = joint.nearest(target) else {
            continue;
        };
        let cost = (*dir * s - preferred).norm();
        trace!("robot {robot_id} candidate {ci}: {joint} s={s} cost={cost}");
        if best.as_ref().is_none_or(|b| cost < b.cost) {
            best = Some(CandidatePlan {
                cost,
                index: ci,
                s,
                sets,
                receding,
                joint,
            });
        }
    }

    let (commanded, diag) = match best {
        Some(plan) => (
            candidates[plan.index] * plan.s,
            PlanDiagnostics {
                candidate: Some(plan.index),
                s: Some(plan.s),
                constrained: neighbors
                    .iter()
                    .zip(&plan.receding)
                    .filter(|(_, away)| !away.contains(plan.s))
                    .map(|(&j, _)| j)
                    .collect(),
                pair_sets: neighbors.iter().copied().zip(plan.sets).collect(),
                feasible: plan.joint,
                infeasible: false,
                preferred,
            },
        ),
        None => {
            let s = best_effort_scale(&fallback_problems, domain);
            debug!("robot {robot_id}: no feasible candidate, best-effort s={s}");
            (
                candidates[0] * s,
                PlanDiagnostics {
                    candidate: Some(0),
                    s: Some(s),
                    pair_sets: neighbors.iter().map(|&j| (j, IntervalSet::empty())).collect(),
                    constrained: neighbors.clone(),
                    feasible: IntervalSet::empty(),
                    infeasible: true,
                    preferred,
                },
            )
        }
    };
    Ok((commanded, diag))
}

/// Scale maximizing the worst Taylor surrogate value over neighbors, on a uniform grid.
fn best_effort_scale(problems: &[SurrogateProblem], domain: Interval) -> f64 {
    let quads: Vec<(f64, f64, f64)> = problems
        .iter()
        .map(|p| {
            if p.polys.sigma(p.s_star) > crate::surrogate::SIGMA_FLOOR {
                taylor_quadratic(&p.polys, p.k, p.s_star)
            } else {
                (p.polys.mu.coeff(2), p.polys.mu.coeff(1), p.polys.mu.coeff(0))
            }
        })
        .collect();
    (0..=FALLBACK_GRID)
        .map(|i| domain.lo + (domain.hi - domain.lo) * i as f64 / FALLBACK_GRID as f64)
        .map(|s| {
            let worst = quads
                .iter()
                .map(|(a, b, c)| a * s * s + b * s + c)
                .fold(f64::INFINITY, f64::min);
            (worst, s)
        })
        .fold((f64::NEG_INFINITY, domain.lo), |acc, x| if x.0 > acc.0 { x } else { acc })
        .1
}

/// Log of one robot in one tick.
#[derive(Clone, Debug, PartialEq)]
pub struct RobotStepLog {
    pub robot: usize,
    /// True position after executing the step.
    pub position: Vec2,
    pub commanded: Vec2,
    pub executed: Vec2,
    pub at_goal: bool,
    pub plan: Option<PlanDiagnostics>,
    /// Empirical satisfaction probability per constrained neighbor, when validating.
    pub eta: Vec<(usize, EtaEstimate)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepLog {
    pub step: usize,
    pub robots: Vec<RobotStepLog>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunSummary {
    pub steps: usize,
    pub goal_reached: Vec<bool>,
    pub min_distance: f64,
    /// Pair-steps with center distance below the combined radius.
    pub collisions: usize,
    pub infeasible_steps: usize,
    /// Smallest per-pair empirical satisfaction probability, when validating.
    pub min_empirical_eta: Option<f64>,
}

impl RunSummary {
    pub fn all_reached(&self) -> bool {
        self.goal_reached.iter().all(|&r| r)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RunOptions {
    /// Samples per constrained pair for empirical satisfaction checks.
    pub validate: Option<usize>,
}

const KEY_POS: u64 = 1;
const KEY_VEL: u64 = 2;
const KEY_ACT: u64 = 3;
const KEY_CAND: u64 = 4;
const KEY_ETA: u64 = 5;

/// Beliefs of `observer` about every robot at `step`.
pub fn perceive(scenario: &Scenario, truth: &[(Vec2, Vec2)], observer: usize, step: usize) -> Vec<RobotBelief> {
    let obs = observer as u64;
    let step = step as u64;
    scenario
        .robots
        .iter()
        .zip(truth)
        .enumerate()
        .map(|(j, (spec, &(pos, vel)))| {
            let j = j as u64;
            let pos_noise = Gaussian2 { mean: pos, cov: spec.pos_cov };
            let vel_noise = Gaussian2 { mean: vel, cov: spec.vel_cov };
            let seen_pos = draw_gaussian2(&pos_noise, &mut substream(scenario.seed, &[step, obs, j, KEY_POS]));
            let seen_vel = draw_gaussian2(&vel_noise, &mut substream(scenario.seed, &[step, obs, j, KEY_VEL]));
            RobotBelief {
                radius: spec.radius,
                position: Gaussian2 { mean: seen_pos, cov: spec.pos_cov },
                velocity: Gaussian2 { mean: seen_vel, cov: spec.vel_cov },
                actuation_cov: spec.actuation_cov,
            }
        })
        .collect()
}

/// Plans every robot once from the initial configuration.
pub fn plan_first_step(scenario: &Scenario) -> Result<Vec<(Vec2, PlanDiagnostics, Vec<RobotBelief>)>> {
    scenario.validate()?;
    let truth = initial_truth(scenario);
    (0..scenario.robots.len())
        .map(|i| {
            let beliefs = perceive(scenario, &truth, i, 0);
            let seed = candidate_seed(scenario, 0, i);
            let (cmd, diag) = plan_step(scenario, &beliefs, i, seed)?;
            Ok((cmd, diag, beliefs))
        })
        .collect()
}

fn candidate_seed(scenario: &Scenario, step: usize, robot: usize) -> u64 {
    substream(scenario.seed, &[step as u64, robot as u64, KEY_CAND]).random()
}

/// Robots start moving toward their goals at the preferred speed.
fn initial_truth(scenario: &Scenario) -> Vec<(Vec2, Vec2)> {
    scenario
        .robots
        .iter()
        .map(|r| {
            let v = if (r.goal - r.start).norm() <= scenario.goal_tolerance {
                Vec2::ZERO
            } else {
                (r.goal - r.start).normalized() * r.preferred_speed
            };
            (r.start, v)
        })
        .collect()
}

/// Empirical satisfaction of each constrained pair at the commanded velocity, with the
/// robot's actuation noise always included. Pairs the plan moves away from are skipped.
pub fn validate_plan(
    beliefs: &[RobotBelief],
    robot_id: usize,
    diag: &PlanDiagnostics,
    commanded: Vec2,
    n: usize,
    seed: u64,
) -> Result<Vec<(usize, EtaEstimate)>> {
    diag.constrained
        .iter()
        .map(|&j| {
            let u = pair_belief(beliefs, robot_id, j, true)?;
            Ok((j, empirical_eta(&u, commanded, n, seed ^ (j as u64).wrapping_mul(0x9e37_79b9))))
        })
        .collect()
}

/// Runs the scenario to completion or `max_steps`.
pub fn run(scenario: &Scenario, options: &RunOptions) -> Result<(Vec<StepLog>, RunSummary)> {
    scenario.validate()?;
    let n = scenario.robots.len();
    let mut truth = initial_truth(scenario);
    let mut at_goal: Vec<bool> = scenario
        .robots
        .iter()
        .map(|r| (r.goal - r.start).norm() <= scenario.goal_tolerance)
        .collect();
    let mut logs = Vec::new();
    let mut collisions = 0;
    let mut infeasible_steps = 0;
    let mut min_distance = min_pair_distance(scenario, &truth).0;
    let mut min_eta: Option<f64> = None;

    for step in 0..scenario.max_steps {
        if at_goal.iter().all(|&g| g) {
            break;
        }
        let mut planned = Vec::with_capacity(n);
        for (i, &done) in at_goal.iter().enumerate() {
            if done {
                planned.push(None);
                continue;
            }
            let beliefs = perceive(scenario, &truth, i, step);
            let (cmd, diag) = plan_step(scenario, &beliefs, i, candidate_seed(scenario, step, i))?;
            let eta = match options.validate {
                Some(samples) => {
                    let seed = substream(scenario.seed, &[step as u64, i as u64, KEY_ETA]).random();
                    validate_plan(&beliefs, i, &diag, cmd, samples, seed)?
                }
                None => Vec::new(),
            };
            planned.push(Some((cmd, diag, eta)));
        }

        let mut robots = Vec::with_capacity(n);
        for (i, plan) in planned.into_iter().enumerate() {
            let spec = &scenario.robots[i];
            let (commanded, executed, plan, eta) = match plan {
                None => (Vec2::ZERO, Vec2::ZERO, None, Vec::new()),
                Some((cmd, diag, eta)) => {
                    let noise = Gaussian2 { mean: cmd, cov: spec.actuation_cov };
                    let exec = draw_gaussian2(
                        &noise,
                        &mut substream(scenario.seed, &[step as u64, i as u64, KEY_ACT]),
                    );
                    if diag.infeasible {
                        infeasible_steps += 1;
                    }
                    (cmd, exec, Some(diag), eta)
                }
            };
            for (_, e) in &eta {
                min_eta = Some(min_eta.map_or(e.eta, |m: f64| m.min(e.eta)));
            }
            truth[i] = (truth[i].0 + executed * scenario.dt, executed);
            robots.push(RobotStepLog {
                robot: i,
                position: truth[i].0,
                commanded,
                executed,
                at_goal: at_goal[i],
                plan,
                eta,
            });
        }

        for i in 0..n {
            if !at_goal[i] && (scenario.robots[i].goal - truth[i].0).norm() <= scenario.goal_tolerance {
                at_goal[i] = true;
                truth[i].1 = Vec2::ZERO;
            }
        }
        let (dist, hits) = min_pair_distance(scenario, &truth);
        min_distance = min_distance.min(dist);
        collisions += hits;
        logs.push(StepLog { step, robots });
    }

    let summary = RunSummary {
        steps: logs.len(),
        goal_reached: at_goal,
        min_distance,
        collisions,
        infeasible_steps,
        min_empirical_eta: min_eta,
    };
    Ok((logs, summary))
}

/// Smallest center distance and the number of overlapping pairs.
fn min_pair_distance(scenario: &Scenario, truth: &[(Vec2, Vec2)]) -> (f64, usize) {
    let mut min = f64::INFINITY;
    let mut hits = 0;
    for i in 0..truth.len() {
        for j in i + 1..truth.len() {
            let d = (truth[j].0 - truth[i].0).norm();
            min = min.min(d);
            if d < scenario.robots[i].radius + scenario.robots[j].radius {
                hits += 1;
            }
        }
    }
    (min, hits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn robot(start: (f64, f64), goal: (f64, f64)) -> RobotSpec {
        RobotSpec {
            start: Vec2::new(start.0, start.1),
            goal: Vec2::new(goal.0, goal.1),
            radius: 0.5,
            preferred_speed: 1.0,
            pos_cov: Sym2::ZERO,
            vel_cov: Sym2::ZERO,
            actuation_cov: Sym2::ZERO,
        }
    }

    fn scenario(robots: Vec<RobotSpec>) -> Scenario {
        Scenario {
            robots,
            k: 1.0,
            n_candidates: 8,
            s_max: 2.0,
            dt: 0.1,
            max_steps: 500,
            goal_tolerance: 1e-6,
            seed: 3,
            ego_uncertainty_enabled: true,
        }
    }

    #[test]
    fn candidates() {
        let c = generate_candidates(Vec2::new(3.0, 4.0), 2.0, 1, 0);
        assert_eq!(c.len(), 1);
        assert!((c[0] - Vec2::new(1.2, 1.6)).norm() < 1e-12);
        assert_eq!(generate_candidates(Vec2::ZERO, 1.0, 5, 0), vec![Vec2::ZERO]);
        let a = generate_candidates(Vec2::new(1.0, 0.0), 1.0, 8, 42);
        assert_eq!(a, generate_candidates(Vec2::new(1.0, 0.0), 1.0, 8, 42));
        assert_eq!(a.len(), 8);
        for v in &a {
            assert!((v.norm() - 1.0).abs() < 1e-12);
            assert!(v.y.atan2(v.x).abs() <= CANDIDATE_SPREAD + 1e-12);
        }
    }

    #[test]
    fn lone_robot_goes_straight() {
        let sc = scenario(vec![robot((0.0, 0.0), (10.0, 0.0))]);
        let (logs, summary) = run(&sc, &RunOptions::default()).unwrap();
        assert!(summary.all_reached());
        // ceil(10 / (1.0 · 0.1))
        assert_eq!(summary.steps, 100);
        assert_eq!(logs[0].robots[0].commanded, Vec2::new(1.0, 0.0));
    }

    #[test]
    fn lone_robot_commands_preferred() {
        let sc = scenario(vec![robot((0.0, 0.0), (3.0, 4.0))]);
        let beliefs = perceive(&sc, &[(Vec2::ZERO, Vec2::ZERO)], 0, 0);
        let (cmd, diag) = plan_step(&sc, &beliefs, 0, 1).unwrap();
        assert!((cmd - Vec2::new(0.6, 0.8)).norm() < 1e-12);
        assert!(!diag.infeasible);
    }

    #[test]
    fn head_on_single_candidate_is_infeasible() {
        let mut sc = scenario(vec![robot((0.0, 0.0), (10.0, 0.0)), robot((10.0, 0.0), (0.0, 0.0))]);
        sc.n_candidates = 1;
        for r in &mut sc.robots {
            r.actuation_cov = Sym2::isotropic(0.01);
        }
        // Exact perception keeps the mean geometry symmetric, so no scale moves the
        // robots apart and the variance from actuation rules out standing still.
        let plans = plan_first_step(&sc).unwrap();
        assert!(plans.iter().all(|(_, d, _)| d.infeasible));
    }

    #[test]
    fn validate_rejects_bad_scenarios() {
        let mut sc = scenario(vec![robot((0.0, 0.0), (1.0, 0.0))]);
        sc.robots[0].radius = -1.0;
        assert!(sc.validate().is_err());
        let mut sc = scenario(vec![]);
        assert!(sc.validate().is_err());
        sc.robots.push(robot((0.0, 0.0), (1.0, 0.0)));
        sc.dt = 0.0;
        assert!(sc.validate().is_err());
    }

    #[test]
    fn deterministic_runs() {
        let mut sc = scenario(vec![robot((0.0, 0.0), (6.0, 0.0)), robot((3.0, -3.0), (3.0, 3.0))]);
        for r in &mut sc.robots {
            r.pos_cov = Sym2::isotropic(0.01);
            r.actuation_cov = Sym2::isotropic(0.005);
        }
        let a = run(&sc, &RunOptions { validate: Some(200) }).unwrap();
        let b = run(&sc, &RunOptions { validate: Some(200) }).unwrap();
        assert_eq!(a, b);
    }
}
