use prvo::scenario::bundled;
use prvo::simulator::{plan_first_step, run, RunOptions, RobotSpec, Scenario};
use prvo::{Sym2, Vec2};

#[test]
fn three_robot_runs_are_mostly_collision_free() {
    let base = bundled::three_robot().to_scenario();
    let mut clean = 0;
    let mut reached = 0;
    for seed in 0..50 {
        let sc = Scenario { seed, ..base.clone() };
        let (_, summary) = run(&sc, &RunOptions::default()).unwrap();
        clean += usize::from(summary.collisions == 0);
        reached += usize::from(summary.all_reached());
    }
    println!("collision-free in {clean} of 50 runs, all goals reached in {reached}");
    assert!(clean >= 48, "only {clean} of 50 runs were collision-free");
}

#[test]
fn bundled_three_robot_seed_is_clean() {
    let sc = bundled::three_robot().to_scenario();
    let (_, summary) = run(&sc, &RunOptions::default()).unwrap();
    assert_eq!(summary.collisions, 0);
    assert!(summary.all_reached());
}

#[test]
fn higher_confidence_deviates_more() {
    let mut sc = bundled::three_robot().to_scenario();
    let deviations = |sc: &Scenario| -> Vec<f64> {
        plan_first_step(sc)
            .unwrap()
            .iter()
            .map(|(cmd, diag, _)| (*cmd - diag.preferred).norm())
            .collect()
    };
    sc.k = 1.0;
    let low = deviations(&sc);
    sc.k = 1.5;
    let high = deviations(&sc);
    for (i, (l, h)) in low.iter().zip(&high).enumerate() {
        assert!(h >= &(l - 1e-12), "robot {i}: k=1.5 deviation {h} < k=1 deviation {l}");
    }
}

#[test]
fn same_seed_same_logs() {
    let sc = bundled::two_robot_crossing().to_scenario();
    let opts = RunOptions { validate: Some(500) };
    assert_eq!(run(&sc, &opts).unwrap(), run(&sc, &opts).unwrap());
}

#[test]
fn lone_robot_reaches_goal_in_expected_steps() {
    let sc = Scenario {
        robots: vec![RobotSpec {
            start: Vec2::ZERO,
            goal: Vec2::new(3.0, 4.0),
            radius: 0.5,
            preferred_speed: 1.0,
            pos_cov: Sym2::ZERO,
            vel_cov: Sym2::ZERO,
            actuation_cov: Sym2::ZERO,
        }],
        k: 1.0,
        n_candidates: 8,
        s_max: 2.0,
        dt: 0.1,
        max_steps: 200,
        goal_tolerance: 0.01,
        seed: 1,
        ego_uncertainty_enabled: true,
    };
    let (logs, summary) = run(&sc, &RunOptions::default()).unwrap();
    assert!(summary.all_reached());
    // 5 m at 1 m/s in 0.1 s steps.
    assert_eq!(logs.len(), 50);
}

#[test]
fn head_on_with_one_candidate_is_flagged() {
    let mut sc = bundled::head_on().to_scenario();
    sc.n_candidates = 1;
    for r in &mut sc.robots {
        r.pos_cov = Sym2::ZERO;
        r.vel_cov = Sym2::ZERO;
        r.start.y = 0.0;
        r.goal.y = 0.0;
    }
    let plans = plan_first_step(&sc).unwrap();
    assert!(plans.iter().all(|(_, d, _)| d.infeasible));
}
