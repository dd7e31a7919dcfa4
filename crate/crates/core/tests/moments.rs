mod common;

use prvo::moments::{moments_of_f, scaled_polys, UncertainPair};
use prvo::montecarlo::mc_moments;
use prvo::{Gaussian2, Sym2, Vec2};
use rand::Rng;

#[test]
fn hand_expanded_mean_matches_sampling() {
    // E[|r|²]·4 - E[(2 r_x)²] - 4 with E[r_x²] = 100.1, E[r_y²] = 0.1.
    let u = UncertainPair::new(
        Gaussian2::deterministic(Vec2::ZERO),
        Gaussian2::new(Vec2::new(10.0, 0.0), Sym2::isotropic(0.1)).unwrap(),
        Gaussian2::deterministic(Vec2::new(1.0, 0.0)),
        Gaussian2::deterministic(Vec2::new(-1.0, 0.0)),
        Sym2::ZERO,
        1.0,
    )
    .unwrap();
    let cmd = Vec2::new(1.0, 0.0);
    let m = moments_of_f(&u, cmd);
    assert!((m.mean + 3.6).abs() < 1e-9, "closed form {}", m.mean);
    let mc = mc_moments(&u, cmd, 100_000, 17);
    assert!((mc.mean + 3.6).abs() <= 3.0 * mc.stderr_mean, "sampled {} ± {}", mc.mean, mc.stderr_mean);
}

#[test]
fn polys_reproduce_moments_off_the_nodes() {
    let mut r = common::rng(21);
    for _ in 0..200 {
        let u = common::pair(&mut r, 0.1);
        let dir = common::unit(&mut r);
        let p = scaled_polys(&u, dir).unwrap();
        let m = moments_of_f(&u, dir * 0.73);
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * b.abs().max(1.0);
        assert!(close(p.mu.eval(0.73), m.mean));
        assert!(close(p.var.eval(0.73), m.var));
        assert!(p.mu.degree().unwrap_or(0) <= 2);
        assert!(p.var.degree().unwrap_or(0) <= 4);
    }
}

#[test]
fn variance_grows_with_actuation_noise() {
    let mut r = common::rng(22);
    for _ in 0..200 {
        let u = common::pair(&mut r, 0.05);
        let cmd = common::vec_in(&mut r, 1.5);
        let base = moments_of_f(&u, cmd).var;
        for lambda in [1.0, 1.5, 2.0, 4.0] {
            let scaled = UncertainPair {
                actuation_cov: u.actuation_cov.scaled(lambda),
                ..u
            };
            let v = moments_of_f(&scaled, cmd).var;
            assert!(v >= base - 1e-9 * base.abs().max(1.0), "λ={lambda}: {v} < {base}");
        }
    }
}

#[test]
fn variance_vanishes_only_without_noise() {
    let mut r = common::rng(23);
    for _ in 0..100 {
        let noise = r.random_range(0.001..0.1);
        let noisy = common::pair(&mut r, noise);
        let cmd = common::vec_in(&mut r, 1.5);
        assert!(moments_of_f(&noisy, cmd).var > 0.0);
        assert_eq!(moments_of_f(&noisy.at_means(), cmd).var, 0.0);
    }
}
