//! Random instance generators and reference computations shared by the integration tests.
#![allow(dead_code)]

use prvo::geometry::Interval;
use prvo::moments::{scaled_polys, ScaledPolys, UncertainPair};
use prvo::rvo::{f_rvo, PairGeometry};
use prvo::{Gaussian2, Sym2, Vec2};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn vec_in(rng: &mut ChaCha8Rng, half: f64) -> Vec2 {
    Vec2::new(rng.random_range(-half..half), rng.random_range(-half..half))
}

pub fn unit(rng: &mut ChaCha8Rng) -> Vec2 {
    let a = rng.random_range(0.0..std::f64::consts::TAU);
    Vec2::new(a.cos(), a.sin())
}

/// Random covariance `A Aᵀ` with entries of `A` of order `sqrt(scale)`.
pub fn cov(rng: &mut ChaCha8Rng, scale: f64) -> Sym2 {
    if scale == 0.0 {
        return Sym2::ZERO;
    }
    let s = scale.sqrt();
    let (a, b, c, d) = (
        rng.random_range(-s..s),
        rng.random_range(-s..s),
        rng.random_range(-s..s),
        rng.random_range(-s..s),
    );
    Sym2::new(a * a + b * b, a * c + b * d, c * c + d * d)
}

/// Random pair with the robots apart, velocities of order 1 and covariances up to `noise`.
pub fn pair(rng: &mut ChaCha8Rng, noise: f64) -> UncertainPair {
    let radius = rng.random_range(0.4..1.5);
    let r = unit(rng) * rng.random_range(radius + 0.5..radius + 8.0);
    let pi = vec_in(rng, 5.0);
    let g = |m: Vec2, c: Sym2| Gaussian2::new(m, c).unwrap();
    UncertainPair::new(
        g(pi, cov(rng, noise)),
        g(pi + r, cov(rng, noise)),
        g(vec_in(rng, 1.5), cov(rng, noise)),
        g(vec_in(rng, 1.5), cov(rng, noise)),
        cov(rng, noise),
        radius,
    )
    .unwrap()
}

pub fn deterministic_pair(rng: &mut ChaCha8Rng) -> UncertainPair {
    pair(rng, 0.0)
}

/// Mean/variance polynomials of a random noisy pair along a random direction.
pub fn random_polys(rng: &mut ChaCha8Rng) -> ScaledPolys {
    let noise = rng.random_range(0.001..0.1);
    let u = pair(rng, noise);
    scaled_polys(&u, unit(rng)).unwrap()
}

/// Feasible scales of the deterministic RVO constraint along `s · dir`, located by
/// scanning the rational constraint on a fine grid and bisecting each sign change.
pub fn grid_rvo_solution(u: &UncertainPair, dir: Vec2, domain: Interval) -> Vec<(f64, f64)> {
    let f = |s: f64| {
        let g = PairGeometry::new(
            u.pj.mean - u.pi.mean,
            u.combined_radius,
            u.vi.mean,
            u.vj.mean,
            dir * s,
        )
        .unwrap();
        f_rvo(&g).unwrap_or(f64::NEG_INFINITY)
    };
    let n = 20_000;
    let node = |i: usize| domain.lo + (domain.hi - domain.lo) * i as f64 / n as f64;
    let bisect = |mut a: f64, mut b: f64| {
        let fa_ok = f(a) >= 0.0;
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if (f(m) >= 0.0) == fa_ok {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    };
    let mut out = Vec::new();
    let mut start = (f(domain.lo) >= 0.0).then_some(domain.lo);
    for i in 1..=n {
        let (a, b) = (node(i - 1), node(i));
        let (fa, fb) = (f(a) >= 0.0, f(b) >= 0.0);
        if fa != fb {
            let root = bisect(a, b);
            match start.take() {
                Some(lo) => out.push((lo, root)),
                None => start = Some(root),
            }
        }
    }
    if let Some(lo) = start {
        out.push((lo, domain.hi));
    }
    out
}

/// Largest absolute difference between matching endpoints, or `None` when the number of
/// pieces differs.
pub fn endpoint_gap(a: &[(f64, f64)], b: &[(f64, f64)]) -> Option<f64> {
    (a.len() == b.len()).then(|| {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x.0 - y.0).abs().max((x.1 - y.1).abs()))
            .fold(0.0, f64::max)
    })
}

pub fn pieces(set: &prvo::IntervalSet) -> Vec<(f64, f64)> {
    set.intervals().iter().map(|iv| (iv.lo, iv.hi)).collect()
}
