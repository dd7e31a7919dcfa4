//! Seeded sampling from the uncertainty model and empirical estimates built on it.
//!
//! Every stream is a ChaCha8 generator whose seed is derived from a base seed and a
//! key (robot, step, purpose, ...). Streams for different keys are independent, so the
//! statistics do not depend on the order in which they are consumed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::geometry::{Gaussian2, Vec2};
use crate::moments::UncertainPair;
use crate::rvo::{f_rvo_poly_raw, DEGENERATE_W};

/// Independent generator for `(seed, key)`.
pub fn substream(seed: u64, key: &[u64]) -> ChaCha8Rng {
    let mut h = splitmix64(seed ^ 0x5052_564f_5f52_4e47);
    for &k in key {
        h = splitmix64(h ^ splitmix64(k));
    }
    ChaCha8Rng::seed_from_u64(h)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// One draw from `g` using `rng`: `mean + cov^{1/2} z`.
pub fn draw_gaussian2(g: &Gaussian2, rng: &mut ChaCha8Rng) -> Vec2 {
    let z = Vec2::new(StandardNormal.sample(rng), StandardNormal.sample(rng));
    g.mean + g.cov.sqrt_psd().mul_vec(z)
}

/// `n` draws from `g`, reproducible from `seed`.
pub fn sample_gaussian2(g: &Gaussian2, seed: u64, n: usize) -> Vec<Vec2> {
    let mut rng = substream(seed, &[]);
    let root = g.cov.sqrt_psd();
    (0..n)
        .map(|_| {
            let z = Vec2::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng));
            g.mean + root.mul_vec(z)
        })
        .collect()
}

const PURPOSE_PI: u64 = 1;
const PURPOSE_PJ: u64 = 2;
const PURPOSE_VI: u64 = 3;
const PURPOSE_VJ: u64 = 4;
const PURPOSE_ACTUATION: u64 = 5;

/// `n` independent joint draws of `(p_i, p_j, v_i, v_j, ε)` for one pair.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleBatch {
    pub seed: u64,
    pub pi: Vec<Vec2>,
    pub pj: Vec<Vec2>,
    pub vi: Vec<Vec2>,
    pub vj: Vec<Vec2>,
    pub actuation: Vec<Vec2>,
}

impl SampleBatch {
    pub fn draw(u: &UncertainPair, seed: u64, n: usize) -> Self {
        let stream = |g: &Gaussian2, purpose| sample_gaussian2(g, splitmix64(seed ^ purpose), n);
        Self {
            seed,
            pi: stream(&u.pi, PURPOSE_PI),
            pj: stream(&u.pj, PURPOSE_PJ),
            vi: stream(&u.vi, PURPOSE_VI),
            vj: stream(&u.vj, PURPOSE_VJ),
            actuation: stream(
                &Gaussian2 {
                    mean: Vec2::ZERO,
                    cov: u.actuation_cov,
                },
                PURPOSE_ACTUATION,
            ),
        }
    }

    pub fn len(&self) -> usize {
        self.pi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pi.is_empty()
    }

    /// `(r, w)` of draw `k` for the commanded velocity.
    pub fn relative(&self, k: usize, commanded: Vec2) -> (Vec2, Vec2) {
        let r = self.pj[k] - self.pi[k];
        let w = (commanded + self.actuation[k]) * 2.0 - self.vi[k] - self.vj[k];
        (r, w)
    }

    /// Constraint value `F` for every draw.
    pub fn f_values(&self, commanded: Vec2, combined_radius: f64) -> Vec<f64> {
        (0..self.len())
            .map(|k| {
                let (r, w) = self.relative(k, commanded);
                f_rvo_poly_raw(r, w, combined_radius)
            })
            .collect()
    }
}

/// Empirical probability that the RVO constraint holds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EtaEstimate {
    pub eta: f64,
    pub n: usize,
    /// Draws whose reciprocal velocity was numerically zero.
    pub degenerate: usize,
}

impl EtaEstimate {
    /// Binomial standard error of the estimate.
    pub fn stderr(&self) -> f64 {
        (self.eta * (1.0 - self.eta) / self.n as f64).sqrt()
    }
}

/// Fraction of joint draws with `F > 0`. `F = 0` counts as a violation.
pub fn empirical_eta(u: &UncertainPair, commanded: Vec2, n: usize, seed: u64) -> EtaEstimate {
    assert!(n >= 1, "empirical_eta needs at least one sample");
    let batch = SampleBatch::draw(u, seed, n);
    let mut satisfied = 0usize;
    let mut degenerate = 0usize;
    for k in 0..n {
        let (r, w) = batch.relative(k, commanded);
        if w.norm() <= DEGENERATE_W {
            degenerate += 1;
        }
        if f_rvo_poly_raw(r, w, u.combined_radius) > 0.0 {
            satisfied += 1;
        }
    }
    EtaEstimate {
        eta: satisfied as f64 / n as f64,
        n,
        degenerate,
    }
}

/// Sample moments of `F` with their standard errors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McMoments {
    pub mean: f64,
    pub var: f64,
    pub stderr_mean: f64,
    pub stderr_var: f64,
}

/// Monte Carlo estimate of `E[F]` and `Var[F]`. The standard error of the variance uses
/// the fourth central moment: `sqrt((m4 - m2²) / n)`.
pub fn mc_moments(u: &UncertainPair, commanded: Vec2, n: usize, seed: u64) -> McMoments {
    assert!(n >= 100, "mc_moments needs at least 100 samples");
    let values = SampleBatch::draw(u, seed, n).f_values(commanded, u.combined_radius);
    let nf = n as f64;
    let mean = values.iter().sum::<f64>() / nf;
    let (mut m2, mut m4) = (0.0, 0.0);
    for v in &values {
        let d2 = (v - mean) * (v - mean);
        m2 += d2;
        m4 += d2 * d2;
    }
    let var = m2 / (nf - 1.0);
    let (m2, m4) = (m2 / nf, m4 / nf);
    McMoments {
        mean,
        var,
        stderr_mean: (var / nf).sqrt(),
        stderr_var: ((m4 - m2 * m2).max(0.0) / nf).sqrt(),
    }
}
