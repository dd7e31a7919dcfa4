//! Solving the surrogate constraint `μ(s) - k σ(s) ≥ 0` along a time-scaled path.
//!
//! [`solve_taylor`] replaces `σ(s)` by its second-order expansion around `s*` and solves
//! a single quadratic inequality. [`solve_exact`] solves the same constraint without
//! approximation (`μ ≥ 0` and `μ² ≥ k² var`) and serves as the reference.

use crate::error::{PrvoError, Result};
use crate::geometry::{intersect_all, Interval, IntervalSet, Poly};
use crate::moments::ScaledPolys;

/// Default upper bound on the time scale.
pub const DEFAULT_S_MAX: f64 = 2.0;

/// Below this the standard deviation is treated as zero for derivative purposes.
pub const SIGMA_FLOOR: f64 = 1e-12;
const S_STAR_SHIFT: f64 = 0.1;
const S_STAR_RETRIES: usize = 10;

/// Guaranteed lower bound `k²/(1+k²)` on the satisfaction probability.
pub fn cantelli_eta(k: f64) -> f64 {
    debug_assert!(k >= 0.0);
    let k2 = k * k;
    k2 / (1.0 + k2)
}

/// Smallest `k` whose Cantelli bound reaches `eta`.
pub fn cantelli_k(eta: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&eta) {
        if eta >= 1.0 {
            return Err(PrvoError::UnreachableConfidence(eta));
        }
        return Err(PrvoError::InvalidArgument(format!(
            "confidence must lie in [0, 1), got {eta}"
        )));
    }
    Ok((eta / (1.0 - eta)).sqrt())
}

/// One pair's surrogate constraint along one candidate path.
#[derive(Clone, Debug, PartialEq)]
pub struct SurrogateProblem {
    pub polys: ScaledPolys,
    pub k: f64,
    pub domain: Interval,
    /// Expansion point for the Taylor approximation of `σ`.
    pub s_star: f64,
}

impl SurrogateProblem {
    /// Builds a problem with `s*` picked by [`choose_s_star`].
    pub fn new(polys: ScaledPolys, k: f64, domain: Interval) -> Result<Self> {
        if !(k >= 0.0 && k.is_finite()) {
            return Err(PrvoError::InvalidArgument(format!("k must be >= 0, got {k}")));
        }
        if domain.lo < 0.0 {
            return Err(PrvoError::InvalidArgument(format!(
                "time-scale domain must start at s >= 0, got {}",
                domain.lo
            )));
        }
        let s_star = choose_s_star(&polys, domain);
        Ok(Self {
            polys,
            k,
            domain,
            s_star,
        })
    }

    pub fn with_k(&self, k: f64) -> Self {
        Self { k, ..self.clone() }
    }
}

/// Expansion point: midpoint of the widest piece of `{μ ≥ 0}` in the domain (unbounded
/// pieces use `lo + 1`), or the maximizer of `μ` when that set is empty.
pub fn choose_s_star(polys: &ScaledPolys, domain: Interval) -> f64 {
    let feasible = polys.mu.geq_zero(domain);
    match feasible.widest() {
        Some(iv) if iv.is_bounded() => 0.5 * (iv.lo + iv.hi),
        Some(iv) => iv.lo + 1.0,
        None => argmax_quadratic(&polys.mu, domain),
    }
}

fn argmax_quadratic(mu: &Poly, domain: Interval) -> f64 {
    let mut candidates = vec![domain.lo];
    if domain.is_bounded() {
        candidates.push(domain.hi);
    }
    let (a, b) = (mu.coeff(2), mu.coeff(1));
    if a < 0.0 {
        let vertex = -b / (2.0 * a);
        if domain.contains(vertex) {
            candidates.push(vertex);
        }
    }
    candidates
        .into_iter()
        .fold((f64::NEG_INFINITY, domain.lo), |(best, arg), s| {
            let v = mu.eval(s);
            if v > best {
                (v, s)
            } else {
                (best, arg)
            }
        })
        .1
}

/// `σ`, `σ'` and `σ''` at `s` from the variance polynomial.
pub fn sigma_derivatives(var: &Poly, s: f64) -> (f64, f64, f64) {
    let v = var.eval(s).max(0.0);
    let d1 = var.derivative();
    let (v1, v2) = (d1.eval(s), d1.derivative().eval(s));
    let sigma = v.sqrt();
    let sigma1 = v1 / (2.0 * sigma);
    let sigma2 = (2.0 * v2 * v - v1 * v1) / (4.0 * v * sigma);
    (sigma, sigma1, sigma2)
}

/// Coefficients `(a2, a1, a0)` of the quadratic `μ(s) - k T(s)`, where `T` is the
/// second-order expansion of `σ` around `s_star`.
pub fn taylor_quadratic(polys: &ScaledPolys, k: f64, s_star: f64) -> (f64, f64, f64) {
    let (a, b, c) = (polys.mu.coeff(2), polys.mu.coeff(1), polys.mu.coeff(0));
    if polys.var.is_zero() || k == 0.0 {
        return (a, b, c);
    }
    let (s0, s1, s2) = sigma_derivatives(&polys.var, s_star);
    (
        a - k * 0.5 * s2,
        b - k * (s1 - s2 * s_star),
        c - k * (s0 - s1 * s_star + 0.5 * s2 * s_star * s_star),
    )
}

/// Approximate solution set via the Taylor-quadratic surrogate.
///
/// If `σ(s*)` vanishes while the variance polynomial does not, `s*` is shifted by `0.1`
/// up to ten times before giving up.
pub fn solve_taylor(problem: &SurrogateProblem) -> Result<IntervalSet> {
    let polys = &problem.polys;
    if polys.var.is_zero() || problem.k == 0.0 {
        return Ok(polys.mu.geq_zero(problem.domain));
    }
    let mut s_star = problem.s_star;
    for attempt in 0..=S_STAR_RETRIES {
        if polys.sigma(s_star) > SIGMA_FLOOR {
            let (a2, a1, a0) = taylor_quadratic(polys, problem.k, s_star);
            return crate::geometry::quadratic_geq_zero(a2, a1, a0, problem.domain);
        }
        if attempt < S_STAR_RETRIES {
            s_star += S_STAR_SHIFT;
        }
    }
    Err(PrvoError::VanishingVariance)
}

/// Exact solution set: `μ ≥ 0` and `μ² - k² var ≥ 0`.
pub fn solve_exact(problem: &SurrogateProblem) -> IntervalSet {
    let polys = &problem.polys;
    let mean_ok = polys.mu.geq_zero(problem.domain);
    if polys.var.is_zero() || problem.k == 0.0 || mean_ok.is_empty() {
        return mean_ok;
    }
    let mu2 = polys.mu.mul(&polys.mu).expect("square of a quadratic is quartic");
    let quartic = mu2.sub(&polys.var.scaled(problem.k * problem.k));
    if quartic.is_zero() {
        return mean_ok;
    }
    mean_ok.intersect(&quartic.geq_zero(problem.domain))
}

/// Time scales feasible for every pair at once (Taylor solver). Pairs must share a domain.
pub fn feasible_scales(pairs: &[SurrogateProblem]) -> Result<IntervalSet> {
    if pairs.is_empty() {
        return Err(PrvoError::InvalidArgument(
            "feasible_scales needs at least one pair".into(),
        ));
    }
    let sets = pairs.iter().map(solve_taylor).collect::<Result<Vec<_>>>()?;
    Ok(intersect_all(&sets))
}
