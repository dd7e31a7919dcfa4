//! Comparison methods: radius inflation and chance-constrained ORCA.

use crate::error::{PrvoError, Result};
use crate::geometry::{quadratic_geq_zero, Interval, IntervalSet, Sym2, Vec2};
use crate::moments::UncertainPair;

/// Radius inflation to a confidence contour of the uncertainty ellipses.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InflationConfig {
    /// Probability mass inside the contour, in (0, 1).
    pub confidence: f64,
    /// Horizon (s) that converts the velocity contour radius into extra clearance.
    pub velocity_horizon: f64,
}

impl InflationConfig {
    pub fn new(confidence: f64) -> Result<Self> {
        Self::with_horizon(confidence, 1.0)
    }

    pub fn with_horizon(confidence: f64, velocity_horizon: f64) -> Result<Self> {
        if !(confidence > 0.0 && confidence < 1.0) {
            return Err(PrvoError::InvalidArgument(format!(
                "confidence must lie in (0, 1), got {confidence}"
            )));
        }
        if !(velocity_horizon >= 0.0 && velocity_horizon.is_finite()) {
            return Err(PrvoError::InvalidArgument(format!(
                "velocity horizon must be >= 0, got {velocity_horizon}"
            )));
        }
        Ok(Self {
            confidence,
            velocity_horizon,
        })
    }
}

/// Radius of the smallest origin-centered circle enclosing the `confidence` ellipse of a
/// zero-mean Gaussian with covariance `cov`: `sqrt(λ_max · χ²₂(confidence))`.
pub fn contour_radius(cov: Sym2, confidence: f64) -> f64 {
    let chi2 = -2.0 * (1.0 - confidence).ln();
    (cov.eigen().0[1].max(0.0) * chi2).sqrt()
}

#[derive(Clone, Debug, PartialEq)]
pub struct InflationOutcome {
    pub set: IntervalSet,
    pub inflated_radius: f64,
    /// The mean positions already overlap once the radius is inflated.
    pub already_in_collision: bool,
}

/// Deterministic RVO solution set along `s · dir` with the combined radius grown by the
/// position contour of `p_i - p_j` and by the relative-velocity contour times the horizon.
pub fn inflated_feasible_scales(
    u: &UncertainPair,
    dir: Vec2,
    cfg: &InflationConfig,
    domain: Interval,
) -> Result<InflationOutcome> {
    let rho_pos = contour_radius(u.pi.cov + u.pj.cov, cfg.confidence);
    let rho_vel = contour_radius(u.vi.cov + u.vj.cov, cfg.confidence);
    let radius = u.combined_radius + rho_pos + rho_vel * cfg.velocity_horizon;
    let r = u.pj.mean - u.pi.mean;
    if r.norm() <= radius {
        return Ok(InflationOutcome {
            set: IntervalSet::empty(),
            inflated_radius: radius,
            already_in_collision: true,
        });
    }
    let (a2, a1, a0) = deterministic_quadratic(r, u.vi.mean + u.vj.mean, dir, radius);
    Ok(InflationOutcome {
        set: quadratic_geq_zero(a2, a1, a0, domain)?,
        inflated_radius: radius,
        already_in_collision: false,
    })
}

/// `F(s) = (r × w)² - R²|w|²` with `w = 2 s dir - v_sum`, as coefficients `(a2, a1, a0)`.
pub fn deterministic_quadratic(r: Vec2, v_sum: Vec2, dir: Vec2, radius: f64) -> (f64, f64, f64) {
    let alpha = 2.0 * r.cross(dir);
    let beta = -r.cross(v_sum);
    let r2 = radius * radius;
    (
        alpha * alpha - 4.0 * r2 * dir.norm_sq(),
        2.0 * alpha * beta + 4.0 * r2 * dir.dot(v_sum),
        beta * beta - r2 * v_sum.norm_sq(),
    )
}

/// ORCA half-plane `z1 · v - z2 ≥ 0` with a Gaussian normal `z1`.
///
/// `z1` is computed at the mean geometry; its covariance comes from first-order
/// propagation of the relative position and relative velocity covariances through the
/// half-plane construction. `z2` is kept at its mean value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrcaHalfplane {
    pub z1_mean: Vec2,
    pub z1_cov: Sym2,
    pub z2: f64,
}

impl OrcaHalfplane {
    /// Deterministic ORCA constraint value at `v`.
    pub fn value(&self, v: Vec2) -> f64 {
        self.z1_mean.dot(v) - self.z2
    }
}

/// Mean ORCA half-plane: the normal and the point `v_i + u/2` on its boundary.
fn orca_line(rel_pos: Vec2, rel_vel: Vec2, vi: Vec2, radius: f64, inv_tau: f64) -> (Vec2, f64) {
    let dist_sq = rel_pos.norm_sq();
    let radius_sq = radius * radius;
    let w = rel_vel - rel_pos * inv_tau;
    let w_len_sq = w.norm_sq();
    let dot1 = w.dot(rel_pos);

    let (direction, u) = if inv_tau > 0.0 && dot1 < 0.0 && dot1 * dot1 > radius_sq * w_len_sq {
        // Project on the cut-off circle.
        let w_len = w_len_sq.sqrt();
        let unit_w = w * (1.0 / w_len);
        (
            Vec2::new(unit_w.y, -unit_w.x),
            unit_w * (radius * inv_tau - w_len),
        )
    } else {
        // Project on a leg; a tie goes to the left (counterclockwise) leg.
        let leg = (dist_sq - radius_sq).sqrt();
        let direction = if rel_pos.cross(w) >= 0.0 {
            Vec2::new(
                rel_pos.x * leg - rel_pos.y * radius,
                rel_pos.x * radius + rel_pos.y * leg,
            ) * (1.0 / dist_sq)
        } else {
            -Vec2::new(
                rel_pos.x * leg + rel_pos.y * radius,
                -rel_pos.x * radius + rel_pos.y * leg,
            ) * (1.0 / dist_sq)
        };
        let u = direction * rel_vel.dot(direction) - rel_vel;
        (direction, u)
    };
    let normal = direction.perp();
    (normal, normal.dot(vi + u * 0.5))
}

/// Builds the half-plane at the mean geometry. `time_horizon` may be infinite, which
/// matches the untruncated velocity obstacle used by the RVO constraint.
pub fn orca_halfplane_from_pair(u: &UncertainPair, time_horizon: f64) -> Result<OrcaHalfplane> {
    if !(time_horizon > 0.0) {
        return Err(PrvoError::InvalidArgument(format!(
            "time horizon must be positive, got {time_horizon}"
        )));
    }
    let inv_tau = if time_horizon.is_finite() {
        1.0 / time_horizon
    } else {
        0.0
    };
    let rel_pos = u.pj.mean - u.pi.mean;
    let rel_vel = u.vi.mean - u.vj.mean;
    let radius = u.combined_radius;
    if rel_pos.norm() <= radius {
        return Err(PrvoError::InCollisionAtMean);
    }
    let normal_at = |p: Vec2, v: Vec2| orca_line(p, v, u.vi.mean, radius, inv_tau).0;
    let (z1_mean, z2) = orca_line(rel_pos, rel_vel, u.vi.mean, radius, inv_tau);

    // Jacobian of the normal with respect to (rel_pos, rel_vel), by central differences
    // on the same branch as the mean construction.
    let h = 1e-6 * (1.0 + rel_pos.norm().max(rel_vel.norm()));
    let axes = [Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)];
    let mut jac_pos = [Vec2::ZERO; 2];
    let mut jac_vel = [Vec2::ZERO; 2];
    for (k, e) in axes.iter().enumerate() {
        jac_pos[k] = (normal_at(rel_pos + *e * h, rel_vel) - normal_at(rel_pos - *e * h, rel_vel))
            * (0.5 / h);
        jac_vel[k] = (normal_at(rel_pos, rel_vel + *e * h) - normal_at(rel_pos, rel_vel - *e * h))
            * (0.5 / h);
    }
    let z1_cov = propagate(&jac_pos, u.pi.cov + u.pj.cov) + propagate(&jac_vel, u.vi.cov + u.vj.cov);
    Ok(OrcaHalfplane {
        z1_mean,
        z1_cov: crate::geometry::clamp_psd(z1_cov).unwrap_or(Sym2::ZERO),
        z2,
    })
}

/// `J C Jᵀ` where column `k` of `J` is `cols[k]`.
fn propagate(cols: &[Vec2; 2], cov: Sym2) -> Sym2 {
    if cov.is_zero() {
        return Sym2::ZERO;
    }
    let (a, b) = (cols[0], cols[1]);
    let entry = |p: f64, q: f64, r: f64, s: f64| {
        p * r * cov.xx + (p * s + q * r) * cov.xy + q * s * cov.yy
    };
    Sym2::new(
        entry(a.x, b.x, a.x, b.x),
        entry(a.x, b.x, a.y, b.y),
        entry(a.y, b.y, a.y, b.y),
    )
}

/// Second-order-cone surrogate of the ORCA chance constraint:
/// `E[z1]·v - z2 - sqrt(η) · sqrt(vᵀ Σ_z1 v) ≥ 0`.
///
/// The back-off multiplier is `sqrt(η)` rather than a Gaussian quantile.
pub fn porca_feasible(h: &OrcaHalfplane, v: Vec2, eta: f64) -> bool {
    debug_assert!((0.0..1.0).contains(&eta));
    h.value(v) - eta.sqrt() * h.z1_cov.quad(v).max(0.0).sqrt() >= 0.0
}

/// Time scales `s` in `domain` (with `domain.lo ≥ 0`) for which `s · dir` is PORCA-feasible.
pub fn porca_feasible_scales(
    h: &OrcaHalfplane,
    dir: Vec2,
    eta: f64,
    domain: Interval,
) -> Result<IntervalSet> {
    // For s ≥ 0 the cone term is s · sqrt(dᵀΣd), so the constraint is linear in s.
    let slope = h.z1_mean.dot(dir) - eta.sqrt() * h.z1_cov.quad(dir).max(0.0).sqrt();
    quadratic_geq_zero(0.0, slope, -h.z2, domain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Gaussian2;
    use crate::rvo::f_rvo_poly_raw;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn g(x: f64, y: f64, cov: Sym2) -> Gaussian2 {
        Gaussian2::new(Vec2::new(x, y), cov).unwrap()
    }

    fn pair(pos_cov: Sym2, vel_cov: Sym2) -> UncertainPair {
        UncertainPair::new(
            g(0.0, 0.0, pos_cov),
            g(6.0, -4.0, pos_cov),
            g(1.0, 0.0, vel_cov),
            g(0.0, 1.0, vel_cov),
            Sym2::ZERO,
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn contour_radius_isotropic() {
        // For σ²I the p-contour radius is σ sqrt(-2 ln(1-p)).
        let r = contour_radius(Sym2::isotropic(0.25), 0.68);
        assert!((r - 0.5 * (-2.0 * 0.32f64.ln()).sqrt()).abs() < 1e-12);
        assert_eq!(contour_radius(Sym2::ZERO, 0.9), 0.0);
    }

    #[test]
    fn tiny_confidence_is_deterministic_rvo() {
        let u = pair(Sym2::isotropic(0.1), Sym2::ZERO);
        let dir = Vec2::new(1.0, 0.0);
        let domain = Interval::new(0.0, 2.0).unwrap();
        let got = inflated_feasible_scales(&u, dir, &InflationConfig::new(1e-15).unwrap(), domain)
            .unwrap();
        let (a2, a1, a0) = deterministic_quadratic(u.pj.mean - u.pi.mean, u.vi.mean + u.vj.mean, dir, 1.0);
        let expect = quadratic_geq_zero(a2, a1, a0, domain).unwrap();
        assert!(got.set.is_subset_of(&expect, 1e-6) && expect.is_subset_of(&got.set, 1e-6));
    }

    #[test]
    fn deterministic_quadratic_matches_f() {
        let (r, vs, d) = (Vec2::new(3.0, 1.0), Vec2::new(0.4, -0.2), Vec2::new(0.6, 0.8));
        let (a2, a1, a0) = deterministic_quadratic(r, vs, d, 1.2);
        for s in [0.0, 0.5, 1.3] {
            let f = f_rvo_poly_raw(r, d * (2.0 * s) - vs, 1.2);
            assert!((a2 * s * s + a1 * s + a0 - f).abs() < 1e-12);
        }
    }

    #[test]
    fn inflated_collision_is_flagged() {
        let u = pair(Sym2::isotropic(9.0), Sym2::ZERO);
        let out = inflated_feasible_scales(
            &u,
            Vec2::new(1.0, 0.0),
            &InflationConfig::new(0.9).unwrap(),
            Interval::new(0.0, 2.0).unwrap(),
        )
        .unwrap();
        assert!(out.already_in_collision && out.set.is_empty());
    }

    #[test]
    fn head_on_tie_breaks_counterclockwise() {
        let u = UncertainPair::new(
            g(0.0, 0.0, Sym2::ZERO),
            g(10.0, 0.0, Sym2::ZERO),
            g(1.0, 0.0, Sym2::ZERO),
            g(-1.0, 0.0, Sym2::ZERO),
            Sym2::ZERO,
            1.0,
        )
        .unwrap();
        let h = orca_halfplane_from_pair(&u, f64::INFINITY).unwrap();
        assert_eq!(h.z1_cov, Sym2::ZERO);
        assert!(h.z1_mean.y > 0.0);
        // Normal to the left tangent leg, which leaves the line of centers at asin(R/d).
        let leg = Vec2::new(99.0f64.sqrt(), 1.0);
        assert!(h.z1_mean.dot(leg).abs() < 1e-12);
        assert!((h.z1_mean.x.abs() - 0.1).abs() < 1e-12);
        // The colliding current velocity lies outside the half-plane.
        assert!(h.value(u.vi.mean) < 0.0);
    }

    #[test]
    fn rejects_overlap() {
        let mut u = pair(Sym2::ZERO, Sym2::ZERO);
        u.pj.mean = Vec2::new(0.5, 0.0);
        assert_eq!(orca_halfplane_from_pair(&u, 2.0), Err(PrvoError::InCollisionAtMean));
    }

    #[test]
    fn excludes_colliding_velocity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut checked = 0;
        while checked < 500 {
            let r = Vec2::new(rng.random_range(-8.0..8.0), rng.random_range(-8.0..8.0));
            let vi = Vec2::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let vj = Vec2::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            if r.norm() < 1.5 {
                continue;
            }
            // Only pairs whose current relative velocity is inside the (untruncated) cone.
            let rel = vi - vj;
            if r.dot(rel) <= 0.0 || r.cross(rel).powi(2) >= rel.norm_sq() * 1.0 {
                continue;
            }
            let u = UncertainPair::new(
                g(0.0, 0.0, Sym2::isotropic(0.05)),
                g(r.x, r.y, Sym2::isotropic(0.05)),
                g(vi.x, vi.y, Sym2::isotropic(0.02)),
                g(vj.x, vj.y, Sym2::isotropic(0.02)),
                Sym2::ZERO,
                1.0,
            )
            .unwrap();
            let h = orca_halfplane_from_pair(&u, f64::INFINITY).unwrap();
            assert!(h.value(vi) < 0.0, "{h:?}");
            checked += 1;
        }
    }

    #[test]
    fn porca_reduces_to_orca() {
        let h = OrcaHalfplane {
            z1_mean: Vec2::new(0.6, 0.8),
            z1_cov: Sym2::ZERO,
            z2: 0.5,
        };
        for v in [Vec2::new(1.0, 0.0), Vec2::new(0.0, 0.2), Vec2::new(-1.0, 2.0)] {
            assert_eq!(porca_feasible(&h, v, 0.0), h.value(v) >= 0.0);
        }
    }

    #[test]
    fn porca_monotone_in_eta() {
        let h = OrcaHalfplane {
            z1_mean: Vec2::new(0.6, 0.8),
            z1_cov: Sym2::new(0.05, 0.01, 0.02),
            z2: 0.75,
        };
        let v = Vec2::new(0.7, 0.6);
        let flags: Vec<bool> = (0..100).map(|i| porca_feasible(&h, v, i as f64 / 100.0)).collect();
        assert!(flags.windows(2).all(|w| w[0] || !w[1]));
        assert!(flags[0] && !flags[99]);
    }

    #[test]
    fn porca_scales_match_pointwise() {
        let h = OrcaHalfplane {
            z1_mean: Vec2::new(-0.3, 0.9),
            z1_cov: Sym2::new(0.05, 0.01, 0.02),
            z2: -0.4,
        };
        let dir = Vec2::new(0.8, 0.6);
        let set = porca_feasible_scales(&h, dir, 0.5, Interval::new(0.0, 2.0).unwrap()).unwrap();
        for i in 0..=200 {
            let s = 2.0 * i as f64 / 200.0;
            if set.intervals().iter().any(|iv| (iv.hi - s).abs() < 1e-9) {
                continue;
            }
            assert_eq!(set.contains(s), porca_feasible(&h, dir * s, 0.5), "s = {s}");
        }
    }
}
