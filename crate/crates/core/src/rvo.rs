//! Deterministic reciprocal velocity obstacle constraint for disc robots moving as
//! single integrators.
//!
//! With `r = p_j - p_i`, combined radius `R = R_i + R_j` and the reciprocal relative
//! velocity `w = 2 v_rvo - v_i - v_j`, the constraint is
//!
//! ```text
//! f = |r|² - (rᵀw)² / |w|² - R²  ≥ 0
//! ```
//!
//! i.e. the squared distance from `r` to the line spanned by `w` exceeds `R²`. The
//! polynomial form `F = |r|²|w|² - (rᵀw)² - R²|w|² = (r × w)² - R²|w|²` has the same
//! sign wherever `w ≠ 0` and is what the moment engine works with.

use crate::error::{PrvoError, Result};
use crate::geometry::Vec2;

/// Below this norm the reciprocal relative velocity is considered zero.
pub const DEGENERATE_W: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RobotState {
    pub position: Vec2,
    pub velocity: Vec2,
    pub radius: f64,
}

impl RobotState {
    pub fn new(position: Vec2, velocity: Vec2, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(PrvoError::InvalidArgument(format!(
                "radius must be positive, got {radius}"
            )));
        }
        if !position.is_finite() || !velocity.is_finite() {
            return Err(PrvoError::NonFinite("robot state"));
        }
        Ok(Self {
            position,
            velocity,
            radius,
        })
    }
}

/// Geometry of one robot pair as seen by robot `i`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairGeometry {
    /// `p_j - p_i`.
    pub r: Vec2,
    /// `R_i + R_j`.
    pub combined_radius: f64,
    pub vi: Vec2,
    pub vj: Vec2,
    /// Candidate avoidance velocity of robot `i`.
    pub vrvo: Vec2,
}

impl PairGeometry {
    pub fn new(r: Vec2, combined_radius: f64, vi: Vec2, vj: Vec2, vrvo: Vec2) -> Result<Self> {
        if !(combined_radius > 0.0) {
            return Err(PrvoError::InvalidArgument(format!(
                "combined radius must be positive, got {combined_radius}"
            )));
        }
        if ![r, vi, vj, vrvo].iter().all(|v| v.is_finite()) {
            return Err(PrvoError::NonFinite("pair geometry"));
        }
        Ok(Self {
            r,
            combined_radius,
            vi,
            vj,
            vrvo,
        })
    }

    pub fn between(i: &RobotState, j: &RobotState, vrvo: Vec2) -> Result<Self> {
        Self::new(
            j.position - i.position,
            i.radius + j.radius,
            i.velocity,
            j.velocity,
            vrvo,
        )
    }

    /// `2 v_rvo - v_i - v_j`.
    pub fn w(&self) -> Vec2 {
        reciprocal_velocity(self.vrvo, self.vi, self.vj)
    }
}

pub fn reciprocal_velocity(vrvo: Vec2, vi: Vec2, vj: Vec2) -> Vec2 {
    vrvo * 2.0 - vi - vj
}

/// Rational RVO constraint value (m²). Positive means collision-free.
pub fn f_rvo(g: &PairGeometry) -> Result<f64> {
    let w = g.w();
    let w2 = w.norm_sq();
    if w2.sqrt() <= DEGENERATE_W {
        return Err(PrvoError::DegenerateRelativeVelocity);
    }
    let rw = g.r.dot(w);
    Ok(g.r.norm_sq() - rw * rw / w2 - g.combined_radius * g.combined_radius)
}

/// Polynomial RVO constraint value; total degree 4 in the components of the geometry.
pub fn f_rvo_poly(g: &PairGeometry) -> f64 {
    f_rvo_poly_raw(g.r, g.w(), g.combined_radius)
}

/// `F` expressed directly in `r` and `w`.
pub fn f_rvo_poly_raw(r: Vec2, w: Vec2, combined_radius: f64) -> f64 {
    let c = r.cross(w);
    c * c - combined_radius * combined_radius * w.norm_sq()
}

/// One Euler step of the single-integrator model.
pub fn step_integrator(state: &RobotState, v: Vec2, dt: f64) -> RobotState {
    debug_assert!(dt > 0.0);
    RobotState {
        position: state.position + v * dt,
        velocity: v,
        radius: state.radius,
    }
}
