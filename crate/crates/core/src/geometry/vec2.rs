use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A 2D vector. Used for positions (m), velocities (m/s) and relative quantities.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// Scalar 2D cross product `self.x * other.y - self.y * other.x`.
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Unit vector in the same direction, or zero for the zero vector.
    pub fn normalized(self) -> Vec2 {
        let n = self.norm();
        if n > 0.0 {
            self * (1.0 / n)
        } else {
            Vec2::ZERO
        }
    }

    /// Counterclockwise rotation by 90 degrees.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn rotated(self, angle: f64) -> Vec2 {
        let (s, c) = angle.sin_cos();
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<[f64; 2]> for Vec2 {
    fn from(v: [f64; 2]) -> Self {
        Vec2::new(v[0], v[1])
    }
}

impl From<Vec2> for [f64; 2] {
    fn from(v: Vec2) -> Self {
        [v.x, v.y]
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    fn mul(self, v: Vec2) -> Vec2 {
        v * self
    }
}

/// A symmetric 2x2 matrix `[[xx, xy], [xy, yy]]`, used for covariances.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Sym2 {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

impl Sym2 {
    pub const ZERO: Sym2 = Sym2 {
        xx: 0.0,
        xy: 0.0,
        yy: 0.0,
    };

    pub const fn new(xx: f64, xy: f64, yy: f64) -> Self {
        Self { xx, xy, yy }
    }

    pub const fn diag(xx: f64, yy: f64) -> Self {
        Self { xx, xy: 0.0, yy }
    }

    pub const fn isotropic(v: f64) -> Self {
        Self::diag(v, v)
    }

    pub fn scaled(self, k: f64) -> Sym2 {
        Sym2::new(self.xx * k, self.xy * k, self.yy * k)
    }

    pub fn trace(self) -> f64 {
        self.xx + self.yy
    }

    pub fn det(self) -> f64 {
        self.xx * self.yy - self.xy * self.xy
    }

    pub fn is_zero(self) -> bool {
        self.xx == 0.0 && self.xy == 0.0 && self.yy == 0.0
    }

    pub fn is_finite(self) -> bool {
        self.xx.is_finite() && self.xy.is_finite() && self.yy.is_finite()
    }

    pub fn mul_vec(self, v: Vec2) -> Vec2 {
        Vec2::new(self.xx * v.x + self.xy * v.y, self.xy * v.x + self.yy * v.y)
    }

    /// Quadratic form `vᵀ M v`.
    pub fn quad(self, v: Vec2) -> f64 {
        v.dot(self.mul_vec(v))
    }

    /// Eigenvalues in ascending order and the unit eigenvector of the larger one.
    pub fn eigen(self) -> ([f64; 2], Vec2) {
        let half_tr = 0.5 * self.trace();
        let half_diff = 0.5 * (self.xx - self.yy);
        let rad = half_diff.hypot(self.xy);
        let hi = half_tr + rad;
        let lo = half_tr - rad;
        let dir = if self.xy == 0.0 && half_diff >= 0.0 {
            Vec2::new(1.0, 0.0)
        } else if self.xy == 0.0 {
            Vec2::new(0.0, 1.0)
        } else {
            Vec2::new(self.xy, hi - self.xx).normalized()
        };
        ([lo, hi], dir)
    }

    /// Smallest eigenvalue is at least `-tol`.
    pub fn is_psd(self, tol: f64) -> bool {
        self.is_finite() && self.eigen().0[0] >= -tol
    }

    /// Symmetric PSD square root, with slightly negative eigenvalues clamped to zero.
    pub fn sqrt_psd(self) -> Sym2 {
        let ([lo, hi], u) = self.eigen();
        let (a, b) = (lo.max(0.0).sqrt(), hi.max(0.0).sqrt());
        // M = b u uᵀ + a v vᵀ with v ⟂ u, and u uᵀ + v vᵀ = I.
        let d = b - a;
        Sym2::new(a + d * u.x * u.x, d * u.x * u.y, a + d * u.y * u.y)
    }
}

impl Add for Sym2 {
    type Output = Sym2;
    fn add(self, o: Sym2) -> Sym2 {
        Sym2::new(self.xx + o.xx, self.xy + o.xy, self.yy + o.yy)
    }
}

impl From<[[f64; 2]; 2]> for Sym2 {
    fn from(m: [[f64; 2]; 2]) -> Self {
        Sym2::new(m[0][0], 0.5 * (m[0][1] + m[1][0]), m[1][1])
    }
}

impl From<Sym2> for [[f64; 2]; 2] {
    fn from(m: Sym2) -> Self {
        [[m.xx, m.xy], [m.xy, m.yy]]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_squares_back() {
        for m in [
            Sym2::new(1.0, 0.5, 1.0),
            Sym2::diag(4.0, 0.25),
            Sym2::new(2.0, -1.2, 0.9),
            Sym2::diag(0.0, 3.0),
        ] {
            let s = m.sqrt_psd();
            let sq = Sym2::new(
                s.xx * s.xx + s.xy * s.xy,
                s.xx * s.xy + s.xy * s.yy,
                s.xy * s.xy + s.yy * s.yy,
            );
            assert!((sq.xx - m.xx).abs() < 1e-12);
            assert!((sq.xy - m.xy).abs() < 1e-12);
            assert!((sq.yy - m.yy).abs() < 1e-12);
        }
    }

    #[test]
    fn eigen_of_diag_and_rank_one() {
        let ([lo, hi], dir) = Sym2::diag(1.0, 4.0).eigen();
        assert_eq!((lo, hi), (1.0, 4.0));
        assert_eq!(dir, Vec2::new(0.0, 1.0));
        let ([lo, hi], _) = Sym2::new(1.0, 1.0, 1.0).eigen();
        assert!(lo.abs() < 1e-15 && (hi - 2.0).abs() < 1e-15);
    }

    #[test]
    fn cross_matches_lagrange_identity() {
        let r = Vec2::new(3.0, -2.0);
        let w = Vec2::new(0.5, 7.0);
        let lhs = r.norm_sq() * w.norm_sq() - r.dot(w).powi(2);
        assert!((lhs - r.cross(w).powi(2)).abs() < 1e-10);
    }
}
