//! Exact mean and variance of the polynomial RVO constraint under Gaussian uncertainty.
//!
//! Write `F = c² - R² q` with `c = r × w` and `q = |w|²`. The relative position `r` and
//! the reciprocal velocity `w` are independent Gaussians, and for a fixed `w` the cross
//! product `c = rᵀ(Jw)` is Gaussian with mean `m_c = m_rᵀ Jw` and variance
//! `v_c = (Jw)ᵀ C_r (Jw)`. Hence
//!
//! ```text
//! E[F | w]   = m_c² + v_c - R² q
//! Var[F | w] = 4 m_c² v_c + 2 v_c²
//! ```
//!
//! Both are polynomials in `w`. Substituting `w = m_w + B z` with `B = C_w^{1/2}` and
//! `z ~ N(0, I)` gives polynomials in two independent standard normals whose expectations
//! follow from `E[z^{2k}] = (2k-1)!!`. The law of total variance combines the two parts.

use crate::error::{PrvoError, Result};
use crate::geometry::{Gaussian2, Poly, Sym2, Vec2};

/// Uncertain geometry of a robot pair, from robot `i`'s point of view.
///
/// All five random inputs are mutually independent. The executed avoidance velocity is
/// the commanded one plus zero-mean noise with covariance `actuation_cov`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UncertainPair {
    pub pi: Gaussian2,
    pub pj: Gaussian2,
    pub vi: Gaussian2,
    pub vj: Gaussian2,
    pub actuation_cov: Sym2,
    pub combined_radius: f64,
}

impl UncertainPair {
    pub fn new(
        pi: Gaussian2,
        pj: Gaussian2,
        vi: Gaussian2,
        vj: Gaussian2,
        actuation_cov: Sym2,
        combined_radius: f64,
    ) -> Result<Self> {
        if !(combined_radius > 0.0 && combined_radius.is_finite()) {
            return Err(PrvoError::InvalidArgument(format!(
                "combined radius must be positive, got {combined_radius}"
            )));
        }
        Ok(Self {
            pi,
            pj,
            vi,
            vj,
            actuation_cov: crate::geometry::clamp_psd(actuation_cov)?,
            combined_radius,
        })
    }

    /// Same pair with every covariance set to zero.
    pub fn at_means(&self) -> Self {
        Self {
            pi: Gaussian2::deterministic(self.pi.mean),
            pj: Gaussian2::deterministic(self.pj.mean),
            vi: Gaussian2::deterministic(self.vi.mean),
            vj: Gaussian2::deterministic(self.vj.mean),
            actuation_cov: Sym2::ZERO,
            combined_radius: self.combined_radius,
        }
    }

    pub fn without_actuation(&self) -> Self {
        Self {
            actuation_cov: Sym2::ZERO,
            ..*self
        }
    }

    /// Distribution of `r = p_j - p_i`.
    pub fn relative_position(&self) -> Gaussian2 {
        Gaussian2 {
            mean: self.pj.mean - self.pi.mean,
            cov: self.pi.cov + self.pj.cov,
        }
    }

    /// Distribution of `w = 2 (commanded + ε) - v_i - v_j`.
    pub fn reciprocal_velocity(&self, commanded: Vec2) -> Gaussian2 {
        Gaussian2 {
            mean: commanded * 2.0 - self.vi.mean - self.vj.mean,
            cov: self.actuation_cov.scaled(4.0) + self.vi.cov + self.vj.cov,
        }
    }

    pub fn is_deterministic(&self) -> bool {
        self.pi.is_deterministic()
            && self.pj.is_deterministic()
            && self.vi.is_deterministic()
            && self.vj.is_deterministic()
            && self.actuation_cov.is_zero()
    }
}

/// Mean and variance of a scalar random quantity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub var: f64,
}

const Z_DEG: usize = 8;

/// Polynomial in two independent standard normals, total degree at most 8.
#[derive(Clone, Copy)]
struct ZPoly {
    c: [[f64; Z_DEG + 1]; Z_DEG + 1],
    deg: usize,
}

impl ZPoly {
    fn constant(v: f64) -> Self {
        let mut c = [[0.0; Z_DEG + 1]; Z_DEG + 1];
        c[0][0] = v;
        Self { c, deg: 0 }
    }

    fn affine(c0: f64, c1: f64, c2: f64) -> Self {
        let mut p = Self::constant(c0);
        p.c[1][0] = c1;
        p.c[0][1] = c2;
        p.deg = 1;
        p
    }

    fn add(&self, o: &ZPoly, k: f64) -> ZPoly {
        let mut out = *self;
        for i in 0..=o.deg {
            for j in 0..=o.deg - i {
                out.c[i][j] += k * o.c[i][j];
            }
        }
        out.deg = self.deg.max(o.deg);
        out
    }

    fn mul(&self, o: &ZPoly) -> ZPoly {
        assert!(self.deg + o.deg <= Z_DEG, "moment polynomial degree overflow");
        let mut out = ZPoly::constant(0.0);
        for i in 0..=self.deg {
            for j in 0..=self.deg - i {
                let a = self.c[i][j];
                if a == 0.0 {
                    continue;
                }
                for k in 0..=o.deg {
                    for l in 0..=o.deg - k {
                        out.c[i + k][j + l] += a * o.c[k][l];
                    }
                }
            }
        }
        out.deg = self.deg + o.deg;
        out
    }

    fn scale(&self, k: f64) -> ZPoly {
        ZPoly::constant(0.0).add(self, k)
    }

    /// Expectation over `z ~ N(0, I₂)`.
    fn expectation(&self) -> f64 {
        let mut acc = 0.0;
        for i in (0..=self.deg).step_by(2) {
            for j in (0..=self.deg - i).step_by(2) {
                acc += self.c[i][j] * STD_NORMAL_MOMENTS[i] * STD_NORMAL_MOMENTS[j];
            }
        }
        acc
    }
}

/// `E[z^n]` for a standard normal: `(n-1)!!` for even `n`, zero for odd.
const STD_NORMAL_MOMENTS: [f64; Z_DEG + 1] = [1.0, 0.0, 1.0, 0.0, 3.0, 0.0, 15.0, 0.0, 105.0];

/// Exact `E[F]` and `Var[F]` for the commanded avoidance velocity `commanded`.
/// The variance is clamped at zero.
pub fn moments_of_f(u: &UncertainPair, commanded: Vec2) -> Moments {
    let r = u.relative_position();
    let w = u.reciprocal_velocity(commanded);
    let b = w.cov.sqrt_psd();

    let wx = ZPoly::affine(w.mean.x, b.xx, b.xy);
    let wy = ZPoly::affine(w.mean.y, b.xy, b.yy);

    // c = r × w = r_x w_y - r_y w_x, conditional mean over r.
    let mc = wy.scale(r.mean.x).add(&wx, -r.mean.y);
    let (wxx, wyy, wxy) = (wx.mul(&wx), wy.mul(&wy), wx.mul(&wy));
    // v_c = (w_y, -w_x) C_r (w_y, -w_x)ᵀ
    let vc = wyy
        .scale(r.cov.xx)
        .add(&wxy, -2.0 * r.cov.xy)
        .add(&wxx, r.cov.yy);
    let q = wxx.add(&wyy, 1.0);

    let mc2 = mc.mul(&mc);
    let radius2 = u.combined_radius * u.combined_radius;
    let cond_mean = mc2.add(&vc, 1.0).add(&q, -radius2);
    let cond_var = mc2.mul(&vc).scale(4.0).add(&vc.mul(&vc), 2.0);

    let mean = cond_mean.expectation();
    let centered = cond_mean.add(&ZPoly::constant(mean), -1.0);
    let var = cond_var.expectation() + centered.mul(&centered).expectation();
    Moments {
        mean,
        var: var.max(0.0),
    }
}

/// Mean and variance of `F` along the time-scaled path `commanded = s · dir`.
///
/// `mean(s) = a s² + b s + c`, `var(s) = d s⁴ + e s³ + f s² + g s + h`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledPolys {
    pub mu: Poly,
    pub var: Poly,
}

impl ScaledPolys {
    /// Standard deviation at `s`, with round-off negative variance clamped to zero.
    pub fn sigma(&self, s: f64) -> f64 {
        self.var.eval(s).max(0.0).sqrt()
    }

    /// Surrogate value `μ(s) - k σ(s)`.
    pub fn surrogate(&self, k: f64, s: f64) -> f64 {
        self.mu.eval(s) - k * self.sigma(s)
    }
}

const HELD_OUT_NODE: f64 = 3.0;
const HELD_OUT_TOLERANCE: f64 = 1e-6;

/// Recovers the mean and variance polynomials by exact interpolation of
/// [`moments_of_f`] at `s ∈ {-2, -1, 0, 1, 2}`, then checks the fit at `s = 3`.
pub fn scaled_polys(u: &UncertainPair, dir: Vec2) -> Result<ScaledPolys> {
    if dir == Vec2::ZERO || !dir.is_finite() {
        return Err(PrvoError::InvalidArgument(
            "candidate direction must be nonzero".into(),
        ));
    }
    let at = |s: f64| moments_of_f(u, dir * s);
    let [m2n, m1n, m0, m1, m2] = [-2.0, -1.0, 0.0, 1.0, 2.0].map(at);

    let mu = {
        let c = m0.mean;
        let b = 0.5 * (m1.mean - m1n.mean);
        let a = 0.5 * (m1.mean + m1n.mean) - c;
        Poly::new(&[c, b, a])?
    };
    let var = {
        // Split into even and odd parts and solve the two 2x2 systems.
        let h = m0.var;
        let (e1, e2) = (0.5 * (m1.var + m1n.var), 0.5 * (m2.var + m2n.var));
        let (o1, o2) = (0.5 * (m1.var - m1n.var), 0.5 * (m2.var - m2n.var));
        let d = (e2 - 4.0 * e1 + 3.0 * h) / 12.0;
        let f = e1 - h - d;
        let e = (o2 - 2.0 * o1) / 6.0;
        let g = o1 - e;
        Poly::new(&[h, g, f, e, d])?
    };

    let check = at(HELD_OUT_NODE);
    for (poly, direct) in [(&mu, check.mean), (&var, check.var)] {
        let magnitude: f64 = 1.0
            + direct.abs()
            + poly
                .coeffs()
                .iter()
                .enumerate()
                .map(|(i, c)| c.abs() * HELD_OUT_NODE.powi(i as i32))
                .sum::<f64>();
        let residual = (poly.eval(HELD_OUT_NODE) - direct).abs() / magnitude;
        if residual > HELD_OUT_TOLERANCE {
            return Err(PrvoError::DegreeAssumptionViolated { residual });
        }
    }
    Ok(ScaledPolys { mu, var })
}
