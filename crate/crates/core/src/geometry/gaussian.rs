use super::{Sym2, Vec2};
use crate::error::{PrvoError, Result};

/// Eigenvalues above this (negative) threshold are treated as round-off and clamped.
pub const PSD_TOLERANCE: f64 = 1e-12;

/// A 2D Gaussian random vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gaussian2 {
    pub mean: Vec2,
    pub cov: Sym2,
}

impl Gaussian2 {
    /// Builds a Gaussian, rejecting non-finite input or an indefinite covariance.
    /// Eigenvalues in `[-1e-12, 0)` are clamped to zero.
    pub fn new(mean: Vec2, cov: Sym2) -> Result<Self> {
        if !mean.is_finite() {
            return Err(PrvoError::NonFinite("gaussian mean"));
        }
        Ok(Self {
            mean,
            cov: clamp_psd(cov)?,
        })
    }

    /// A point mass at `mean`.
    pub fn deterministic(mean: Vec2) -> Self {
        Self {
            mean,
            cov: Sym2::ZERO,
        }
    }

    pub fn is_deterministic(&self) -> bool {
        self.cov.is_zero()
    }
}

/// Validates a covariance matrix and clamps round-off negative eigenvalues to zero.
pub fn clamp_psd(cov: Sym2) -> Result<Sym2> {
    if !cov.is_finite() {
        return Err(PrvoError::NonFinite("covariance"));
    }
    let ([lo, hi], u) = cov.eigen();
    if lo < -PSD_TOLERANCE {
        return Err(PrvoError::NotPsd { min_eigenvalue: lo });
    }
    if lo >= 0.0 {
        return Ok(cov);
    }
    let hi = hi.max(0.0);
    Ok(Sym2::new(hi * u.x * u.x, hi * u.x * u.y, hi * u.y * u.y))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_indefinite() {
        let err = Gaussian2::new(Vec2::ZERO, Sym2::new(1.0, 2.0, 1.0)).unwrap_err();
        assert!(matches!(err, PrvoError::NotPsd { .. }));
    }

    #[test]
    fn clamps_round_off() {
        let g = Gaussian2::new(Vec2::ZERO, Sym2::new(1.0, 1.0 + 1e-13, 1.0)).unwrap();
        assert!(g.cov.eigen().0[0] >= 0.0 || g.cov.eigen().0[0].abs() < 1e-15);
    }

    #[test]
    fn rejects_nan_mean() {
        assert!(Gaussian2::new(Vec2::new(f64::NAN, 0.0), Sym2::ZERO).is_err());
    }
}
