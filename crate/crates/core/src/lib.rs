//! Probabilistic reciprocal velocity obstacles (PRVO).
//!
//! Chance constraints over the reciprocal velocity obstacle inequality are replaced by
//! the mean-variance surrogate `μ - kσ ≥ 0`, which Cantelli's inequality maps to a
//! guaranteed satisfaction probability `k²/(1+k²)`. Along a straight candidate path the
//! commanded velocity is `s · dir`, the mean is quadratic in `s` and the variance
//! quartic, and a second-order expansion of `σ` turns the surrogate into one quadratic
//! inequality per neighbor.

pub mod baselines;
pub mod commands;
pub mod error;
pub mod geometry;
pub mod moments;
pub mod montecarlo;
pub mod rvo;
pub mod scenario;
pub mod simulator;
pub mod surrogate;

pub use error::{PrvoError, Result};
pub use geometry::{Gaussian2, Interval, IntervalSet, Poly, Sym2, Vec2};
