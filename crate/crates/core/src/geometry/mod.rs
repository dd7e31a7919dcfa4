//! Numeric building blocks: vectors, covariances, Gaussians, interval sets and
//! low-degree polynomials.

mod gaussian;
mod interval;
mod poly;
mod vec2;

pub use gaussian::{clamp_psd, Gaussian2, PSD_TOLERANCE};
pub use interval::{intersect_all, Interval, IntervalSet};
pub use poly::{quadratic_geq_zero, Poly, MAX_DEGREE};
pub use vec2::{Sym2, Vec2};
