use super::{Interval, IntervalSet};
use crate::error::{PrvoError, Result};

pub const MAX_DEGREE: usize = 4;

/// A real polynomial of degree at most 4, coefficients lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    /// Trailing zero coefficients are trimmed.
    pub fn new(coeffs: &[f64]) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(PrvoError::NonFinite("polynomial coefficient"));
        }
        let len = coeffs.iter().rposition(|&c| c != 0.0).map_or(0, |i| i + 1);
        if len > MAX_DEGREE + 1 {
            return Err(PrvoError::DegreeTooHigh(len - 1));
        }
        Ok(Self {
            coeffs: coeffs[..len].to_vec(),
        })
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `s^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> f64 {
        self.coeffs.get(i).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree after trimming; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * s + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        }
    }

    /// Largest absolute coefficient.
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m: f64, c| m.max(c.abs()))
    }

    /// `Σ |c_i| |s|^i`, the natural magnitude for round-off estimates at `s`.
    fn abs_eval(&self, s: f64) -> f64 {
        let s = s.abs();
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * s + c.abs())
    }

    pub fn scaled(&self, k: f64) -> Poly {
        Poly::new(&self.coeffs.iter().map(|c| c * k).collect::<Vec<_>>())
            .expect("scaling keeps degree")
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c: Vec<f64> = (0..n).map(|i| self.coeff(i) - other.coeff(i)).collect();
        Poly::new(&c).expect("difference keeps degree")
    }

    /// Product; fails if the result would exceed degree 4.
    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero());
        }
        let mut c = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(&c)
    }

    /// All distinct real roots in ascending order.
    ///
    /// Degrees 1 and 2 are solved in closed form. Degrees 3 and 4 are split at the real
    /// roots of the derivative into monotone pieces, each of which holds at most one root
    /// and is bisected to full precision. A critical point where the polynomial vanishes up
    /// to round-off is reported as a (multiple) root.
    pub fn real_roots(&self) -> Result<Vec<f64>> {
        let mut roots = match self.degree() {
            None => return Err(PrvoError::DegeneratePolynomial),
            Some(0) => return Ok(Vec::new()),
            Some(1) => vec![-self.coeffs[0] / self.coeffs[1]],
            Some(2) => quadratic_roots(self.coeffs[2], self.coeffs[1], self.coeffs[0]),
            Some(_) => self.roots_by_monotone_pieces()?,
        };
        roots.sort_by(f64::total_cmp);
        roots.dedup_by(|b, a| (*b - *a).abs() <= 1e-9 * a.abs().max(b.abs()).max(1e-3));
        Ok(roots)
    }

    fn roots_by_monotone_pieces(&self) -> Result<Vec<f64>> {
        let n = self.coeffs.len() - 1;
        let lead = self.coeffs[n];
        // Cauchy bound: every real root lies strictly inside (-bound, bound).
        let bound = 1.0
            + self.coeffs[..n]
                .iter()
                .fold(0.0, |m: f64, c| m.max((c / lead).abs()));
        let crit = self.derivative().real_roots()?;

        let mut roots = Vec::new();
        let mut knots = vec![-bound];
        for c in crit {
            if c > -bound && c < bound {
                let v = self.eval(c);
                if v.abs() <= 64.0 * f64::EPSILON * self.abs_eval(c) {
                    roots.push(c);
                }
                knots.push(c);
            }
        }
        knots.push(bound);

        for w in knots.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let (flo, fhi) = (self.eval(lo), self.eval(hi));
            if flo == 0.0 {
                roots.push(lo);
            } else if fhi == 0.0 {
                roots.push(hi);
            } else if flo.signum() != fhi.signum() {
                roots.push(self.bisect(lo, hi, flo));
            }
        }
        Ok(roots)
    }

    fn bisect(&self, mut lo: f64, mut hi: f64, flo: f64) -> f64 {
        let lo_sign = flo.signum();
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                return mid;
            }
            let fm = self.eval(mid);
            if fm == 0.0 {
                return mid;
            }
            if fm.signum() == lo_sign {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }

    /// The exact set `{s ∈ domain : p(s) ≥ 0}`. The zero polynomial yields the whole domain.
    pub fn geq_zero(&self, domain: Interval) -> IntervalSet {
        if self.is_zero() {
            return IntervalSet::single(domain);
        }
        if domain.lo == domain.hi {
            return if self.eval(domain.lo) >= 0.0 {
                IntervalSet::single(domain)
            } else {
                IntervalSet::empty()
            };
        }
        let roots: Vec<f64> = self
            .real_roots()
            .expect("nonzero polynomial")
            .into_iter()
            .filter(|&r| r > domain.lo && r < domain.hi)
            .collect();

        let mut knots = Vec::with_capacity(roots.len() + 2);
        knots.push(domain.lo);
        knots.extend_from_slice(&roots);
        knots.push(domain.hi);

        let mut included = Vec::with_capacity(knots.len() - 1);
        for w in knots.windows(2) {
            let probe = if w[1].is_finite() {
                0.5 * (w[0] + w[1])
            } else {
                w[0] + w[0].abs().max(1.0)
            };
            included.push(self.eval(probe) >= 0.0);
        }

        let mut pieces = Vec::new();
        for (i, w) in knots.windows(2).enumerate() {
            if included[i] {
                pieces.push(Interval { lo: w[0], hi: w[1] });
            }
        }
        // Touching roots: the polynomial is zero at an interior knot but negative on both sides.
        for (i, &r) in roots.iter().enumerate() {
            if !included[i] && !included[i + 1] {
                pieces.push(Interval { lo: r, hi: r });
            }
        }
        if !included[0] && self.eval(domain.lo) >= 0.0 {
            pieces.push(Interval {
                lo: domain.lo,
                hi: domain.lo,
            });
        }
        if !included[included.len() - 1] && domain.hi.is_finite() && self.eval(domain.hi) >= 0.0
        {
            pieces.push(Interval {
                lo: domain.hi,
                hi: domain.hi,
            });
        }
        IntervalSet::from_intervals(pieces)
    }
}

/// Real roots of `a s² + b s + c` with `a ≠ 0`, using the cancellation-free form.
fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let disc = b * b - 4.0 * a * c;
    let slack = 8.0 * f64::EPSILON * (b * b + (4.0 * a * c).abs());
    if disc.abs() <= slack {
        return vec![-b / (2.0 * a)];
    }
    if disc < 0.0 {
        return Vec::new();
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    if q == 0.0 {
        // b == 0 and c == 0 would have given disc == 0 above.
        return vec![0.0];
    }
    vec![q / a, c / q]
}

/// The set `{s ∈ domain : a2 s² + a1 s + a0 ≥ 0}`.
pub fn quadratic_geq_zero(a2: f64, a1: f64, a0: f64, domain: Interval) -> Result<IntervalSet> {
    Ok(Poly::new(&[a0, a1, a2])?.geq_zero(domain))
}
