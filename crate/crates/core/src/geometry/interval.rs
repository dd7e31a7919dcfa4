use std::fmt;

use crate::error::{PrvoError, Result};

/// A closed interval `[lo, hi]` of time-scale values. `hi` may be `+inf`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY
        {
            return Err(PrvoError::InvalidInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    /// `[lo, +inf)`.
    pub fn from(lo: f64) -> Self {
        Self {
            lo,
            hi: f64::INFINITY,
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_bounded(&self) -> bool {
        self.hi.is_finite()
    }

    pub fn contains(&self, s: f64) -> bool {
        self.lo <= s && s <= self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    /// Point of the interval nearest to `s`.
    pub fn clamp(&self, s: f64) -> f64 {
        s.max(self.lo).min(self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.hi.is_infinite() {
            write!(f, "[{} inf)", self.lo)
        } else {
            write!(f, "[{} {}]", self.lo, self.hi)
        }
    }
}

/// A finite union of disjoint closed intervals, kept sorted with no touching members.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct IntervalSet {
    intervals: Vec<Interval>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn single(iv: Interval) -> Self {
        Self {
            intervals: vec![iv],
        }
    }

    /// Canonicalizes an arbitrary collection: sorts and merges overlapping or touching members.
    pub fn from_intervals(mut items: Vec<Interval>) -> Self {
        items.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        let mut out: Vec<Interval> = Vec::with_capacity(items.len());
        for iv in items {
            match out.last_mut() {
                Some(last) if iv.lo <= last.hi => last.hi = last.hi.max(iv.hi),
                _ => out.push(iv),
            }
        }
        Self { intervals: out }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn contains(&self, s: f64) -> bool {
        self.intervals.iter().any(|iv| iv.contains(s))
    }

    /// Total length of the set (may be infinite).
    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(Interval::width).sum()
    }

    pub fn widest(&self) -> Option<&Interval> {
        self.intervals
            .iter()
            .fold(None, |best: Option<&Interval>, iv| match best {
                Some(b) if b.width() >= iv.width() => Some(b),
                _ => Some(iv),
            })
    }

    pub fn sup(&self) -> Option<f64> {
        self.intervals.last().map(|iv| iv.hi)
    }

    /// Exact set intersection of two canonical sets.
    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let (a, b) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            if let Some(iv) = a[i].intersect(&b[j]) {
                out.push(iv);
            }
            if a[i].hi < b[j].hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        // Pieces of canonical inputs cannot touch each other, but a shared endpoint can
        // produce [x, x] next to [x, y]; from_intervals merges those.
        IntervalSet::from_intervals(out)
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        let mut all = self.intervals.clone();
        all.extend_from_slice(&other.intervals);
        IntervalSet::from_intervals(all)
    }

    /// Whether every point of `self` lies in `other` grown by `tol` on each side.
    pub fn is_subset_of(&self, other: &IntervalSet, tol: f64) -> bool {
        self.intervals.iter().all(|iv| {
            other
                .intervals
                .iter()
                .any(|o| o.lo - tol <= iv.lo && iv.hi <= o.hi + tol)
        })
    }

    /// Point of the set nearest to `s`, ties resolved toward the smaller value.
    pub fn nearest(&self, s: f64) -> Option<f64> {
        self.intervals
            .iter()
            .map(|iv| iv.clamp(s))
            .fold(None, |best: Option<f64>, p| match best {
                Some(b) if (b - s).abs() <= (p - s).abs() => Some(b),
                _ => Some(p),
            })
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return write!(f, "{{}}");
        }
        for (i, iv) in self.intervals.iter().enumerate() {
            if i > 0 {
                write!(f, " U ")?;
            }
            write!(f, "{iv}")?;
        }
        Ok(())
    }
}

/// Intersection of several sets; the empty list yields the empty set.
pub fn intersect_all<'a>(sets: impl IntoIterator<Item = &'a IntervalSet>) -> IntervalSet {
    let mut it = sets.into_iter();
    let Some(first) = it.next() else {
        return IntervalSet::empty();
    };
    it.fold(first.clone(), |acc, s| acc.intersect(s))
}
