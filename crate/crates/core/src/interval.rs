use std::fmt;

use crate::error::{Error, Result};

/// A real interval whose ends may be open, closed, or infinite.
///
/// Evaluation never happens exactly at an open end: [`Interval::inset`]
/// pulls such ends inward by `max(1e-9, 1e-9 * width)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
    open_lo: bool,
    open_hi: bool,
}

const INSET_ABS: f64 = 1e-9;
const INSET_REL: f64 = 1e-9;

impl Interval {
    pub fn new(lo: f64, hi: f64, open_lo: bool, open_hi: bool) -> Result<Self> {
        // NaN fails this comparison as well
        if !(lo < hi) {
            return Err(Error::InvalidInterval { lo, hi });
        }
        // infinite ends are always open
        Ok(Self {
            lo,
            hi,
            open_lo: open_lo || lo.is_infinite(),
            open_hi: open_hi || hi.is_infinite(),
        })
    }

    pub fn open(lo: f64, hi: f64) -> Result<Self> {
        Self::new(lo, hi, true, true)
    }

    pub fn closed(lo: f64, hi: f64) -> Result<Self> {
        Self::new(lo, hi, false, false)
    }

    /// The whole real line.
    pub fn real_line() -> Self {
        Self::open(f64::NEG_INFINITY, f64::INFINITY).unwrap()
    }

    /// `(0, +inf)`.
    pub fn positive() -> Self {
        Self::open(0.0, f64::INFINITY).unwrap()
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn is_open_lo(&self) -> bool {
        self.open_lo
    }

    pub fn is_open_hi(&self) -> bool {
        self.open_hi
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.open_lo {
            x > self.lo
        } else {
            x >= self.lo
        };
        let below = if self.open_hi {
            x < self.hi
        } else {
            x <= self.hi
        };
        above && below
    }

    /// True when `other` lies inside `self` (open ends of `self` must not be touched).
    pub fn contains_interval(&self, other: &Interval) -> bool {
        let lo_ok = other.lo > self.lo || (other.lo == self.lo && (!self.open_lo || other.open_lo));
        let hi_ok = other.hi < self.hi || (other.hi == self.hi && (!self.open_hi || other.open_hi));
        lo_ok && hi_ok
    }

    /// Size of the pull-in applied at open ends.
    pub fn inset_size(&self) -> f64 {
        let w = self.width();
        if w.is_finite() {
            INSET_ABS.max(INSET_REL * w)
        } else {
            INSET_ABS
        }
    }

    /// The closed interval actually used for sampling and quadrature.
    ///
    /// Infinite ends are replaced by a finite window first: `-inf` becomes
    /// `min(hi, 0) - 10` and `+inf` becomes `max(lo, 0) + 10`.
    pub fn inset(&self) -> (f64, f64) {
        let lo = if self.lo.is_finite() {
            self.lo
        } else {
            self.hi.min(0.0) - 10.0
        };
        let hi = if self.hi.is_finite() {
            self.hi
        } else {
            self.lo.max(0.0) + 10.0
        };
        let d = self.inset_size();
        let lo = if self.open_lo && self.lo.is_finite() {
            lo + d
        } else {
            lo
        };
        let hi = if self.open_hi && self.hi.is_finite() {
            hi - d
        } else {
            hi
        };
        (lo, hi)
    }

    /// `n >= 2` equally spaced points spanning [`Interval::inset`].
    pub fn grid(&self, n: usize) -> Vec<f64> {
        let (lo, hi) = self.inset();
        linspace(lo, hi, n)
    }
}

pub(crate) fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.5 * (lo + hi)],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
                .collect()
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.open_lo { '(' } else { '[' },
            self.lo,
            self.hi,
            if self.open_hi { ')' } else { ']' }
        )
    }
}
