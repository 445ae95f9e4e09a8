//! Quasi-arithmetic mean evaluation: `M` solving `f(M) = Σ wᵢ f(aᵢ)`.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::generator::{Direction, Generator};
use crate::interval::Interval;
use crate::sum::compensated_sum;

/// Weight sums within this distance of 1 are renormalized; anything further is rejected.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-6;

/// Bisection stops at this relative width before the Newton polish starts.
const BISECTION_WIDTH: f64 = 1e-8;
const NEWTON_STEPS: usize = 5;

/// Residual tolerance for inversion: `|f(x) - y| <= atol + rtol * |y|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub atol: f64,
    pub rtol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            atol: 1e-12,
            rtol: 1e-10,
        }
    }
}

impl Tolerances {
    pub fn new(atol: f64, rtol: f64) -> Result<Self> {
        if !(atol > 0.0 && rtol > 0.0 && atol.is_finite() && rtol.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "tolerances must be positive and finite, got atol={atol}, rtol={rtol}"
            )));
        }
        Ok(Self { atol, rtol })
    }

    fn accepts(&self, residual: f64, y: f64) -> bool {
        residual.abs() <= self.atol + self.rtol * y.abs()
    }
}

/// The data vector `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample(Vec<f64>);

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&v| v == self.0[0])
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn spread(&self) -> f64 {
        self.max() - self.min()
    }
}

/// Positive weights normalized to sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct Weights(Vec<f64>);

impl Weights {
    /// Validates positivity and renormalizes when the sum is within
    /// [`WEIGHT_SUM_TOLERANCE`] of 1.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite { index, value });
            }
            if value <= 0.0 {
                return Err(Error::NonPositiveWeight { index, value });
            }
        }
        let sum = compensated_sum(values.iter().copied());
        if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::WeightSum {
                sum,
                tolerance: WEIGHT_SUM_TOLERANCE,
            });
        }
        Ok(Self(values.into_iter().map(|w| w / sum).collect()))
    }

    /// Positive weights of any total, divided by their sum.
    pub fn normalized(values: Vec<f64>) -> Result<Self> {
        let sum = compensated_sum(values.iter().copied());
        if !(sum > 0.0) || !sum.is_finite() {
            return Err(Error::WeightSum {
                sum,
                tolerance: WEIGHT_SUM_TOLERANCE,
            });
        }
        Self::new(values.into_iter().map(|w| w / sum).collect())
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptySample);
        }
        Ok(Self(vec![1.0 / n as f64; n]))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn check_inputs(g: &Generator, a: &Sample, w: &Weights) -> Result<()> {
    if a.len() != w.len() {
        return Err(Error::LengthMismatch {
            values: a.len(),
            weights: w.len(),
        });
    }
    let domain = g.domain();
    if let Some(&value) = a.values().iter().find(|&&v| !domain.contains(v)) {
        return Err(Error::OutsideDomain {
            value,
            domain: domain.to_string(),
        });
    }
    Ok(())
}

/// Pairs sorted by value (ties by weight), so sums do not depend on input order.
fn canonical_pairs(a: &Sample, w: &Weights) -> Vec<(f64, f64)> {
    let mut pairs: Vec<(f64, f64)> = a
        .values()
        .iter()
        .copied()
        .zip(w.values().iter().copied())
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));
    pairs
}

/// `Σ wᵢ f(aᵢ)`, summed with compensation in order of increasing `f(aᵢ)`.
pub fn weighted_push(g: &Generator, a: &Sample, w: &Weights) -> Result<f64> {
    check_inputs(g, a, w)?;
    let mut terms: Vec<(f64, f64)> = a
        .values()
        .iter()
        .zip(w.values())
        .map(|(&x, &wi)| (g.f(x), wi))
        .collect();
    terms.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));
    Ok(compensated_sum(terms.into_iter().map(|(fx, wi)| wi * fx)))
}

/// The quasi-arithmetic mean `f⁻¹(Σ wᵢ f(aᵢ))` with default tolerances.
pub fn evaluate_mean(g: &Generator, a: &Sample, w: &Weights) -> Result<f64> {
    evaluate_mean_with(g, a, w, Tolerances::default())
}

/// The quasi-arithmetic mean with explicit inversion tolerances.
///
/// The sum is taken over the anchored quotients `(f(aᵢ) - f(c)) / f'(c)`
/// with `c` the sample end where `|f'|` is larger. These are affine
/// invariant and bounded by the spread when `|f'|` is monotone, so steep
/// generators do not overflow.
pub fn evaluate_mean_with(g: &Generator, a: &Sample, w: &Weights, tol: Tolerances) -> Result<f64> {
    check_inputs(g, a, w)?;
    if a.is_constant() {
        return Ok(a.values()[0]);
    }
    let (lo, hi) = (a.min(), a.max());
    let pairs = canonical_pairs(a, w);

    // f'(lo) / f'(hi)
    let slope_ratio = g.anchored(hi, lo - hi).1;
    let anchors = if slope_ratio.is_finite() && slope_ratio <= 1.0 {
        [hi, lo]
    } else {
        [lo, hi]
    };

    let mut last_err = None;
    for c in anchors {
        let target = compensated_sum(pairs.iter().map(|&(x, wi)| wi * g.anchored(c, x - c).0));
        if !target.is_finite() {
            last_err = Some(Error::Numerical(format!(
                "anchored sum of {} is not finite at anchor {c}",
                g.name()
            )));
            continue;
        }
        let rel = |dx: f64| g.anchored(c, dx).0;
        let drel = |dx: f64| g.anchored(c, dx).1;
        // rel ~ dx unless the generator is nearly flat away from c; then shrink atol with the image
        let image = (rel(hi - c) - rel(lo - c)).abs() / (hi - lo);
        let atol = if image < 1.0 {
            (tol.atol * image).max(f64::MIN_POSITIVE)
        } else {
            tol.atol
        };
        let tol = Tolerances {
            atol,
            rtol: tol.rtol,
        };
        match invert_monotone(
            &rel,
            &drel,
            Direction::Increasing,
            target,
            lo - c,
            hi - c,
            tol,
        ) {
            Ok(dx) => return Ok((c + dx).clamp(lo, hi)),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap())
}

/// `f⁻¹(y)` restricted to `bracket`, with default tolerances.
pub fn invert_generator(g: &Generator, y: f64, bracket: &Interval) -> Result<f64> {
    invert_generator_with(g, y, bracket, Tolerances::default())
}

/// `f⁻¹(y)` restricted to `bracket`.
///
/// Open ends are inset; infinite ends start from the finite sampling window
/// and are pushed outward by doubling until `y` is bracketed.
pub fn invert_generator_with(
    g: &Generator,
    y: f64,
    bracket: &Interval,
    tol: Tolerances,
) -> Result<f64> {
    if !y.is_finite() {
        return Err(Error::NonFinite { index: 0, value: y });
    }
    if !g.domain().contains_interval(bracket) {
        return Err(Error::DomainMismatch {
            left: g.domain().to_string(),
            right: bracket.to_string(),
        });
    }
    let s = g.direction().sign();
    let (mut lo, mut hi) = bracket.inset();
    // below/above y in the increasing sense
    let below = |x: f64| s * (g.f(x) - y) < 0.0;
    let above = |x: f64| s * (g.f(x) - y) > 0.0;
    let mut step = (hi - lo).max(1.0);
    while bracket.lo().is_infinite() && above(lo) && lo.is_finite() {
        hi = hi.min(lo);
        lo -= step;
        step *= 2.0;
    }
    step = (hi - lo).max(1.0);
    while bracket.hi().is_infinite() && below(hi) && hi.is_finite() {
        lo = lo.max(hi);
        hi += step;
        step *= 2.0;
    }
    let (flo, fhi) = (g.f(lo), g.f(hi));
    let (ymin, ymax) = if flo <= fhi { (flo, fhi) } else { (fhi, flo) };
    let slack = tol.atol + tol.rtol * y.abs();
    if !(y >= ymin - slack && y <= ymax + slack) {
        return Err(Error::InvalidArgument(format!(
            "{y} is outside the image [{ymin}, {ymax}] of {} over {bracket}",
            g.name()
        )));
    }
    let f = |x: f64| g.f(x);
    let df = |x: f64| g.df(x);
    invert_monotone(&f, &df, g.direction(), y, lo, hi, tol)
}

/// Solves `f(x) = y` on `[lo, hi]` for a monotone `f` of known direction.
///
/// Bisection to relative width 1e-8, then at most five Newton steps kept
/// inside the bracket. If the polished point misses the tolerance, bisection
/// resumes down to adjacent floats. The derivative sign is checked at each
/// midpoint and a mismatch is reported as a monotonicity violation.
pub(crate) fn invert_monotone(
    f: &dyn Fn(f64) -> f64,
    df: &dyn Fn(f64) -> f64,
    direction: Direction,
    y: f64,
    lo: f64,
    hi: f64,
    tol: Tolerances,
) -> Result<f64> {
    let s = direction.sign();
    let (mut lo, mut hi) = (lo, hi);
    let (flo, fhi) = (f(lo), f(hi));
    if flo.is_nan() || fhi.is_nan() {
        return Err(Error::Numerical("generator is NaN at bracket end".into()));
    }
    if s * (fhi - flo) < 0.0 {
        return Err(Error::NotStrictlyMonotone {
            at: 0.5 * (lo + hi),
        });
    }
    if tol.accepts(flo - y, y) && (flo - y).abs() <= (fhi - y).abs() {
        return Ok(lo);
    }
    if tol.accepts(fhi - y, y) {
        return Ok(hi);
    }

    let mut best = Best::new();
    best.offer(lo, flo - y);
    best.offer(hi, fhi - y);
    let scale = lo.abs().max(hi.abs()).max(1.0);

    let bisect_step = |lo: &mut f64, hi: &mut f64, best: &mut Best| -> Result<bool> {
        let mid = 0.5 * (*lo + *hi);
        if mid <= *lo || mid >= *hi {
            return Ok(false);
        }
        let d = df(mid);
        if d.is_finite() && s * d < 0.0 {
            return Err(Error::NotStrictlyMonotone { at: mid });
        }
        let r = f(mid) - y;
        if r.is_nan() {
            return Err(Error::Numerical(format!("generator is NaN at {mid}")));
        }
        best.offer(mid, r);
        match (s * r).partial_cmp(&0.0) {
            Some(Ordering::Less) => *lo = mid,
            Some(Ordering::Greater) => *hi = mid,
            _ => {
                *lo = mid;
                *hi = mid;
                return Ok(false);
            }
        }
        Ok(true)
    };

    while hi - lo > BISECTION_WIDTH * scale {
        if !bisect_step(&mut lo, &mut hi, &mut best)? {
            break;
        }
    }

    let mut x = 0.5 * (lo + hi);
    let mut r = f(x) - y;
    best.offer(x, r);
    for _ in 0..NEWTON_STEPS {
        if r == 0.0 {
            break;
        }
        let d = df(x);
        if !d.is_finite() || d == 0.0 {
            break;
        }
        let next = x - r / d;
        if !(next >= lo && next <= hi) {
            break;
        }
        let rn = f(next) - y;
        if !(rn.abs() <= r.abs()) {
            break;
        }
        let moved = (next - x).abs();
        x = next;
        r = rn;
        best.offer(x, r);
        if moved <= 4.0 * f64::EPSILON * x.abs() {
            break;
        }
    }
    if tol.accepts(best.residual, y) {
        return Ok(best.x);
    }

    while bisect_step(&mut lo, &mut hi, &mut best)? {}
    Ok(best.x)
}

struct Best {
    x: f64,
    residual: f64,
}

impl Best {
    fn new() -> Self {
        Self {
            x: f64::NAN,
            residual: f64::INFINITY,
        }
    }

    fn offer(&mut self, x: f64, residual: f64) {
        if residual.abs() < self.residual.abs() {
            self.x = x;
            self.residual = residual;
        }
    }
}
