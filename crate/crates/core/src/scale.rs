//! Scale verification from `A(k_t)` and inversion of the map `t -> M_{k_t}(a, w)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{MeanBound, ParametricFamily};
use crate::generator::Direction;
use crate::interval::linspace;
use crate::mean::{evaluate_mean, Sample, Weights};

/// `|A|` must pass this value at a parameter end to count as diverging.
pub const DIVERGENCE_THRESHOLD: f64 = 1e6;
/// Relative distance within which `A(k_t)(x)` counts as having reached a finite bound `A(l)(x)`.
pub const LIMIT_TOLERANCE: f64 = 1e-6;

const PROBE_STEPS: u32 = 64;
const ROUNDING_SLACK: f64 = 8.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScaleVerdict {
    IncreasingScale,
    DecreasingScale,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub x_grid: usize,
    pub t_grid: usize,
    pub divergence_threshold: f64,
    pub limit_tolerance: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            x_grid: 64,
            t_grid: 64,
            divergence_threshold: DIVERGENCE_THRESHOLD,
            limit_tolerance: LIMIT_TOLERANCE,
        }
    }
}

impl VerifyOptions {
    pub fn grids(x_grid: usize, t_grid: usize) -> Self {
        Self {
            x_grid,
            t_grid,
            ..Self::default()
        }
    }
}

/// The adjacent parameter pair with the weakest (or reversed) step in `A`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonotoneWitness {
    pub x: f64,
    pub t1: f64,
    pub t2: f64,
    pub a1: f64,
    pub a2: f64,
}

/// How `A(k_t)(x)` behaves as `t` runs to one end of the parameter interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeEvidence {
    /// `A` of the bound this end should reach (`±inf` for `min`/`max`).
    pub target: f64,
    /// Last probed parameter (user coordinate).
    pub t: f64,
    /// `A(k_t)(x)` there.
    pub a: f64,
    pub reached: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointEvidence {
    pub x: f64,
    pub monotone: bool,
    /// Smallest oriented step `±(A(t_{j+1}) - A(t_j))` on the parameter grid.
    pub min_step: f64,
    pub witness: Option<MonotoneWitness>,
    pub max_jump_coarse: f64,
    pub max_jump_fine: f64,
    pub continuous: bool,
    pub lower: EdgeEvidence,
    pub upper: EdgeEvidence,
    /// Every observed `A(k_t)(x)` lies in `[A(l)(x), A(h)(x)]`.
    pub within_bounds: bool,
    pub failures: Vec<String>,
}

impl PointEvidence {
    fn onto(&self) -> bool {
        self.lower.reached && self.upper.reached && self.within_bounds
    }
}

/// Grid evidence for monotonicity, continuity, the two limits, and the range of `t -> A(k_t)(x)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScaleReport {
    pub family: String,
    pub verdict: ScaleVerdict,
    pub lower_bound: String,
    pub upper_bound: String,
    pub monotone_in_t: bool,
    pub worst_witness: Option<MonotoneWitness>,
    pub continuity_jump: f64,
    pub continuity_ok: bool,
    pub lower_limit_ok: bool,
    pub upper_limit_ok: bool,
    pub onto_range_ok: bool,
    pub divergence_threshold: f64,
    pub x_points: Vec<f64>,
    pub t_points: Vec<f64>,
    pub points: Vec<PointEvidence>,
    pub warnings: Vec<String>,
}

impl ScaleReport {
    /// The verdict implied by the stored per-point evidence.
    pub fn recompute_verdict(&self, orientation: Direction) -> ScaleVerdict {
        let all =
            |p: fn(&PointEvidence) -> bool| !self.points.is_empty() && self.points.iter().all(p);
        let ok = all(|p| p.monotone)
            && all(|p| p.continuous)
            && all(|p| p.lower.reached)
            && all(|p| p.upper.reached)
            && all(|p| p.onto());
        match (ok, orientation) {
            (false, _) => ScaleVerdict::Inconclusive,
            (true, Direction::Increasing) => ScaleVerdict::IncreasingScale,
            (true, Direction::Decreasing) => ScaleVerdict::DecreasingScale,
        }
    }
}

/// Internal parameters walking from the window edge towards one end of the parameter interval.
fn edge_probes(fam: &ParametricFamily, upper: bool) -> Vec<f64> {
    let interval = fam.internal_interval();
    let (wlo, whi) = fam.internal_window();
    let edge = if upper { whi } else { wlo };
    let end = if upper { interval.hi() } else { interval.lo() };
    let dir = if upper { 1.0 } else { -1.0 };
    (0..=PROBE_STEPS)
        .map(|k| {
            if end.is_finite() {
                end - (end - edge) * 0.5f64.powi(k as i32)
            } else {
                edge + dir * edge.abs().max(1.0) * (2f64.powi(k as i32) - 1.0)
            }
        })
        .collect()
}

fn relative_jump(a: f64, b: f64) -> f64 {
    (b - a).abs() / (1.0 + a.abs())
}

struct Checker<'a> {
    fam: &'a ParametricFamily,
    opts: VerifyOptions,
    grid: Vec<f64>,
    lower_probes: Vec<f64>,
    upper_probes: Vec<f64>,
}

impl Checker<'_> {
    fn reached(&self, a: f64, target: f64) -> bool {
        if target == f64::INFINITY {
            a >= self.opts.divergence_threshold
        } else if target == f64::NEG_INFINITY {
            a <= -self.opts.divergence_threshold
        } else {
            (a - target).abs() <= self.opts.limit_tolerance * (1.0 + target.abs())
        }
    }

    fn edge(
        &self,
        x: f64,
        probes: &[f64],
        target: f64,
        failures: &mut Vec<String>,
        seen: &mut Vec<f64>,
    ) -> EdgeEvidence {
        let mut last = EdgeEvidence {
            target,
            t: f64::NAN,
            a: f64::NAN,
            reached: false,
        };
        for &u in probes {
            match self.fam.a_internal(u, x) {
                Ok(a) if a.is_finite() => {
                    seen.push(a);
                    last = EdgeEvidence {
                        target,
                        t: self.fam.from_internal(u),
                        a,
                        reached: self.reached(a, target),
                    };
                    if last.reached {
                        break;
                    }
                }
                Ok(a) => {
                    failures.push(format!(
                        "A is {a} at x={x}, t={}",
                        self.fam.from_internal(u)
                    ));
                    break;
                }
                Err(e) => {
                    failures.push(format!("x={x}, t={}: {e}", self.fam.from_internal(u)));
                    break;
                }
            }
        }
        last
    }

    fn point(&self, x: f64) -> PointEvidence {
        let sign = self.fam.orientation().sign();
        let mut failures = Vec::new();
        let mut values = Vec::with_capacity(self.grid.len());
        for &u in &self.grid {
            match self.fam.a_internal(u, x) {
                Ok(a) if a.is_finite() => values.push(a),
                Ok(a) => failures.push(format!(
                    "A is {a} at x={x}, t={}",
                    self.fam.from_internal(u)
                )),
                Err(e) => failures.push(format!("x={x}, t={}: {e}", self.fam.from_internal(u))),
            }
        }
        let complete = values.len() == self.grid.len();

        // strict steps, except ties at rounding level where A has saturated
        let mut monotone = complete;
        let mut min_step = f64::INFINITY;
        let mut witness = None;
        if complete {
            for j in 0..values.len().saturating_sub(1) {
                let (a1, a2) = (values[j], values[j + 1]);
                let step = sign * (a2 - a1);
                if step < min_step {
                    min_step = step;
                    witness = Some(MonotoneWitness {
                        x,
                        t1: self.fam.from_internal(self.grid[j]),
                        t2: self.fam.from_internal(self.grid[j + 1]),
                        a1,
                        a2,
                    });
                }
                let slack = ROUNDING_SLACK * a1.abs().max(a2.abs());
                let tie_ok = step == 0.0 && a1 != 0.0 && step.abs() <= slack;
                if !(step > 0.0 || tie_ok) {
                    monotone = false;
                }
            }
            let total = sign * (values[values.len() - 1] - values[0]);
            if !(total > 0.0) {
                monotone = false;
            }
        }

        // jumps at two refinement levels; a continuous A shrinks with the step
        let h = (self.grid[self.grid.len() - 1] - self.grid[0]) / (self.grid.len() - 1) as f64;
        let (mut coarse, mut fine) = (0.0f64, 0.0f64);
        if complete {
            for (&u, &a) in self.grid.iter().zip(&values) {
                for (delta, slot) in [(h * 1e-3, &mut coarse), (h * 1e-6, &mut fine)] {
                    match self.fam.a_internal(u + delta, x) {
                        Ok(b) if b.is_finite() => *slot = slot.max(relative_jump(a, b)),
                        _ => failures.push(format!(
                            "A not finite at x={x}, t={}",
                            self.fam.from_internal(u + delta)
                        )),
                    }
                }
            }
        }
        let continuous = complete && (fine <= 1e-2 * coarse || fine <= 1e-10);

        let orientation = self.fam.orientation();
        let lower_target = self.fam.lower_bound().a_value(x);
        let upper_target = self.fam.upper_bound().a_value(x);
        let (lower_target, upper_target) = match (lower_target, upper_target) {
            (Ok(l), Ok(h)) => (l, h),
            (l, h) => {
                for e in [l.err(), h.err()].into_iter().flatten() {
                    failures.push(format!("bound at x={x}: {e}"));
                }
                (f64::NAN, f64::NAN)
            }
        };
        // increasing families reach the lower bound at the lower parameter end
        let (low_probes, high_probes) = match orientation {
            Direction::Increasing => (&self.lower_probes, &self.upper_probes),
            Direction::Decreasing => (&self.upper_probes, &self.lower_probes),
        };
        let mut seen = values.clone();
        let lower = self.edge(x, low_probes, lower_target, &mut failures, &mut seen);
        let upper = self.edge(x, high_probes, upper_target, &mut failures, &mut seen);
        let tol = |b: f64| {
            if b.is_finite() {
                self.opts.limit_tolerance * (1.0 + b.abs())
            } else {
                0.0
            }
        };
        let within_bounds = !lower_target.is_nan()
            && seen.iter().all(|&a| {
                a >= lower_target - tol(lower_target) && a <= upper_target + tol(upper_target)
            });

        PointEvidence {
            x,
            monotone,
            min_step,
            witness,
            max_jump_coarse: coarse,
            max_jump_fine: fine,
            continuous,
            lower,
            upper,
            within_bounds,
            failures,
        }
    }
}

fn checker(fam: &ParametricFamily, opts: VerifyOptions) -> Result<Checker<'_>> {
    if opts.x_grid < 16 || opts.t_grid < 16 {
        return Err(Error::InvalidArgument(format!(
            "grids must have at least 16 points, got x={} t={}",
            opts.x_grid, opts.t_grid
        )));
    }
    let (wlo, whi) = fam.internal_window();
    Ok(Checker {
        fam,
        opts,
        grid: linspace(wlo, whi, opts.t_grid),
        lower_probes: edge_probes(fam, false),
        upper_probes: edge_probes(fam, true),
    })
}

/// Checks on an `x_grid × t_grid` grid that `t -> A(k_t)(x)` is strictly
/// monotone in the declared orientation, continuous, and runs from `A(l)(x)`
/// to `A(h)(x)` at the two parameter ends (`∓inf` for `min`/`max`, where
/// divergence means passing `±1e6`). Any missing piece makes the verdict
/// inconclusive. Grid evidence, not a proof.
pub fn verify_scale(fam: &ParametricFamily, x_grid: usize, t_grid: usize) -> Result<ScaleReport> {
    verify_scale_with(fam, VerifyOptions::grids(x_grid, t_grid))
}

pub fn verify_scale_with(fam: &ParametricFamily, opts: VerifyOptions) -> Result<ScaleReport> {
    let ck = checker(fam, opts)?;
    let x_points = fam.domain().grid(opts.x_grid);
    let points: Vec<PointEvidence> = x_points.par_iter().map(|&x| ck.point(x)).collect();

    let monotone_in_t = points.iter().all(|p| p.monotone);
    let worst_witness = points
        .iter()
        .filter_map(|p| p.witness.map(|w| (p.min_step, w)))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, w)| w);
    let continuity_jump = points.iter().map(|p| p.max_jump_fine).fold(0.0, f64::max);
    let mut report = ScaleReport {
        family: fam.name().to_string(),
        verdict: ScaleVerdict::Inconclusive,
        lower_bound: fam.lower_bound().label(),
        upper_bound: fam.upper_bound().label(),
        monotone_in_t,
        worst_witness,
        continuity_jump,
        continuity_ok: points.iter().all(|p| p.continuous),
        lower_limit_ok: points.iter().all(|p| p.lower.reached),
        upper_limit_ok: points.iter().all(|p| p.upper.reached),
        onto_range_ok: points.iter().all(|p| p.onto()),
        divergence_threshold: opts.divergence_threshold,
        x_points,
        t_points: ck.grid.iter().map(|&u| fam.from_internal(u)).collect(),
        points,
        warnings: fam.warnings().to_vec(),
    };
    report.verdict = report.recompute_verdict(fam.orientation());
    Ok(report)
}

/// Share of grid points where `t -> A(k_t)(x)` is monotone and onto its bound range.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReverseEvidence {
    pub fraction: f64,
    pub monotone_fraction: f64,
    pub onto_fraction: f64,
    pub x_points: Vec<f64>,
    pub monotone: Vec<bool>,
    pub onto: Vec<bool>,
}

/// Pointwise version of [`verify_scale`]: for a genuine scale the monotone and
/// onto properties should hold on a dense set of `x`, so the fraction should
/// be 1 up to numerical span limits.
pub fn reverse_evidence(fam: &ParametricFamily, x_grid: usize) -> Result<ReverseEvidence> {
    let ck = checker(
        fam,
        VerifyOptions {
            x_grid,
            ..VerifyOptions::default()
        },
    )?;
    let x_points = fam.domain().grid(x_grid);
    let points: Vec<PointEvidence> = x_points.par_iter().map(|&x| ck.point(x)).collect();
    let n = points.len() as f64;
    let monotone: Vec<bool> = points.iter().map(|p| p.monotone).collect();
    let onto: Vec<bool> = points.iter().map(|p| p.onto()).collect();
    let share = |v: &[bool]| v.iter().filter(|&&b| b).count() as f64 / n;
    let both: Vec<bool> = monotone.iter().zip(&onto).map(|(&m, &o)| m && o).collect();
    Ok(ReverseEvidence {
        fraction: share(&both),
        monotone_fraction: share(&monotone),
        onto_fraction: share(&onto),
        x_points,
        monotone,
        onto,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub max_iterations: usize,
    /// Accepted `|M - target|` as a fraction of `max a - min a`.
    pub mean_tolerance: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            mean_tolerance: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolveResult {
    pub t_star: f64,
    pub mean_at_t: f64,
    pub target: f64,
    pub iterations: usize,
    /// Final bracket in the user coordinate, ordered.
    pub bracket_final: (f64, f64),
    /// `(M_l(a, w), M_h(a, w))`.
    pub attainable: (f64, f64),
}

/// Both mean bounds of the family for this data.
pub fn attainable_range(fam: &ParametricFamily, a: &Sample, w: &Weights) -> Result<(f64, f64)> {
    Ok((fam.lower_bound().mean(a, w)?, fam.upper_bound().mean(a, w)?))
}

pub fn solve_scale(
    fam: &ParametricFamily,
    a: &Sample,
    w: &Weights,
    target: f64,
) -> Result<SolveResult> {
    solve_scale_with(fam, a, w, target, SolveOptions::default())
}

/// Finds the parameter whose mean equals `target`.
///
/// Decreasing families are flipped first so the search always runs on an
/// increasing map. The bracket starts as a unit interval at the window centre
/// and doubles outward (past the window if needed, never past the parameter
/// interval) until the mean crosses the target; bisection then runs down to
/// adjacent floats.
pub fn solve_scale_with(
    fam: &ParametricFamily,
    a: &Sample,
    w: &Weights,
    target: f64,
    opts: SolveOptions,
) -> Result<SolveResult> {
    if a.len() != w.len() {
        return Err(Error::LengthMismatch {
            values: a.len(),
            weights: w.len(),
        });
    }
    if a.is_constant() {
        return Err(Error::ConstantSample);
    }
    if !target.is_finite() {
        return Err(Error::NonFinite {
            index: 0,
            value: target,
        });
    }
    let (lo_mean, hi_mean) = attainable_range(fam, a, w)?;
    if !(target > lo_mean && target < hi_mean) {
        return Err(Error::TargetOutOfRange {
            target,
            lo: lo_mean,
            hi: hi_mean,
        });
    }
    let flipped = fam.orientation() == Direction::Decreasing;
    let inc = if flipped { fam.flipped() } else { fam.clone() };
    let to_user = |v: f64| {
        if flipped {
            fam.from_internal(-v)
        } else {
            fam.from_internal(v)
        }
    };

    let iterations = std::cell::Cell::new(0usize);
    let eval = |v: f64| -> Result<f64> {
        iterations.set(iterations.get() + 1);
        let m = evaluate_mean(&inc.make_internal(v), a, w)?;
        if m.is_finite() {
            Ok(m - target)
        } else {
            Err(Error::Numerical(format!(
                "mean not finite at t={}",
                to_user(v)
            )))
        }
    };

    let interval = *inc.internal_interval();
    let (ilo, ihi) = interval.inset();
    let (wlo, whi) = inc.internal_window();
    let centre = 0.5 * (wlo + whi);
    let mut lo = (centre - 0.5).max(if interval.lo().is_finite() {
        ilo
    } else {
        f64::NEG_INFINITY
    });
    let mut hi = (centre + 0.5).min(if interval.hi().is_finite() {
        ihi
    } else {
        f64::INFINITY
    });
    let mut g_lo = eval(lo)?;
    let mut g_hi = eval(hi)?;
    let exhausted = |lo: f64, hi: f64| Error::BracketExhausted {
        lo: to_user(lo),
        hi: to_user(hi),
    };

    let mut expansions = 0;
    while g_lo > 0.0 {
        if expansions >= PROBE_STEPS {
            return Err(exhausted(lo, hi));
        }
        expansions += 1;
        let next = if interval.lo().is_finite() {
            (lo - (centre - lo)).max(0.5 * (lo + ilo))
        } else {
            lo - (centre - lo)
        };
        let g = eval(next).map_err(|_| exhausted(next, hi))?;
        if g > g_lo {
            return Err(Error::NotStrictlyMonotone { at: to_user(next) });
        }
        hi = lo;
        g_hi = g_lo;
        lo = next;
        g_lo = g;
    }
    expansions = 0;
    while g_hi < 0.0 {
        if expansions >= PROBE_STEPS {
            return Err(exhausted(lo, hi));
        }
        expansions += 1;
        let next = if interval.hi().is_finite() {
            (hi + (hi - centre)).min(0.5 * (hi + ihi))
        } else {
            hi + (hi - centre)
        };
        let g = eval(next).map_err(|_| exhausted(lo, next))?;
        if g < g_hi {
            return Err(Error::NotStrictlyMonotone { at: to_user(next) });
        }
        lo = hi;
        g_lo = g_hi;
        hi = next;
        g_hi = g;
    }

    let mut best = if g_lo.abs() <= g_hi.abs() {
        (lo, g_lo)
    } else {
        (hi, g_hi)
    };
    while iterations.get() < opts.max_iterations && best.1 != 0.0 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let g = eval(mid)?;
        if g.abs() < best.1.abs() {
            best = (mid, g);
        }
        if g < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let (v, g) = best;
    let tolerance = opts.mean_tolerance * a.spread();
    if !(g.abs() <= tolerance) {
        return Err(Error::Numerical(format!(
            "mean misses target by {} after {} iterations",
            g.abs(),
            iterations.get()
        )));
    }
    let (b1, b2) = (to_user(lo), to_user(hi));
    Ok(SolveResult {
        t_star: to_user(v),
        mean_at_t: target + g,
        target,
        iterations: iterations.get(),
        bracket_final: (b1.min(b2), b1.max(b2)),
        attainable: (lo_mean, hi_mean),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePoint {
    pub t: f64,
    pub mean: Option<f64>,
    pub error: Option<String>,
}

/// `M_{k_t}(a, w)` at each requested parameter; failures are reported per point.
pub fn mean_curve(
    fam: &ParametricFamily,
    a: &Sample,
    w: &Weights,
    t_points: &[f64],
) -> Vec<CurvePoint> {
    t_points
        .par_iter()
        .map(|&t| match evaluate_mean(&fam.make(t), a, w) {
            Ok(m) => CurvePoint {
                t,
                mean: Some(m),
                error: None,
            },
            Err(e) => CurvePoint {
                t,
                mean: None,
                error: Some(e.to_string()),
            },
        })
        .collect()
}

/// `n` parameters evenly spaced in the internal coordinate across the window
/// (log-spaced for multiplicative parameters), in the user coordinate.
pub fn window_grid(fam: &ParametricFamily, n: usize) -> Vec<f64> {
    let (lo, hi) = fam.internal_window();
    linspace(lo, hi, n)
        .into_iter()
        .map(|u| fam.from_internal(u))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeMean {
    pub t: f64,
    pub mean: f64,
    /// True if the window edge failed to evaluate and a point further in was used.
    pub pulled_in: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitReport {
    pub lower_edge: EdgeMean,
    pub upper_edge: EdgeMean,
    pub lower_bound: String,
    pub upper_bound: String,
    pub lower_bound_mean: f64,
    pub upper_bound_mean: f64,
    /// Distance from the edge mean that should approach `M_l` to `M_l`.
    pub lower_distance: f64,
    /// Distance from the edge mean that should approach `M_h` to `M_h`.
    pub upper_distance: f64,
    pub warnings: Vec<String>,
}

const PULL_IN_STEPS: usize = 60;

/// Means at the two window edges next to the bound means they should approach.
pub fn limit_check(fam: &ParametricFamily, a: &Sample, w: &Weights) -> Result<LimitReport> {
    if a.is_constant() {
        return Err(Error::ConstantSample);
    }
    let (wlo, whi) = fam.internal_window();
    let centre = 0.5 * (wlo + whi);
    let mut warnings = Vec::new();
    let mut edge = |start: f64| -> Result<EdgeMean> {
        let mut u = start;
        for _ in 0..PULL_IN_STEPS {
            match evaluate_mean(&fam.make_internal(u), a, w) {
                Ok(m) if m.is_finite() => {
                    let pulled_in = u != start;
                    if pulled_in {
                        warnings.push(format!(
                            "window edge t={} failed to evaluate; pulled in to t={}",
                            fam.from_internal(start),
                            fam.from_internal(u)
                        ));
                    }
                    return Ok(EdgeMean {
                        t: fam.from_internal(u),
                        mean: m,
                        pulled_in,
                    });
                }
                _ => u = centre + 0.5 * (u - centre),
            }
        }
        Err(Error::Numerical(format!(
            "no evaluable parameter near t={}",
            fam.from_internal(start)
        )))
    };
    let lower_edge = edge(wlo)?;
    let upper_edge = edge(whi)?;
    let (lower_bound_mean, upper_bound_mean) = attainable_range(fam, a, w)?;
    let (toward_l, toward_h) = match fam.orientation() {
        Direction::Increasing => (lower_edge.mean, upper_edge.mean),
        Direction::Decreasing => (upper_edge.mean, lower_edge.mean),
    };
    Ok(LimitReport {
        lower_edge,
        upper_edge,
        lower_bound: fam.lower_bound().label(),
        upper_bound: fam.upper_bound().label(),
        lower_bound_mean,
        upper_bound_mean,
        lower_distance: (toward_l - lower_bound_mean).abs(),
        upper_distance: (toward_h - upper_bound_mean).abs(),
        warnings,
    })
}

/// The bound generator for bounded scales (`None` for `min`/`max`).
pub fn bound_generator(bound: &MeanBound) -> Option<&crate::generator::Generator> {
    match bound {
        MeanBound::Quasi(g) => Some(g),
        _ => None,
    }
}
