//! Parametric generator families `t -> k_t` with closed-form `A(k_t)`.
//!
//! A family stores its parameter in an internal coordinate `u`. For
//! multiplicative parameters (`α ∈ (0, ∞)`) the internal coordinate is
//! `u = ln α`, so limits such as `α -> 0+` can be probed far beyond what an
//! `f64` α could represent. Everything public speaks the user coordinate.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::aop::a_operator;
use crate::error::{Error, Result};
use crate::generator::{Direction, Generator};
use crate::interval::{linspace, Interval};
use crate::mean::{evaluate_mean, Sample, Weights};

pub type MakeFn = Arc<dyn Fn(f64) -> Generator + Send + Sync>;
pub type ClosedFormFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type ParamMap = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Default internal parameter window.
pub const DEFAULT_WINDOW: (f64, f64) = (-50.0, 50.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParamScale {
    /// Internal coordinate is the parameter itself.
    Linear,
    /// Internal coordinate is the logarithm of a positive parameter.
    Log,
}

impl ParamScale {
    fn forward(self, t: f64) -> f64 {
        match self {
            ParamScale::Linear => t,
            ParamScale::Log => t.ln(),
        }
    }

    fn inverse(self, u: f64) -> f64 {
        match self {
            ParamScale::Linear => u,
            ParamScale::Log => u.exp(),
        }
    }
}

/// A bound of a (possibly bounded) scale: `min` (⊥), `max` (⊤), or the mean of a generator.
#[derive(Clone)]
pub enum MeanBound {
    Min,
    Max,
    Quasi(Generator),
}

impl fmt::Debug for MeanBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl MeanBound {
    pub fn label(&self) -> String {
        match self {
            MeanBound::Min => "min".into(),
            MeanBound::Max => "max".into(),
            MeanBound::Quasi(g) => g.name().to_string(),
        }
    }

    /// `A` of the bound, with `A(min) = -inf` and `A(max) = +inf`.
    pub fn a_value(&self, x: f64) -> Result<f64> {
        match self {
            MeanBound::Min => Ok(f64::NEG_INFINITY),
            MeanBound::Max => Ok(f64::INFINITY),
            MeanBound::Quasi(g) => a_operator(g, x),
        }
    }

    pub fn mean(&self, a: &Sample, w: &Weights) -> Result<f64> {
        match self {
            MeanBound::Min => Ok(a.min()),
            MeanBound::Max => Ok(a.max()),
            MeanBound::Quasi(g) => evaluate_mean(g, a, w),
        }
    }
}

/// `{k_t : t ∈ I}` on a common domain `U`.
#[derive(Clone)]
pub struct ParametricFamily {
    name: String,
    scale: ParamScale,
    interval: Interval,
    window: (f64, f64),
    domain: Interval,
    make: MakeFn,
    closed_form: Option<ClosedFormFn>,
    orientation: Direction,
    lower_bound: MeanBound,
    upper_bound: MeanBound,
    warnings: Vec<String>,
}

impl fmt::Debug for ParametricFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParametricFamily")
            .field("name", &self.name)
            .field("scale", &self.scale)
            .field("interval", &self.interval)
            .field("window", &self.window)
            .field("domain", &self.domain)
            .field("orientation", &self.orientation)
            .field("lower_bound", &self.lower_bound)
            .field("upper_bound", &self.upper_bound)
            .finish()
    }
}

/// Serializable description of a family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilySummary {
    pub name: String,
    pub orientation: Direction,
    pub param_scale: ParamScale,
    pub param_interval: (f64, f64),
    pub param_window: (f64, f64),
    pub domain: String,
    pub lower_bound: String,
    pub upper_bound: String,
    pub closed_form: bool,
    pub warnings: Vec<String>,
}

impl ParametricFamily {
    /// A plug-in family in a linear parameter. Without
    /// [`ParametricFamily::with_closed_form`], `A(k_t)` is taken from the
    /// derivative oracles of `make(t)`.
    pub fn new<M>(
        name: impl Into<String>,
        domain: Interval,
        param_interval: Interval,
        make: M,
        orientation: Direction,
    ) -> Self
    where
        M: Fn(f64) -> Generator + Send + Sync + 'static,
    {
        let window = clamp_window(DEFAULT_WINDOW, &param_interval);
        Self {
            name: name.into(),
            scale: ParamScale::Linear,
            interval: param_interval,
            window,
            domain,
            make: Arc::new(make),
            closed_form: None,
            orientation,
            lower_bound: MeanBound::Min,
            upper_bound: MeanBound::Max,
            warnings: Vec::new(),
        }
    }

    /// `(t, x) -> A(k_t)(x)` in the user coordinate.
    pub fn with_closed_form<A>(mut self, a: A) -> Self
    where
        A: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        let scale = self.scale;
        self.closed_form = Some(Arc::new(move |u, x| a(scale.inverse(u), x)));
        self
    }

    pub fn with_bounds(mut self, lower: MeanBound, upper: MeanBound) -> Self {
        self.lower_bound = lower;
        self.upper_bound = upper;
        self
    }

    /// Replaces the parameter window (user coordinate).
    pub fn with_window(mut self, lo: f64, hi: f64) -> Result<Self> {
        let (ulo, uhi) = (self.scale.forward(lo), self.scale.forward(hi));
        if !(ulo < uhi) || !ulo.is_finite() || !uhi.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "invalid parameter window [{lo}, {hi}]"
            )));
        }
        if !self.interval.contains(ulo) || !self.interval.contains(uhi) {
            return Err(Error::InvalidArgument(format!(
                "window [{lo}, {hi}] leaves the parameter interval {}",
                self.param_interval()
            )));
        }
        self.window = (ulo, uhi);
        Ok(self)
    }

    /// Same family on a sub-interval of its domain.
    pub fn restrict_domain(mut self, domain: Interval) -> Result<Self> {
        if !self.domain.contains_interval(&domain) {
            return Err(Error::DomainMismatch {
                left: self.domain.to_string(),
                right: domain.to_string(),
            });
        }
        let make = self.make.clone();
        self.make = Arc::new(move |u| make(u).with_domain_unchecked(domain));
        self.domain = domain;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &Interval {
        &self.domain
    }

    pub fn orientation(&self) -> Direction {
        self.orientation
    }

    pub fn scale(&self) -> ParamScale {
        self.scale
    }

    pub fn lower_bound(&self) -> &MeanBound {
        &self.lower_bound
    }

    pub fn upper_bound(&self) -> &MeanBound {
        &self.upper_bound
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn has_closed_form(&self) -> bool {
        self.closed_form.is_some()
    }

    /// True when both bounds are `min`/`max`.
    pub fn is_full_scale(&self) -> bool {
        matches!(self.lower_bound, MeanBound::Min) && matches!(self.upper_bound, MeanBound::Max)
    }

    /// The parameter interval `I` in the user coordinate.
    pub fn param_interval(&self) -> Interval {
        let (lo, hi) = (
            self.scale.inverse(self.interval.lo()),
            self.scale.inverse(self.interval.hi()),
        );
        Interval::new(
            lo,
            hi,
            self.interval.is_open_lo(),
            self.interval.is_open_hi(),
        )
        .unwrap_or(self.interval)
    }

    /// The finite parameter window in the user coordinate.
    pub fn param_window(&self) -> (f64, f64) {
        (
            self.scale.inverse(self.window.0),
            self.scale.inverse(self.window.1),
        )
    }

    pub fn to_internal(&self, t: f64) -> f64 {
        self.scale.forward(t)
    }

    pub fn from_internal(&self, u: f64) -> f64 {
        self.scale.inverse(u)
    }

    pub fn internal_interval(&self) -> &Interval {
        &self.interval
    }

    pub fn internal_window(&self) -> (f64, f64) {
        self.window
    }

    pub fn make(&self, t: f64) -> Generator {
        (self.make)(self.to_internal(t))
    }

    pub fn make_internal(&self, u: f64) -> Generator {
        (self.make)(u)
    }

    /// Closed-form `A(k_t)(x)`, if the family has one.
    pub fn a_closed_form(&self, t: f64, x: f64) -> Option<f64> {
        self.closed_form.as_ref().map(|a| a(self.to_internal(t), x))
    }

    /// `A(k_t)(x)`: the closed form when present, otherwise `f''/f'` of `make(t)`.
    pub fn a_value(&self, t: f64, x: f64) -> Result<f64> {
        self.a_internal(self.to_internal(t), x)
    }

    pub fn a_internal(&self, u: f64, x: f64) -> Result<f64> {
        match &self.closed_form {
            Some(a) => Ok(a(u, x)),
            None => a_operator(&(self.make)(u), x),
        }
    }

    /// The same family with the internal coordinate negated and read as a
    /// linear parameter: `phi(t) = -t` for linear families and
    /// `phi(t) = e^{-t}` for multiplicative ones. Flips the orientation.
    pub fn flipped(&self) -> Self {
        let make = self.make.clone();
        let closed = self.closed_form.clone();
        let interval = Interval::new(
            -self.interval.hi(),
            -self.interval.lo(),
            self.interval.is_open_hi(),
            self.interval.is_open_lo(),
        )
        .expect("mirrored interval keeps its order");
        Self {
            name: format!("{}[flipped]", self.name),
            scale: ParamScale::Linear,
            interval,
            window: (-self.window.1, -self.window.0),
            domain: self.domain,
            make: Arc::new(move |v| make(-v)),
            closed_form: closed.map(|a| -> ClosedFormFn { Arc::new(move |v, x| a(-v, x)) }),
            orientation: self.orientation.flipped(),
            lower_bound: self.lower_bound.clone(),
            upper_bound: self.upper_bound.clone(),
            warnings: self.warnings.clone(),
        }
    }

    pub fn summary(&self) -> FamilySummary {
        let pi = self.param_interval();
        FamilySummary {
            name: self.name.clone(),
            orientation: self.orientation,
            param_scale: self.scale,
            param_interval: (pi.lo(), pi.hi()),
            param_window: self.param_window(),
            domain: self.domain.to_string(),
            lower_bound: self.lower_bound.label(),
            upper_bound: self.upper_bound.label(),
            closed_form: self.has_closed_form(),
            warnings: self.warnings.clone(),
        }
    }
}

fn clamp_window(window: (f64, f64), interval: &Interval) -> (f64, f64) {
    let (lo, hi) = interval.inset();
    let lo = if interval.lo().is_finite() {
        window.0.max(lo)
    } else {
        window.0
    };
    let hi = if interval.hi().is_finite() {
        window.1.min(hi)
    } else {
        window.1
    };
    (lo, hi)
}

/// `expm1(z) / z`, equal to 1 at 0.
fn exprel(z: f64) -> f64 {
    if z == 0.0 {
        1.0
    } else {
        z.exp_m1() / z
    }
}

/// Power functions `x^t` (`ln x` at `t = 0`) on `(0, inf)`; an increasing
/// scale with `A(k_t)(x) = (t - 1)/x`.
pub fn power_family() -> ParametricFamily {
    ParametricFamily {
        name: "power".into(),
        scale: ParamScale::Linear,
        interval: Interval::real_line(),
        window: DEFAULT_WINDOW,
        domain: Interval::positive(),
        make: Arc::new(Generator::power),
        closed_form: Some(Arc::new(|t, x| (t - 1.0) / x)),
        orientation: Direction::Increasing,
        lower_bound: MeanBound::Min,
        upper_bound: MeanBound::Max,
        warnings: Vec::new(),
    }
}

/// `α^{1/x} = exp(u/x)` with `u = ln α`; the reciprocal `1/x` stands in at `α = 1`.
pub fn radical_generator(u: f64) -> Generator {
    let anchored = move |c: f64, dx: f64| {
        let x = c + dx;
        // u (1/x - 1/c) = u q
        let q = -dx / (x * c);
        let rel = -c * c * q * exprel(u * q);
        let drel = (c / x).powi(2) * (u * q).exp();
        (rel, drel)
    };
    if u == 0.0 {
        return Generator::from_parts(
            "radical:1",
            |x: f64| 1.0 / x,
            |x: f64| -1.0 / (x * x),
            |x: f64| 2.0 / (x * x * x),
            Interval::positive(),
            Direction::Decreasing,
        )
        .with_anchored(anchored);
    }
    let direction = if u > 0.0 {
        Direction::Decreasing
    } else {
        Direction::Increasing
    };
    Generator::from_parts(
        format!("radical:{}", u.exp()),
        move |x: f64| (u / x).exp(),
        move |x: f64| -u / (x * x) * (u / x).exp(),
        move |x: f64| (2.0 * u / x.powi(3) + u * u / x.powi(4)) * (u / x).exp(),
        Interval::positive(),
        direction,
    )
    .with_anchored(anchored)
}

/// Radical functions `α^{1/x}`, `α ∈ (0, inf)`, on `(0, inf)`; a decreasing
/// scale with `A(k_α)(x) = -(2x + ln α)/x²`.
pub fn radical_family() -> ParametricFamily {
    ParametricFamily {
        name: "radical".into(),
        scale: ParamScale::Log,
        interval: Interval::real_line(),
        window: DEFAULT_WINDOW,
        domain: Interval::positive(),
        make: Arc::new(radical_generator),
        closed_form: Some(Arc::new(|u, x| -(2.0 * x + u) / (x * x))),
        orientation: Direction::Decreasing,
        lower_bound: MeanBound::Min,
        upper_bound: MeanBound::Max,
        warnings: Vec::new(),
    }
}

fn x_pow_alpha_x_generator(alpha: f64, domain: Interval) -> Generator {
    let upper = domain.lo() >= std::f64::consts::E.recip();
    let anchored = move |c: f64, dx: f64| {
        let x = c + dx;
        let lc1 = c.ln() + 1.0;
        // x ln x - c ln c = dx ln x + c ln(x / c)
        let d = dx * x.ln() + c * (dx / c).ln_1p();
        let rel = d * exprel(alpha * d) / lc1;
        let drel = (x.ln() + 1.0) / lc1 * (alpha * d).exp();
        (rel, drel)
    };
    if alpha == 0.0 {
        return Generator::x_ln_x()
            .with_domain_unchecked(domain)
            .with_anchored(anchored)
            .renamed("xax:0");
    }
    // sign of α (ln x + 1)
    let direction = if (alpha > 0.0) == upper {
        Direction::Increasing
    } else {
        Direction::Decreasing
    };
    Generator::from_parts(
        format!("xax:{alpha}"),
        move |x: f64| (alpha * x * x.ln()).exp(),
        move |x: f64| alpha * (x.ln() + 1.0) * (alpha * x * x.ln()).exp(),
        move |x: f64| {
            let l1 = x.ln() + 1.0;
            (alpha / x + alpha * alpha * l1 * l1) * (alpha * x * x.ln()).exp()
        },
        domain,
        direction,
    )
    .with_anchored(anchored)
}

fn x_pow_alpha_x(domain: Interval, orientation: Direction, name: &str) -> ParametricFamily {
    ParametricFamily {
        name: name.into(),
        scale: ParamScale::Linear,
        interval: Interval::real_line(),
        window: DEFAULT_WINDOW,
        domain,
        make: Arc::new(move |a| x_pow_alpha_x_generator(a, domain)),
        closed_form: Some(Arc::new(|a, x: f64| {
            let l1 = x.ln() + 1.0;
            1.0 / (x * l1) + a * l1
        })),
        orientation,
        lower_bound: MeanBound::Min,
        upper_bound: MeanBound::Max,
        warnings: Vec::new(),
    }
}

/// `x^{αx}` (`x ln x` at `α = 0`) on `(1/e, inf)`; an increasing scale with
/// `A(k_α)(x) = 1/(x(ln x + 1)) + α(ln x + 1)`.
pub fn x_pow_alpha_x_family() -> ParametricFamily {
    let u = Interval::open(std::f64::consts::E.recip(), f64::INFINITY).unwrap();
    x_pow_alpha_x(u, Direction::Increasing, "xax")
}

/// The same formulas on `(0, 1/e)`, where they form a decreasing scale.
pub fn x_pow_alpha_x_family_lower() -> ParametricFamily {
    let u = Interval::open(0.0, std::f64::consts::E.recip()).unwrap();
    x_pow_alpha_x(u, Direction::Decreasing, "xax-lower")
}

/// Points used to check positivity and convexity of the base function.
const BASE_CHECK_POINTS: usize = 257;

/// `g_α(x) = g(x^α)`, `α ∈ (0, inf)`, on `(0, 1)`, with
/// `A(g_α)(x) = α x^{α-1} A(g)(x^α) + (α - 1)/x`.
///
/// `g` must be increasing with a domain covering `(0, 1)`. When `g` is also
/// positive and convex the family is a scale between the geometric mean and
/// `max`; otherwise the family is still built but carries a warning that the
/// bounded-scale guarantee does not apply. Arguments `x^α` that underflow
/// out of the domain of `g` are clamped to its inset ends.
pub fn g_alpha_family(g: Generator) -> Result<ParametricFamily> {
    let unit = Interval::open(0.0, 1.0).unwrap();
    if !g.domain().contains_interval(&unit) {
        return Err(Error::DomainMismatch {
            left: g.domain().to_string(),
            right: unit.to_string(),
        });
    }
    if g.direction() != Direction::Increasing {
        return Err(Error::InvalidArgument(format!(
            "base function {} must be increasing",
            g.name()
        )));
    }
    let probe = Interval::closed(0.0, 1.0).unwrap();
    let probe = if g.domain().contains_interval(&probe) {
        probe
    } else {
        unit
    };
    let pts = probe.grid(BASE_CHECK_POINTS);
    let mut warnings = Vec::new();
    if pts.iter().any(|&y| !(g.f(y) > 0.0)) {
        warnings.push(format!(
            "{} is not positive on [0, 1]; bounded-scale guarantee withdrawn",
            g.name()
        ));
    }
    if pts.iter().any(|&y| g.d2f(y) < 0.0) {
        warnings.push(format!(
            "{} is not convex on [0, 1]; bounded-scale guarantee withdrawn",
            g.name()
        ));
    }

    let gdom = *g.domain();
    let (glo, ghi) = gdom.inset();
    let clamp = move |y: f64| {
        if gdom.contains(y) {
            y
        } else {
            y.clamp(glo, ghi)
        }
    };

    let base = g.clone();
    let make = move |u: f64| -> Generator {
        let alpha = u.exp();
        let (g0, g1, g2, g3) = (base.clone(), base.clone(), base.clone(), base.clone());
        Generator::from_parts(
            format!("galpha({}):{alpha}", base.name()),
            move |x: f64| g0.f(clamp(x.powf(alpha))),
            move |x: f64| g1.df(clamp(x.powf(alpha))) * alpha * x.powf(alpha - 1.0),
            move |x: f64| {
                let y = clamp(x.powf(alpha));
                g2.d2f(y) * (alpha * x.powf(alpha - 1.0)).powi(2)
                    + g2.df(y) * alpha * (alpha - 1.0) * x.powf(alpha - 2.0)
            },
            unit,
            Direction::Increasing,
        )
        .with_anchored(move |c: f64, dx: f64| {
            let l = (dx / c).ln_1p();
            let em = (alpha * l).exp_m1();
            let y0 = clamp(c.powf(alpha));
            let dy = y0 * em;
            let (grel, gdrel) = g3.anchored(y0, dy);
            // (g(y0 + dy) - g(y0)) / (g'(y0) dy) -> 1 as dy -> 0
            let ratio = if dy == 0.0 || !(grel / dy).is_finite() {
                1.0
            } else {
                grel / dy
            };
            let rel = ratio * em * c / alpha;
            let gdrel = if gdrel.is_finite() { gdrel } else { 1.0 };
            (rel, gdrel * ((alpha - 1.0) * l).exp())
        })
    };
    let base = g.clone();
    let closed = move |u: f64, x: f64| {
        let alpha = u.exp();
        let y = clamp(x.powf(alpha));
        let ag = base.d2f(y) / base.df(y);
        let lead = alpha * x.powf(alpha - 1.0);
        // 0 * finite when x^α underflows
        let first = if lead == 0.0 { 0.0 } else { lead * ag };
        first + (alpha - 1.0) / x
    };
    Ok(ParametricFamily {
        name: format!("galpha({})", g.name()),
        scale: ParamScale::Log,
        interval: Interval::real_line(),
        window: DEFAULT_WINDOW,
        domain: unit,
        make: Arc::new(make),
        closed_form: Some(Arc::new(closed)),
        orientation: Direction::Increasing,
        lower_bound: MeanBound::Quasi(Generator::ln()),
        upper_bound: MeanBound::Max,
        warnings,
    })
}

/// `e^{tx}` (`x` at `t = 0`) on the real line; an increasing scale with `A(k_t) = t`.
pub fn exp_tx_generator(t: f64) -> Generator {
    let anchored = move |_c: f64, dx: f64| (dx * exprel(t * dx), (t * dx).exp());
    if t == 0.0 {
        return Generator::identity()
            .renamed("exptx:0")
            .with_anchored(anchored);
    }
    let direction = if t > 0.0 {
        Direction::Increasing
    } else {
        Direction::Decreasing
    };
    Generator::from_parts(
        format!("exptx:{t}"),
        move |x: f64| (t * x).exp(),
        move |x: f64| t * (t * x).exp(),
        move |x: f64| t * t * (t * x).exp(),
        Interval::real_line(),
        direction,
    )
    .with_anchored(anchored)
}

pub fn exp_tx_family() -> ParametricFamily {
    ParametricFamily {
        name: "exptx".into(),
        scale: ParamScale::Linear,
        interval: Interval::real_line(),
        window: DEFAULT_WINDOW,
        domain: Interval::real_line(),
        make: Arc::new(exp_tx_generator),
        closed_form: Some(Arc::new(|t, _x| t)),
        orientation: Direction::Increasing,
        lower_bound: MeanBound::Min,
        upper_bound: MeanBound::Max,
        warnings: Vec::new(),
    }
}

/// Points on which a reparametrization is checked for strict monotonicity.
const PHI_CHECK_POINTS: usize = 257;

/// `{k_{phi(s)} : s ∈ J}` for a continuous strictly monotone `phi: J -> I`.
///
/// `window` is the finite part of `J` used for sampling and solving. The
/// orientation flips when `phi` is decreasing.
pub fn reparametrize(
    fam: &ParametricFamily,
    phi: ParamMap,
    interval: Interval,
    window: (f64, f64),
) -> Result<ParametricFamily> {
    if !(window.0 < window.1) || !interval.contains(window.0) || !interval.contains(window.1) {
        return Err(Error::InvalidArgument(format!(
            "window {window:?} must lie inside {interval}"
        )));
    }
    let target = fam.param_interval();
    let values: Vec<f64> = linspace(window.0, window.1, PHI_CHECK_POINTS)
        .into_iter()
        .map(|s| phi(s))
        .collect();
    if let Some(v) = values.iter().find(|&&v| !target.contains(v)) {
        return Err(Error::InvalidArgument(format!(
            "reparametrization leaves the parameter interval {target} ({v})"
        )));
    }
    let increasing = values.windows(2).all(|p| p[1] > p[0]);
    let decreasing = values.windows(2).all(|p| p[1] < p[0]);
    if !increasing && !decreasing {
        return Err(Error::InvalidArgument(
            "reparametrization is not strictly monotone on its window".into(),
        ));
    }
    let orientation = if increasing {
        fam.orientation
    } else {
        fam.orientation.flipped()
    };
    let scale = fam.scale;
    let (make, p1) = (fam.make.clone(), phi.clone());
    let closed = fam.closed_form.clone().map(|a| -> ClosedFormFn {
        let p2 = phi.clone();
        Arc::new(move |s, x| a(scale.forward(p2(s)), x))
    });
    Ok(ParametricFamily {
        name: format!("{}[reparametrized]", fam.name),
        scale: ParamScale::Linear,
        interval,
        window,
        domain: fam.domain,
        make: Arc::new(move |s| make(scale.forward(p1(s)))),
        closed_form: closed,
        orientation,
        lower_bound: fam.lower_bound.clone(),
        upper_bound: fam.upper_bound.clone(),
        warnings: fam.warnings.clone(),
    })
}

/// Looks up a built-in family by name.
pub fn builtin_family(name: &str) -> Result<ParametricFamily> {
    match name {
        "power" => Ok(power_family()),
        "radical" => Ok(radical_family()),
        "xax" => Ok(x_pow_alpha_x_family()),
        "xax-lower" => Ok(x_pow_alpha_x_family_lower()),
        "galpha-exp" => g_alpha_family(Generator::exp()),
        "exptx" => Ok(exp_tx_family()),
        _ => Err(Error::InvalidArgument(format!(
            "unknown family '{name}'; built-ins: {}",
            BUILTIN_FAMILIES.join(", ")
        ))),
    }
}

pub const BUILTIN_FAMILIES: [&str; 6] = [
    "power",
    "radical",
    "xax",
    "xax-lower",
    "galpha-exp",
    "exptx",
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aop::affine_equivalent;
    use std::f64::consts::E;

    fn rel_err(a: f64, b: f64) -> f64 {
        (a - b).abs() / (1.0 + b.abs())
    }

    #[test]
    fn power_members() {
        let fam = power_family();
        let one = fam
            .make(1.0)
            .restrict(Interval::closed(0.5, 5.0).unwrap())
            .unwrap();
        let id = Generator::identity()
            .restrict(Interval::closed(0.5, 5.0).unwrap())
            .unwrap();
        assert!(affine_equivalent(&one, &id, 32).unwrap());
        assert_eq!(fam.make(0.0).name(), "ln");
        assert_eq!(fam.a_closed_form(3.0, 2.0), Some(1.0));
        let a = Sample::new(vec![1.0, 4.0]).unwrap();
        let w = Weights::uniform(2).unwrap();
        assert!((evaluate_mean(&fam.make(0.0), &a, &w).unwrap() - 2.0).abs() < 1e-14);
        assert!((evaluate_mean(&fam.make(1.0), &a, &w).unwrap() - 2.5).abs() < 1e-14);
    }

    #[test]
    fn radical_closed_form_examples() {
        let fam = radical_family();
        assert!((fam.a_closed_form(E, 1.0).unwrap() + 3.0).abs() < 1e-15);
        for x in [0.3, 1.0, 4.0] {
            assert_eq!(fam.a_closed_form(1.0, x).unwrap(), -2.0 / x);
        }
    }

    #[test]
    fn radical_means_decrease_in_alpha() {
        let fam = radical_family();
        let a = Sample::new(vec![1.0, 2.0]).unwrap();
        let w = Weights::uniform(2).unwrap();
        let m: Vec<f64> = [2.0, E, 10.0]
            .iter()
            .map(|&t| evaluate_mean(&fam.make(t), &a, &w).unwrap())
            .collect();
        assert!(m[0] > m[1] && m[1] > m[2], "{m:?}");
    }

    #[test]
    fn radical_at_one_is_harmonic() {
        let fam = radical_family();
        let a = Sample::new(vec![1.0, 4.0]).unwrap();
        let w = Weights::uniform(2).unwrap();
        let m = evaluate_mean(&fam.make(1.0), &a, &w).unwrap();
        assert!((m - 1.6).abs() < 1e-14);
    }

    #[test]
    fn x_pow_alpha_x_examples() {
        let fam = x_pow_alpha_x_family();
        for x in [0.5f64, 1.0, 3.0] {
            let expected = 1.0 / (x * (x.ln() + 1.0));
            assert_eq!(fam.a_closed_form(0.0, x).unwrap(), expected);
        }
        for alpha in [-2.0, 0.0, 0.7, 5.0] {
            assert_eq!(fam.a_closed_form(alpha, 1.0).unwrap(), 1.0 + alpha);
        }
        assert_eq!(fam.make(0.0).f(1.0), 0.0);
        assert_eq!(
            x_pow_alpha_x_family_lower().orientation(),
            Direction::Decreasing
        );
    }

    #[test]
    fn g_alpha_exp_closed_form() {
        let fam = g_alpha_family(Generator::exp()).unwrap();
        assert!(fam.warnings().is_empty());
        for (alpha, x) in [(0.5, 0.3), (2.0, 0.7), (7.0, 0.1)] {
            let expected = alpha * f64::powf(x, alpha - 1.0) + (alpha - 1.0) / x;
            assert!(rel_err(fam.a_closed_form(alpha, x).unwrap(), expected) < 1e-14);
        }
        // α -> 0+ tends to A(ln) = -1/x
        for x in [0.1, 0.5, 0.9] {
            assert!((fam.a_closed_form(1e-12, x).unwrap() + 1.0 / x).abs() < 1e-9);
        }
        // α -> inf diverges
        for x in [0.1, 0.5, 0.9] {
            assert!(fam.a_closed_form(1e8, x).unwrap() > 1e6);
        }
    }

    #[test]
    fn g_alpha_flags_non_convex_base() {
        // sqrt(1 + y): increasing, positive, concave
        let g = Generator::new(
            "sqrt1p",
            |y: f64| (1.0 + y).sqrt(),
            |y: f64| 0.5 / (1.0 + y).sqrt(),
            |y: f64| -0.25 / (1.0 + y).powf(1.5),
            Interval::open(-1.0, f64::INFINITY).unwrap(),
        )
        .unwrap();
        let fam = g_alpha_family(g).unwrap();
        assert_eq!(fam.warnings().len(), 1);
        // ln is increasing but negative and concave on (0, 1)
        assert_eq!(g_alpha_family(Generator::ln()).unwrap().warnings().len(), 2);
        let narrow = Generator::exp()
            .restrict(Interval::open(0.5, 2.0).unwrap())
            .unwrap();
        assert!(matches!(
            g_alpha_family(narrow),
            Err(Error::DomainMismatch { .. })
        ));
        let dec = Generator::exp().affine(-1.0, 0.0).unwrap();
        assert!(g_alpha_family(dec).is_err());
    }

    #[test]
    fn exp_tx_examples() {
        let fam = exp_tx_family();
        for x in [-3.0, 0.0, 2.0] {
            assert_eq!(fam.a_closed_form(1.7, x), Some(1.7));
        }
        let a = Sample::new(vec![0.0, 4f64.ln()]).unwrap();
        let w = Weights::uniform(2).unwrap();
        let m = evaluate_mean(&fam.make(1.0), &a, &w).unwrap();
        assert!((m - 2.5f64.ln()).abs() < 1e-14);
        let m0 = evaluate_mean(&fam.make(0.0), &a, &w).unwrap();
        assert!((m0 - 0.5 * 4f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn reparametrize_examples() {
        let id = reparametrize(
            &power_family(),
            Arc::new(|t| t),
            Interval::real_line(),
            DEFAULT_WINDOW,
        )
        .unwrap();
        assert_eq!(id.orientation(), Direction::Increasing);
        assert_eq!(
            id.a_closed_form(2.5, 1.5),
            power_family().a_closed_form(2.5, 1.5)
        );

        let neg = reparametrize(
            &power_family(),
            Arc::new(|t: f64| -t),
            Interval::real_line(),
            DEFAULT_WINDOW,
        )
        .unwrap();
        assert_eq!(neg.orientation(), Direction::Decreasing);

        let rad = reparametrize(
            &radical_family(),
            Arc::new(|t: f64| (-t).exp()),
            Interval::real_line(),
            (-30.0, 30.0),
        )
        .unwrap();
        assert_eq!(rad.orientation(), Direction::Increasing);
        // -(2x + ln e^{-t})/x² = (t - 2x)/x²
        let (t, x) = (1.3, 0.8);
        assert!(rel_err(rad.a_closed_form(t, x).unwrap(), (t - 2.0 * x) / (x * x)) < 1e-14);
    }

    #[test]
    fn reparametrize_rejects_non_monotone_maps() {
        let err = reparametrize(
            &power_family(),
            Arc::new(|t: f64| t * t),
            Interval::real_line(),
            (-2.0, 2.0),
        );
        assert!(err.is_err());
        let err = reparametrize(
            &radical_family(),
            Arc::new(|t: f64| t),
            Interval::real_line(),
            (-2.0, 2.0),
        );
        assert!(err.is_err(), "maps outside (0, inf)");
    }

    #[test]
    fn flipped_negates_parameter() {
        let fam = radical_family();
        let fl = fam.flipped();
        assert_eq!(fl.orientation(), Direction::Increasing);
        let (s, x) = (0.4, 1.7);
        assert_eq!(
            fl.a_closed_form(s, x).unwrap(),
            fam.a_closed_form((-s).exp(), x).unwrap()
        );
    }

    #[test]
    fn plug_in_family_falls_back_to_oracle() {
        let fam = ParametricFamily::new(
            "pow-plugin",
            Interval::positive(),
            Interval::real_line(),
            Generator::power,
            Direction::Increasing,
        );
        assert!(!fam.has_closed_form());
        let a = fam.a_value(3.0, 2.0).unwrap();
        assert!((a - 1.0).abs() < 1e-14);
    }

    #[test]
    fn log_scale_window_and_interval() {
        let fam = radical_family();
        let (lo, hi) = fam.param_window();
        assert!((lo - (-50f64).exp()).abs() < 1e-30 && (hi / 50f64.exp() - 1.0).abs() < 1e-15);
        let pi = fam.param_interval();
        assert_eq!((pi.lo(), pi.hi()), (0.0, f64::INFINITY));
    }

    #[test]
    fn unknown_family_lists_builtins() {
        let msg = builtin_family("gini").unwrap_err().to_string();
        assert!(msg.contains("power") && msg.contains("radical"));
    }
}
