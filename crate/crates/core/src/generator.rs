//! Strictly monotone C² generators of quasi-arithmetic means.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::Interval;

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// `(c, dx) -> ((f(c+dx) - f(c)) / f'(c), f'(c+dx) / f'(c))`.
///
/// Both components are invariant under `f -> αf + β`, which lets closed-form
/// generators report differences that would overflow or cancel if computed
/// from `f` directly (think `x^5000` or `exp(u / x)` for large `u`).
pub type AnchoredFn = Arc<dyn Fn(f64, f64) -> (f64, f64) + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Increasing,
    Decreasing,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Increasing => 1.0,
            Direction::Decreasing => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Direction::Increasing => Direction::Decreasing,
            Direction::Decreasing => Direction::Increasing,
        }
    }
}

/// Points probed when validating a user-supplied generator.
const VALIDATION_POINTS: usize = 65;

/// A twice differentiable function on an interval whose first derivative
/// never vanishes, together with its derivatives.
#[derive(Clone)]
pub struct Generator {
    name: String,
    f: RealFn,
    df: RealFn,
    d2f: RealFn,
    anchored: Option<AnchoredFn>,
    domain: Interval,
    direction: Direction,
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Generator")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("direction", &self.direction)
            .finish()
    }
}

impl Generator {
    /// Builds a generator from closures and checks on a grid that `df` is
    /// finite, nonzero, and of constant sign over the domain.
    pub fn new<F, D, D2>(
        name: impl Into<String>,
        f: F,
        df: D,
        d2f: D2,
        domain: Interval,
    ) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
        D2: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let mut sign = 0.0;
        for x in domain.grid(VALIDATION_POINTS) {
            let d = df(x);
            if !d.is_finite() || d == 0.0 {
                return Err(Error::NotStrictlyMonotone { at: x });
            }
            if sign == 0.0 {
                sign = d.signum();
            } else if d.signum() != sign {
                return Err(Error::NotStrictlyMonotone { at: x });
            }
        }
        let direction = if sign > 0.0 {
            Direction::Increasing
        } else {
            Direction::Decreasing
        };
        Ok(Self::from_parts(name, f, df, d2f, domain, direction))
    }

    /// Builds a generator without validation. The caller vouches for the
    /// declared direction.
    pub fn from_parts<F, D, D2>(
        name: impl Into<String>,
        f: F,
        df: D,
        d2f: D2,
        domain: Interval,
        direction: Direction,
    ) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
        D2: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            f: Arc::new(f),
            df: Arc::new(df),
            d2f: Arc::new(d2f),
            anchored: None,
            domain,
            direction,
        }
    }

    /// Attaches a numerically careful form of the anchored difference quotient.
    pub fn with_anchored<A>(mut self, anchored: A) -> Self
    where
        A: Fn(f64, f64) -> (f64, f64) + Send + Sync + 'static,
    {
        self.anchored = Some(Arc::new(anchored));
        self
    }

    /// Same formulas on a sub-interval of the current domain.
    pub fn restrict(&self, domain: Interval) -> Result<Self> {
        if !self.domain.contains_interval(&domain) {
            return Err(Error::DomainMismatch {
                left: self.domain.to_string(),
                right: domain.to_string(),
            });
        }
        let mut g = self.clone();
        g.domain = domain;
        Ok(g)
    }

    pub(crate) fn with_domain_unchecked(mut self, domain: Interval) -> Self {
        self.domain = domain;
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// `alpha * f + beta`, which generates the same mean as `f`.
    pub fn affine(&self, alpha: f64, beta: f64) -> Result<Self> {
        if alpha == 0.0 || !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "affine map needs finite alpha != 0 and finite beta, got ({alpha}, {beta})"
            )));
        }
        let (f, df, d2f) = (self.f.clone(), self.df.clone(), self.d2f.clone());
        let direction = if alpha > 0.0 {
            self.direction
        } else {
            self.direction.flipped()
        };
        Ok(Self {
            name: format!("{alpha}*{}+{beta}", self.name),
            f: Arc::new(move |x| alpha * f(x) + beta),
            df: Arc::new(move |x| alpha * df(x)),
            d2f: Arc::new(move |x| alpha * d2f(x)),
            anchored: self.anchored.clone(),
            domain: self.domain,
            direction,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &Interval {
        &self.domain
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn f(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn df(&self, x: f64) -> f64 {
        (self.df)(x)
    }

    pub fn d2f(&self, x: f64) -> f64 {
        (self.d2f)(x)
    }

    /// `((f(c+dx) - f(c)) / f'(c), f'(c+dx) / f'(c))`; increasing in `dx`
    /// whatever the direction of `f`.
    pub fn anchored(&self, c: f64, dx: f64) -> (f64, f64) {
        match &self.anchored {
            Some(a) => a(c, dx),
            None => {
                let dc = self.df(c);
                let x = c + dx;
                ((self.f(x) - self.f(c)) / dc, self.df(x) / dc)
            }
        }
    }

    pub fn identity() -> Self {
        Self::from_parts(
            "identity",
            |x| x,
            |_| 1.0,
            |_| 0.0,
            Interval::real_line(),
            Direction::Increasing,
        )
        .with_anchored(|_, dx| (dx, 1.0))
    }

    pub fn exp() -> Self {
        Self::from_parts(
            "exp",
            f64::exp,
            f64::exp,
            f64::exp,
            Interval::real_line(),
            Direction::Increasing,
        )
        .with_anchored(|_, dx| (dx.exp_m1(), dx.exp()))
    }

    pub fn ln() -> Self {
        Self::power(0.0)
    }

    /// `x^r` on `(0, inf)`, with `ln x` at `r = 0`.
    pub fn power(r: f64) -> Self {
        let anchored = move |c: f64, dx: f64| {
            let lr = (dx / c).ln_1p();
            let rel = if r == 0.0 {
                c * lr
            } else {
                c * (r * lr).exp_m1() / r
            };
            (rel, ((r - 1.0) * lr).exp())
        };
        if r == 0.0 {
            return Self::from_parts(
                "ln",
                f64::ln,
                |x| 1.0 / x,
                |x| -1.0 / (x * x),
                Interval::positive(),
                Direction::Increasing,
            )
            .with_anchored(anchored);
        }
        let direction = if r > 0.0 {
            Direction::Increasing
        } else {
            Direction::Decreasing
        };
        Self::from_parts(
            format!("power:{r}"),
            move |x: f64| x.powf(r),
            move |x: f64| r * x.powf(r - 1.0),
            move |x: f64| r * (r - 1.0) * x.powf(r - 2.0),
            Interval::positive(),
            direction,
        )
        .with_anchored(anchored)
    }

    /// `x ln x` on `(1/e, inf)`.
    pub fn x_ln_x() -> Self {
        Self::from_parts(
            "x_ln_x",
            |x: f64| x * x.ln(),
            |x: f64| x.ln() + 1.0,
            |x: f64| 1.0 / x,
            Interval::open(std::f64::consts::E.recip(), f64::INFINITY).unwrap(),
            Direction::Increasing,
        )
        .with_anchored(|c: f64, dx: f64| {
            let x = c + dx;
            let lnc = c.ln();
            // x ln x - c ln c = dx ln x + c ln(x / c)
            let diff = dx * x.ln() + c * (dx / c).ln_1p();
            (diff / (lnc + 1.0), (x.ln() + 1.0) / (lnc + 1.0))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_detects_sign_change() {
        let err = Generator::new(
            "x^2 on R",
            |x| x * x,
            |x| 2.0 * x,
            |_| 2.0,
            Interval::open(-1.0, 1.0).unwrap(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotStrictlyMonotone { .. }));
    }

    #[test]
    fn validation_detects_direction() {
        let g = Generator::new("-x", |x| -x, |_| -1.0, |_| 0.0, Interval::real_line()).unwrap();
        assert_eq!(g.direction(), Direction::Decreasing);
        let h = Generator::new(
            "x^3",
            |x| x * x * x,
            |x| 3.0 * x * x,
            |x| 6.0 * x,
            Interval::positive(),
        )
        .unwrap();
        assert_eq!(h.direction(), Direction::Increasing);
    }

    #[test]
    fn anchored_forms_match_raw_differences() {
        let cases = [
            (Generator::power(2.5), 1.7, 0.4),
            (Generator::power(-1.5), 2.0, -0.7),
            (Generator::ln(), 3.0, 1.0),
            (Generator::exp(), 0.3, -1.2),
            (Generator::x_ln_x(), 1.2, 0.9),
            (Generator::identity(), 5.0, -2.0),
        ];
        for (g, c, dx) in cases {
            let (rel, drel) = g.anchored(c, dx);
            let raw_rel = (g.f(c + dx) - g.f(c)) / g.df(c);
            let raw_drel = g.df(c + dx) / g.df(c);
            assert!(
                (rel - raw_rel).abs() <= 1e-12 * (1.0 + raw_rel.abs()),
                "{}: {rel} vs {raw_rel}",
                g.name()
            );
            assert!(
                (drel - raw_drel).abs() <= 1e-12 * (1.0 + raw_drel.abs()),
                "{}",
                g.name()
            );
        }
    }

    #[test]
    fn affine_flips_direction_for_negative_scale() {
        let g = Generator::ln().affine(-2.0, 1.0).unwrap();
        assert_eq!(g.direction(), Direction::Decreasing);
        assert_eq!(g.f(1.0), 1.0);
        assert!(Generator::ln().affine(0.0, 1.0).is_err());
    }

    #[test]
    fn restrict_requires_sub_interval() {
        let g = Generator::ln();
        assert!(g.restrict(Interval::closed(1.0, 2.0).unwrap()).is_ok());
        assert!(g.restrict(Interval::closed(-1.0, 2.0).unwrap()).is_err());
    }
}
