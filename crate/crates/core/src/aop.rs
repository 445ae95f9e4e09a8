//! The operator `A(f) = f''/f'`, mean comparison through it, and the uniform
//! bound on `|M_f - M_k|` in terms of L¹ norms of `A`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generator::Generator;
use crate::interval::Interval;
use crate::mean::{evaluate_mean, Sample, Weights};
use crate::quad::{adaptive_simpson, QuadOptions};

/// Absolute tolerance for pointwise A-comparisons, scaled up by `|A|` when that exceeds 1.
pub const A_TOL: f64 = 1e-9;

/// Random points added to the uniform grid when probing for a dense inequality.
pub const DENSE_RANDOM_POINTS: usize = 64;

pub const DEFAULT_SEED: u64 = 0x005e_ed0f_a115_ca1e;

const DERIVATIVE_FLOOR: f64 = 1e-300;
const MEAN_NOISE_FLOOR: f64 = 1e-13;

/// `f''(x) / f'(x)`.
pub fn a_operator(g: &Generator, x: f64) -> Result<f64> {
    if !g.domain().contains(x) {
        return Err(Error::OutsideDomain {
            value: x,
            domain: g.domain().to_string(),
        });
    }
    let d = g.df(x);
    if !(d.abs() >= DERIVATIVE_FLOOR) {
        return Err(Error::NotStrictlyMonotone { at: x });
    }
    Ok(g.d2f(x) / d)
}

/// Which version of the two-point limit formula to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LimitForm {
    /// `(2/ε²)(M_f(x-ε, x+ε) - x)`, which tends to `A(f)(x)`.
    #[default]
    Corrected,
    /// `(2/ε²) M_f(x-ε, x+ε)` as sometimes written; diverges as `ε -> 0`.
    /// Kept only to document the discrepancy.
    Literal,
}

/// Estimates `A(f)(x)` from the equal-weight mean of `x ± eps`; the error is `O(eps²)`.
pub fn a_operator_numeric(g: &Generator, x: f64, eps: f64) -> Result<f64> {
    a_operator_numeric_with(g, x, eps, LimitForm::Corrected)
}

pub fn a_operator_numeric_with(g: &Generator, x: f64, eps: f64, form: LimitForm) -> Result<f64> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "step must be positive, got {eps}"
        )));
    }
    let (lo, hi) = (x - eps, x + eps);
    let domain = g.domain();
    if !domain.contains(lo) || !domain.contains(hi) {
        return Err(Error::OutsideDomain {
            value: if domain.contains(lo) { hi } else { lo },
            domain: domain.to_string(),
        });
    }
    // a unit-size A moves the mean by eps²/2; below the noise floor the estimate is rounding
    if 0.5 * eps * eps <= MEAN_NOISE_FLOOR * x.abs().max(1.0) {
        return Err(Error::StepTooSmall { x, eps });
    }
    let m = evaluate_mean(g, &Sample::new(vec![lo, hi])?, &Weights::uniform(2)?)?;
    let scale = 2.0 / (eps * eps);
    Ok(match form {
        LimitForm::Corrected => scale * (m - x),
        LimitForm::Literal => scale * m,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    Greater,
    Smaller,
    Equivalent,
    Incomparable,
}

/// Grid evidence for the ordering of `A(f)` against `A(g)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonVerdict {
    pub relation: Relation,
    /// Where the ordering fails: the refined sign change for incomparable
    /// pairs, otherwise the first point that broke a strict ordering.
    pub witness: Option<f64>,
    /// `(x, y)` with `A(f)(x) > A(g)(x)` and `A(f)(y) < A(g)(y)`, when both exist.
    pub witness_pair: Option<(f64, f64)>,
    pub grid_size: usize,
    pub min_difference: f64,
    pub max_difference: f64,
}

fn require_same_domain(f: &Generator, g: &Generator) -> Result<()> {
    if f.domain() != g.domain() {
        return Err(Error::DomainMismatch {
            left: f.domain().to_string(),
            right: g.domain().to_string(),
        });
    }
    Ok(())
}

/// Uniform grid over the inset domain plus seeded random points, sorted.
fn probe_points(domain: &Interval, grid_size: usize, seed: u64) -> Vec<f64> {
    let (lo, hi) = domain.inset();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = domain.grid(grid_size);
    pts.extend((0..DENSE_RANDOM_POINTS).map(|_| rng.gen_range(lo..=hi)));
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

fn a_tolerance(af: f64, ag: f64) -> f64 {
    A_TOL * af.abs().max(ag.abs()).max(1.0)
}

pub fn compare_means(f: &Generator, g: &Generator, grid_size: usize) -> Result<ComparisonVerdict> {
    compare_means_seeded(f, g, grid_size, DEFAULT_SEED)
}

/// Classifies the pair by the sign of `A(f) - A(g)` on a grid.
///
/// Greater (smaller) needs a strict sign at every probe point, equivalent
/// needs a tie everywhere, and anything else is incomparable. Grid evidence
/// stands in for the dense-set condition; it is not a proof.
pub fn compare_means_seeded(
    f: &Generator,
    g: &Generator,
    grid_size: usize,
    seed: u64,
) -> Result<ComparisonVerdict> {
    require_same_domain(f, g)?;
    if grid_size < 16 {
        return Err(Error::InvalidArgument(format!(
            "grid size must be at least 16, got {grid_size}"
        )));
    }
    let pts = probe_points(f.domain(), grid_size, seed);
    let diff = |x: f64| -> Result<(f64, i8)> {
        let (af, ag) = (a_operator(f, x)?, a_operator(g, x)?);
        let d = af - ag;
        let class = if d > a_tolerance(af, ag) {
            1
        } else if d < -a_tolerance(af, ag) {
            -1
        } else {
            0
        };
        Ok((d, class))
    };
    let evals: Vec<(f64, f64, i8)> = pts
        .iter()
        .map(|&x| diff(x).map(|(d, c)| (x, d, c)))
        .collect::<Result<_>>()?;

    let min_difference = evals.iter().map(|e| e.1).fold(f64::INFINITY, f64::min);
    let max_difference = evals.iter().map(|e| e.1).fold(f64::NEG_INFINITY, f64::max);
    let pos = evals.iter().find(|e| e.2 > 0).map(|e| e.0);
    let neg = evals.iter().find(|e| e.2 < 0).map(|e| e.0);
    let all = |c: i8| evals.iter().all(|e| e.2 == c);

    let (relation, witness) = if all(1) {
        (Relation::Greater, None)
    } else if all(-1) {
        (Relation::Smaller, None)
    } else if all(0) {
        (Relation::Equivalent, None)
    } else {
        let strict: Vec<&(f64, f64, i8)> = evals.iter().filter(|e| e.2 != 0).collect();
        let flip = strict.windows(2).find(|w| w[0].2 != w[1].2);
        let witness = match flip {
            Some(w) => Some(refine_crossing(
                &|x| diff(x).map(|(d, _)| d),
                w[0].0,
                w[1].0,
            )?),
            None => evals.iter().find(|e| e.2 == 0).map(|e| e.0),
        };
        (Relation::Incomparable, witness)
    };
    Ok(ComparisonVerdict {
        relation,
        witness,
        witness_pair: pos.zip(neg),
        grid_size: evals.len(),
        min_difference,
        max_difference,
    })
}

fn refine_crossing(d: &dyn Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<f64> {
    let da = d(a)?;
    for _ in 0..60 {
        let m = 0.5 * (a + b);
        if m <= a.min(b) || m >= a.max(b) {
            break;
        }
        if d(m)?.signum() == da.signum() {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Coefficients with `f = alpha * g + beta` on the probed grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AffineFit {
    pub alpha: f64,
    pub beta: f64,
    pub max_residual: f64,
}

const AFFINE_RESIDUAL_TOL: f64 = 1e-8;

/// Fits `f = alpha * g + beta` when `A(f) = A(g)` on the grid.
///
/// The coefficients come from the two outermost grid points and are then
/// checked on the whole grid; `None` if either test fails.
pub fn affine_fit(f: &Generator, g: &Generator, grid_size: usize) -> Result<Option<AffineFit>> {
    let verdict = compare_means(f, g, grid_size)?;
    if verdict.relation != Relation::Equivalent {
        return Ok(None);
    }
    let pts = f.domain().grid(grid_size);
    let (x1, x2) = (pts[0], pts[pts.len() - 1]);
    let alpha = (f.f(x2) - f.f(x1)) / (g.f(x2) - g.f(x1));
    let beta = f.f(x1) - alpha * g.f(x1);
    let mut max_residual: f64 = 0.0;
    for &x in &pts {
        let fx = f.f(x);
        let r = (fx - (alpha * g.f(x) + beta)).abs();
        if !(r <= AFFINE_RESIDUAL_TOL * (1.0 + fx.abs())) {
            return Ok(None);
        }
        max_residual = max_residual.max(r);
    }
    Ok(Some(AffineFit {
        alpha,
        beta,
        max_residual,
    }))
}

pub fn affine_equivalent(f: &Generator, g: &Generator, grid_size: usize) -> Result<bool> {
    Ok(affine_fit(f, g, grid_size)?.is_some())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct L1Norm {
    pub value: f64,
    pub converged: bool,
    pub evaluations: usize,
}

fn check_sub_interval(g: &Generator, u: &Interval) -> Result<()> {
    if !g.domain().contains_interval(u) {
        return Err(Error::DomainMismatch {
            left: g.domain().to_string(),
            right: u.to_string(),
        });
    }
    Ok(())
}

fn l1_of(integrand: &(dyn Fn(f64) -> f64 + Sync), u: &Interval) -> L1Norm {
    let (lo, hi) = u.inset();
    let q = adaptive_simpson(integrand, lo, hi, QuadOptions::default());
    L1Norm {
        value: q.value,
        converged: q.converged,
        evaluations: q.evaluations,
    }
}

/// `∫_U |A(g)|`. A run that hits the refinement limit is returned with
/// `converged = false` and the partial value.
pub fn l1_norm_a(g: &Generator, u: &Interval) -> Result<L1Norm> {
    check_sub_interval(g, u)?;
    Ok(l1_of(&|x| (g.d2f(x) / g.df(x)).abs(), u))
}

/// `∫_U |A(k) - A(f)|`.
pub fn l1_norm_a_diff(f: &Generator, k: &Generator, u: &Interval) -> Result<L1Norm> {
    check_sub_interval(f, u)?;
    check_sub_interval(k, u)?;
    Ok(l1_of(
        &|x| (k.d2f(x) / k.df(x) - f.d2f(x) / f.df(x)).abs(),
        u,
    ))
}

/// Inputs and value of the uniform bound `|U| e^{2‖A f‖₁} sinh(2‖A k - A f‖₁)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundCertificate {
    pub interval_length: f64,
    pub l1_norm_af: f64,
    pub l1_norm_diff: f64,
    pub bound: f64,
}

impl BoundCertificate {
    pub fn from_norms(interval_length: f64, l1_norm_af: f64, l1_norm_diff: f64) -> Self {
        let bound = Self::formula(interval_length, l1_norm_af, l1_norm_diff);
        Self {
            interval_length,
            l1_norm_af,
            l1_norm_diff,
            bound,
        }
    }

    fn formula(len: f64, l1_af: f64, l1_diff: f64) -> f64 {
        len * (2.0 * l1_af).exp() * (2.0 * l1_diff).sinh()
    }

    /// The bound recomputed from the stored norms.
    pub fn recompute(&self) -> f64 {
        Self::formula(self.interval_length, self.l1_norm_af, self.l1_norm_diff)
    }
}

/// Certifies `sup |M_f(a, w) - M_k(a, w)|` over all data with values in `U`.
pub fn error_bound(f: &Generator, k: &Generator, u: &Interval) -> Result<BoundCertificate> {
    if !u.is_bounded() {
        return Err(Error::InvalidArgument(format!(
            "bound needs a bounded interval, got {u}"
        )));
    }
    let af = l1_norm_a(f, u)?;
    if !af.converged {
        return Err(Error::QuadratureNonConvergence { partial: af.value });
    }
    let diff = l1_norm_a_diff(f, k, u)?;
    if !diff.converged {
        return Err(Error::QuadratureNonConvergence {
            partial: diff.value,
        });
    }
    Ok(BoundCertificate::from_norms(
        u.width(),
        af.value,
        diff.value,
    ))
}

/// Largest observed `|M_f - M_k|` over random data in `U`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanGap {
    pub max_gap: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Draws `samples` data sets (2 to 6 values uniform on the inset `U`,
/// weights uniform on `[0.05, 1]` then normalized) and records the largest
/// gap between the two means.
pub fn monte_carlo_gap(
    f: &Generator,
    k: &Generator,
    u: &Interval,
    samples: usize,
    seed: u64,
) -> Result<MeanGap> {
    let data = random_data(u, samples, seed)?;
    let gaps: Vec<f64> = data
        .par_iter()
        .map(|(a, w)| Ok((evaluate_mean(f, a, w)? - evaluate_mean(k, a, w)?).abs()))
        .collect::<Result<_>>()?;
    Ok(MeanGap {
        max_gap: gaps.into_iter().fold(0.0, f64::max),
        samples,
        seed,
    })
}

pub(crate) fn random_data(
    u: &Interval,
    samples: usize,
    seed: u64,
) -> Result<Vec<(Sample, Weights)>> {
    let (lo, hi) = u.inset();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let n = rng.gen_range(2..=6);
            let a: Vec<f64> = (0..n).map(|_| rng.gen_range(lo..=hi)).collect();
            let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..=1.0)).collect();
            Ok((Sample::new(a)?, Weights::normalized(w)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn on(g: Generator, lo: f64, hi: f64) -> Generator {
        g.restrict(Interval::open(lo, hi).unwrap()).unwrap()
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(a_operator(&Generator::power(3.0), 2.0).unwrap(), 1.0);
        for x in [-3.0, 0.0, 7.5] {
            assert_eq!(a_operator(&Generator::exp(), x).unwrap(), 1.0);
        }
        assert!(a_operator(&Generator::ln(), -1.0).is_err());
    }

    #[test]
    fn vanishing_derivative_is_rejected() {
        let flat = Generator::from_parts(
            "flat",
            |_| 1.0,
            |_| 0.0,
            |_| 0.0,
            Interval::real_line(),
            crate::generator::Direction::Increasing,
        );
        assert!(matches!(
            a_operator(&flat, 0.0),
            Err(Error::NotStrictlyMonotone { .. })
        ));
    }

    #[test]
    fn numeric_estimate_examples() {
        let e = a_operator_numeric(&Generator::exp(), 0.0, 1e-3).unwrap();
        assert!((e - 1.0).abs() < 1e-5, "{e}");
        for x in [-2.0, 0.5, 40.0] {
            let id = a_operator_numeric(&Generator::identity(), x, 1e-2).unwrap();
            assert!(id.abs() < 1e-9);
        }
    }

    #[test]
    fn numeric_estimate_error_quarters_when_step_halves() {
        let g = Generator::power(2.0);
        let exact = a_operator(&g, 1.0).unwrap();
        let e1 = (a_operator_numeric(&g, 1.0, 1e-2).unwrap() - exact).abs();
        let e2 = (a_operator_numeric(&g, 1.0, 5e-3).unwrap() - exact).abs();
        assert!((e1 / e2 - 4.0).abs() < 0.05, "ratio {}", e1 / e2);
    }

    #[test]
    fn literal_limit_form_diverges() {
        let g = Generator::exp();
        let a = a_operator_numeric_with(&g, 1.0, 1e-2, LimitForm::Literal).unwrap();
        let b = a_operator_numeric_with(&g, 1.0, 5e-3, LimitForm::Literal).unwrap();
        assert!(b > 3.9 * a);
    }

    #[test]
    fn tiny_step_is_rejected() {
        let err = a_operator_numeric(&Generator::exp(), 1.0, 1e-8).unwrap_err();
        assert!(matches!(err, Error::StepTooSmall { .. }));
        assert!(a_operator_numeric(&Generator::ln(), 0.001, 0.01).is_err());
    }

    #[test]
    fn cubic_mean_dominates_quadratic_mean() {
        let v = compare_means(&Generator::power(3.0), &Generator::power(2.0), 64).unwrap();
        assert_eq!(v.relation, Relation::Greater);
        let v = compare_means(&Generator::power(2.0), &Generator::power(3.0), 64).unwrap();
        assert_eq!(v.relation, Relation::Smaller);
    }

    #[test]
    fn affine_copy_is_equivalent() {
        let f = Generator::ln().affine(2.0, 5.0).unwrap();
        let v = compare_means(&f, &Generator::ln(), 64).unwrap();
        assert_eq!(v.relation, Relation::Equivalent);
    }

    #[test]
    fn crossing_operators_are_incomparable() {
        // A(exp) = 1 and A(x²) = 1/x cross at x = 1
        let f = on(Generator::exp(), 0.0, 3.0);
        let g = on(Generator::power(2.0), 0.0, 3.0);
        let v = compare_means(&f, &g, 64).unwrap();
        assert_eq!(v.relation, Relation::Incomparable);
        assert!((v.witness.unwrap() - 1.0).abs() < 1e-9);
        let (p, n) = v.witness_pair.unwrap();
        assert!(p > 1.0 && n < 1.0);
    }

    #[test]
    fn compare_rejects_mismatched_domains_and_small_grids() {
        assert!(matches!(
            compare_means(&Generator::exp(), &Generator::ln(), 64),
            Err(Error::DomainMismatch { .. })
        ));
        assert!(compare_means(&Generator::ln(), &Generator::ln(), 8).is_err());
    }

    #[test]
    fn affine_examples() {
        let sq = Generator::power(2.0);
        let f = sq.affine(2.0, 3.0).unwrap();
        assert!(affine_equivalent(&f, &sq, 32).unwrap());
        assert!(!affine_equivalent(&sq, &Generator::power(3.0), 32).unwrap());
        let f = Generator::ln().affine(5.0, -7.0).unwrap();
        let fit = affine_fit(&f, &Generator::ln(), 32).unwrap().unwrap();
        assert!((fit.alpha - 5.0).abs() < 1e-9);
        assert!((fit.beta + 7.0).abs() < 1e-9);
    }

    #[test]
    fn l1_norm_examples() {
        let unit = Interval::closed(0.0, 1.0).unwrap();
        let e = l1_norm_a(&Generator::exp(), &unit).unwrap();
        assert!(e.converged && (e.value - 1.0).abs() < 1e-12);
        let id = l1_norm_a(
            &Generator::identity(),
            &Interval::closed(-4.0, 9.0).unwrap(),
        )
        .unwrap();
        assert_eq!(id.value, 0.0);
        let sq = l1_norm_a(&Generator::power(2.0), &Interval::closed(1.0, 2.0).unwrap()).unwrap();
        assert!((sq.value - std::f64::consts::LN_2).abs() < 1e-8 * std::f64::consts::LN_2);
    }

    #[test]
    fn l1_norm_requires_sub_interval() {
        let u = Interval::closed(-1.0, 1.0).unwrap();
        assert!(matches!(
            l1_norm_a(&Generator::ln(), &u),
            Err(Error::DomainMismatch { .. })
        ));
    }

    #[test]
    fn identical_generators_have_zero_bound() {
        let u = Interval::closed(1.0, 2.0).unwrap();
        let g = Generator::power(2.0);
        let c = error_bound(&g, &g, &u).unwrap();
        assert_eq!(c.bound, 0.0);
        assert_eq!(c.l1_norm_diff, 0.0);
        assert_eq!(monte_carlo_gap(&g, &g, &u, 50, 1).unwrap().max_gap, 0.0);
    }

    #[test]
    fn certificate_recomputes() {
        let u = Interval::closed(1.0, 2.0).unwrap();
        let c = error_bound(&Generator::power(2.0), &Generator::power(2.01), &u).unwrap();
        assert!((c.recompute() - c.bound).abs() <= 1e-12 * c.bound);
        // ‖A k - A f‖₁ = 0.01 ln 2
        assert!((c.l1_norm_diff - 0.01 * std::f64::consts::LN_2).abs() < 1e-10);
        assert!(c.interval_length == 1.0);
    }

    #[test]
    fn unbounded_interval_is_rejected_for_bounds() {
        let g = Generator::exp();
        assert!(error_bound(&g, &g, &Interval::real_line()).is_err());
    }
}
