//! Adaptive Simpson quadrature on a closed interval.

/// Stopping rules for [`adaptive_simpson`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
    pub max_evals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_depth: 40,
            max_evals: 5_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error_estimate: f64,
    /// False when some panel hit the depth limit or the evaluation budget ran out.
    pub converged: bool,
    pub evaluations: usize,
}

const INITIAL_PANELS: usize = 16;

struct State<'a> {
    f: &'a dyn Fn(f64) -> f64,
    opts: QuadOptions,
    evals: usize,
    converged: bool,
    error: f64,
}

impl State<'_> {
    fn eval(&mut self, x: f64) -> f64 {
        self.evals += 1;
        (self.f)(x)
    }

    #[allow(clippy::too_many_arguments)]
    fn refine(
        &mut self,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let flm = self.eval(lm);
        let frm = self.eval(rm);
        let h = b - a;
        let left = h / 12.0 * (fa + 4.0 * flm + fm);
        let right = h / 12.0 * (fm + 4.0 * frm + fb);
        let split = left + right;
        let delta = split - whole;
        let at_floor = delta.abs() <= 4.0 * f64::EPSILON * split.abs();
        if delta.abs() <= 15.0 * tol || at_floor {
            self.error += delta.abs() / 15.0;
            return split + delta / 15.0;
        }
        if depth >= self.opts.max_depth || self.evals >= self.opts.max_evals || !delta.is_finite() {
            self.converged = false;
            self.error += delta.abs() / 15.0;
            return split + delta / 15.0;
        }
        self.refine(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)
            + self.refine(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)
    }
}

/// Integrates `f` over `[lo, hi]` to `max(abs_tol, rel_tol * |I|)`.
///
/// The interval is first cut into 16 panels; a composite Simpson pass over
/// them fixes the relative target, and each panel is then refined by
/// recursive bisection with the Richardson-corrected estimate.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, opts: QuadOptions) -> Quadrature {
    if lo == hi {
        return Quadrature {
            value: 0.0,
            error_estimate: 0.0,
            converged: true,
            evaluations: 0,
        };
    }
    let mut st = State {
        f,
        opts,
        evals: 0,
        converged: true,
        error: 0.0,
    };
    let h = (hi - lo) / INITIAL_PANELS as f64;
    let nodes: Vec<f64> = (0..=2 * INITIAL_PANELS)
        .map(|i| {
            if i == 2 * INITIAL_PANELS {
                hi
            } else {
                lo + 0.5 * h * i as f64
            }
        })
        .collect();
    let values: Vec<f64> = nodes.iter().map(|&x| st.eval(x)).collect();
    let panels: Vec<f64> = (0..INITIAL_PANELS)
        .map(|p| h / 6.0 * (values[2 * p] + 4.0 * values[2 * p + 1] + values[2 * p + 2]))
        .collect();
    let coarse: f64 = panels.iter().sum();
    let tol = opts.abs_tol.max(opts.rel_tol * coarse.abs()) / INITIAL_PANELS as f64;
    let mut total = 0.0;
    for p in 0..INITIAL_PANELS {
        total += st.refine(
            nodes[2 * p],
            nodes[2 * p + 2],
            values[2 * p],
            values[2 * p + 1],
            values[2 * p + 2],
            panels[p],
            tol,
            0,
        );
    }
    Quadrature {
        value: total,
        error_estimate: st.error,
        converged: st.converged && total.is_finite(),
        evaluations: st.evals,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let q = adaptive_simpson(&|x| x * x * x - 2.0 * x, 0.0, 2.0, QuadOptions::default());
        assert!(q.converged);
        assert!((q.value - 0.0).abs() < 1e-13);
    }

    #[test]
    fn reciprocal_gives_ln2() {
        let q = adaptive_simpson(&|x| 1.0 / x, 1.0, 2.0, QuadOptions::default());
        assert!(q.converged);
        assert!((q.value - std::f64::consts::LN_2).abs() < 1e-10);
    }

    #[test]
    fn kink_from_absolute_value() {
        let q = adaptive_simpson(&|x: f64| (x - 0.3).abs(), 0.0, 1.0, QuadOptions::default());
        assert!(q.converged);
        // 0.3²/2 + 0.7²/2
        assert!((q.value - 0.29).abs() < 1e-9);
    }

    #[test]
    fn singularity_is_reported() {
        let opts = QuadOptions {
            max_depth: 12,
            ..QuadOptions::default()
        };
        let q = adaptive_simpson(&|x: f64| 1.0 / x, 1e-12, 1.0, opts);
        assert!(!q.converged);
        assert!(q.value > 0.0);
    }
}
