//! Quasi-arithmetic means `M_f(a, w) = f⁻¹(Σ wᵢ f(aᵢ))`, their comparison
//! through `A(f) = f''/f'`, and one-parameter families of means (scales).
//!
//! ```
//! use quasimean::families::power_family;
//! use quasimean::mean::{evaluate_mean, Sample, Weights};
//! use quasimean::scale::solve_scale;
//!
//! let a = Sample::new(vec![1.0, 4.0]).unwrap();
//! let w = Weights::uniform(2).unwrap();
//! let power = power_family();
//! assert!((evaluate_mean(&power.make(1.0), &a, &w).unwrap() - 2.5).abs() < 1e-15);
//! // the power exponent whose mean is the geometric mean 2
//! let r = solve_scale(&power, &a, &w, 2.0).unwrap();
//! assert!(r.t_star.abs() < 1e-9);
//! ```

// NaN-rejecting checks are written as negated comparisons
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod aop;
pub mod cli;
pub mod error;
pub mod families;
pub mod generator;
pub mod interval;
pub mod mean;
pub mod quad;
pub mod scale;
pub mod sum;
