use thiserror::Error;

/// Failures raised by mean evaluation, the comparison operator, and scale solving.
///
/// Variants split into two groups that the command line maps onto distinct
/// exit codes: validation problems with the inputs, and numerical failures
/// of an otherwise valid request (see [`Error::is_numerical`]).
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid interval [{lo}, {hi}]: lower end must be below upper end")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("empty sample")]
    EmptySample,

    #[error("non-finite value {value} at index {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("length mismatch: {values} values but {weights} weights")]
    LengthMismatch { values: usize, weights: usize },

    #[error("weight {value} at index {index} is not positive")]
    NonPositiveWeight { index: usize, value: f64 },

    #[error("weights sum to {sum}, deviating from 1 by more than {tolerance}")]
    WeightSum { sum: f64, tolerance: f64 },

    #[error("value {value} lies outside the domain {domain}")]
    OutsideDomain { value: f64, domain: String },

    #[error("generator derivative vanishes or changes sign near x = {at}")]
    NotStrictlyMonotone { at: f64 },

    #[error("target {target} is outside the attainable range ({lo}, {hi})")]
    TargetOutOfRange { target: f64, lo: f64, hi: f64 },

    #[error("sample is constant; every parameter yields the same mean")]
    ConstantSample,

    #[error("domain mismatch: {left} vs {right}")]
    DomainMismatch { left: String, right: String },

    #[error("invalid input at row {row}: {message}")]
    Input { row: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("step {eps} is too small for a reliable estimate at x = {x}")]
    StepTooSmall { x: f64, eps: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("quadrature did not converge; partial value {partial}")]
    QuadratureNonConvergence { partial: f64 },

    #[error("bracket expansion exhausted at [{lo}, {hi}]")]
    BracketExhausted { lo: f64, hi: f64 },
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Numerical(_)
                | Error::QuadratureNonConvergence { .. }
                | Error::BracketExhausted { .. }
                | Error::NotStrictlyMonotone { .. }
                | Error::StepTooSmall { .. }
        )
    }

    /// Stable snake_case identifier for machine consumers.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidInterval { .. } => "invalid_interval",
            Error::EmptySample => "empty_sample",
            Error::NonFinite { .. } => "non_finite",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::NonPositiveWeight { .. } => "non_positive_weight",
            Error::WeightSum { .. } => "weight_sum",
            Error::OutsideDomain { .. } => "outside_domain",
            Error::NotStrictlyMonotone { .. } => "not_strictly_monotone",
            Error::TargetOutOfRange { .. } => "target_out_of_range",
            Error::ConstantSample => "constant_sample",
            Error::DomainMismatch { .. } => "domain_mismatch",
            Error::Input { .. } => "invalid_input",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::StepTooSmall { .. } => "step_too_small",
            Error::Numerical(_) => "numerical_failure",
            Error::QuadratureNonConvergence { .. } => "quadrature_non_convergence",
            Error::BracketExhausted { .. } => "bracket_exhausted",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
