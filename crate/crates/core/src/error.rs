use thiserror::Error;

/// Failures surfaced by the quadrature, density and information engines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid interval [{lower}, {upper}]")]
    InvalidInterval { lower: f64, upper: f64 },
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),
    #[error("subdivision budget of {subdivisions} exhausted: error estimate {abs_error:e} on value {value:e}")]
    ConvergenceFailure {
        value: f64,
        abs_error: f64,
        subdivisions: usize,
    },
    #[error("integrand returned a non-finite value at x = {x:e}")]
    NonFiniteEvaluation { x: f64 },
    #[error("epsilon extrapolation did not contract after {terms} half-periods")]
    AccelerationStagnation { terms: usize },
    #[error("stability index {0} outside (0, 2]")]
    InvalidStabilityIndex(f64),
    #[error("scale {0} must be positive and finite")]
    InvalidScale(f64),
    #[error("rescaling factor must be nonzero")]
    ZeroScalar,
    #[error("tail asymptote is not defined for the Gaussian case alpha = 2")]
    NotApplicable,
    #[error("density evaluation failed at x = {x:e}: {source}")]
    EvaluationFailure {
        x: f64,
        #[source]
        source: Box<Error>,
    },
    #[error("score pair mixes stability indices {0} and {1}")]
    MismatchedAlpha(f64, f64),
    #[error("finite-difference step {0:e} outside [1e-8, 1e-3]")]
    InvalidStep(f64),
    #[error("stencil step {h:e} must be positive and below min(v, s)/4 = {limit:e}")]
    StencilOutOfDomain { h: f64, limit: f64 },
    #[error("ratio D/M is 0/0 at v = s")]
    DegenerateRatio,
    #[error("interpolation time {0} outside [0, 1)")]
    InvalidTime(f64),
    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
