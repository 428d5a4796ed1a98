use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("argument outside the domain of {function}: {value}")]
    Domain { function: &'static str, value: f64 },

    #[error("decay exponent {0} must exceed 1 for a convergent half-line integral")]
    BadDecay(f64),

    #[error("quadrature did not converge within {subdivisions} subdivisions (error estimate {err:e})")]
    NonConvergence { subdivisions: usize, err: f64 },

    #[error("function does not change sign on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("pointwise evaluation is implemented for n in {{1, 2, 3}}, got n = {0}")]
    UnsupportedDimension(u32),

    #[error("no sign change of the linearized determinant although the wave is classified unstable")]
    RootSearchInconclusive,

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    #[error("iteration did not converge after {sweeps} sweeps (residual {residual:e})")]
    IterationLimit { sweeps: usize, residual: f64 },

    #[error("field magnitude exceeded the blow-up guard at t = {t}")]
    Overflow { t: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
