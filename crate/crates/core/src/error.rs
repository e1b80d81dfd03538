use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the documented domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested point is a (logarithmic) singularity of the function.
    #[error("singular point: {0}")]
    Singular(String),

    #[error("series did not converge within {max_terms} terms (tail bound {tail_bound:e})")]
    NonConvergence { max_terms: usize, tail_bound: f64 },

    #[error("overflow risk: {0}")]
    Overflow(String),

    #[error("quadrature budget of {evaluations} evaluations exhausted (error estimate {estimate:e} > {tol:e})")]
    QuadratureBudget {
        evaluations: usize,
        estimate: f64,
        tol: f64,
    },

    #[error("fit residual {residual:e} above tolerance {tol:e}")]
    FitResidual { residual: f64, tol: f64 },
}

impl Error {
    /// True for errors caused by bad arguments rather than numerical failure.
    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::Singular(_))
    }
}
