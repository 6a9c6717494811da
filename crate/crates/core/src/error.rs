use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
    #[error(
        "quadrature did not converge: value {value:e}, estimated error {est_error:e} \
         exceeds tolerance {tolerance:e} after {subdivisions} panels"
    )]
    Convergence {
        value: f64,
        est_error: f64,
        tolerance: f64,
        subdivisions: usize,
    },

    /// A root solver could not find a sign change on its search interval.
    #[error("no sign change of {equation} on [{lo}, {hi}]: f(lo) = {f_lo:e}, f(hi) = {f_hi:e}")]
    Bracket {
        equation: &'static str,
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    /// Invalid configuration of a grid, lattice or run.
    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    /// Stable machine-readable code for this error class.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain(_) => "E_DOMAIN",
            Error::Convergence { .. } => "E_CONVERGENCE",
            Error::Bracket { .. } => "E_BRACKET",
            Error::Config(_) => "E_CONFIG",
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
