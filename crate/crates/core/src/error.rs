use thiserror::Error;

/// Errors raised by the quadrature library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precision of {bits} bits is below the minimum of {min}")]
    Precision { bits: usize, min: usize },
    #[error("could not parse `{0}` as a decimal number")]
    Parse(String),
    #[error("no convergence after {steps} refinements (last change {last_change:e})")]
    NonConvergence { steps: usize, last_change: f64 },
    #[error("integrand `{0}` has no decay envelope and no truncation window was supplied")]
    MissingEnvelope(String),
    #[error("integrand `{0}` has no closed-form Mellin transform")]
    MissingTransform(String),
    #[error("lattice point e^{{{0}}} overflows the exponent range")]
    Overflow(f64),
    #[error("remainder sequence of length {have} cannot cover index {need}")]
    InsufficientCoverage { have: usize, need: usize },
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
    #[error("rate undefined for a zero error")]
    UndefinedRate,
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
}

pub type Result<T> = std::result::Result<T, Error>;
