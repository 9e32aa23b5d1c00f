use thiserror::Error;

/// Every fallible operation in the crate reports one of these.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("integral diverges: {0}")]
    DivergentIntegral(String),
    #[error("quadrature did not reach tolerance (estimate {estimate:e}, error {error:e})")]
    DivergedQuadrature { estimate: f64, error: f64 },
    #[error("reciprocal of a law with an atom at zero")]
    AtomAtZero,
    #[error("fGIG endpoint solve failed after {0} Newton steps")]
    FGIGEndpointSolveFailed(usize),
    #[error("argument {0} hits the support")]
    PoleOnSupport(String),
    #[error("argument {0} outside the transform domain")]
    OutOfDomain(String),
    #[error("composed S-transform domain is empty")]
    DomainShrunk,
    #[error("Im G > 0 at {0}: not a Cauchy transform")]
    NonNevanlinna(String),
    #[error("recovered mass off by factor {0}")]
    MassDefect(f64),
    #[error("p = {0} exceeds the enumeration cap")]
    TooLarge(usize),
    #[error("measure has no tail of the required class: {0}")]
    WrongTailClass(String),
    #[error("pole hit in kernel evaluation at {0}")]
    PoleHit(String),
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("model is reducible: A c + B = c has a solution")]
    NotIrreducible,
    #[error("tau(A) = {0} > 1: no solution exists")]
    Supercritical(f64),
    #[error("positive part leaked {0:e} mass below zero")]
    MassLeak(f64),
    #[error("tau(A) = {0} is not 1")]
    NotCritical(f64),
    #[error("both finite variance and a stable tail descriptor are present")]
    AmbiguousRegime,
    #[error("log-log fit rejected (R^2 = {0})")]
    BadFit(f64),
    #[error("matrix is not symmetric (defect {0:e})")]
    NotSymmetric(f64),
    #[error("oracle unavailable: {0}")]
    OracleUnavailable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
