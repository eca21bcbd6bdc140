use thiserror::Error;

/// Errors raised by the symbol calculus.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero is not allowed here: {0}")]
    ZeroInput(&'static str),
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("{0} is not an odd prime")]
    NotOddPrime(String),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field size {0} exceeds the supported bound")]
    FieldTooLarge(u64),
    #[error("polynomial {0} is not irreducible")]
    Reducible(String),
    #[error("integer {0} could not be factored at this scale")]
    FactorizationTooHard(String),
    #[error("singular matrix")]
    Singular,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("form is not closed")]
    NotClosed,
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("not in the kernel: {0}")]
    NotInKernel(String),
    #[error("point count bound exceeded: q^n = {0}")]
    CountBound(u64),
    #[error("loop invalid: {0}")]
    BadLoop(String),
    #[error("quadrature did not converge after {0} samples")]
    NoConvergence(usize),
    /// A verified mathematical identity failed; this is always an implementation bug.
    #[error("property violated: {0}")]
    PropertyViolated(String),
}

pub type Result<T> = std::result::Result<T, Error>;
