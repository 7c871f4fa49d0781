use crate::Natural;

/// Errors for contract violations. Structural verdicts (exclusions) are not
/// errors; they are ordinary return values of the classifiers.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("0 has no prime factorization")]
    ZeroFactorization,

    #[error("{0} is not prime")]
    NotPrime(Natural),

    #[error("exponent must be >= 1")]
    ZeroExponent,

    #[error("{0} is divisible by 3; the special prime never is")]
    DivisibleByThree(Natural),

    #[error("{0} is not congruent to 1 mod 12")]
    NotOneMod12(Natural),

    #[error("even value {0} where an odd one is required")]
    EvenValue(Natural),

    #[error("invalid factorization: {0}")]
    InvalidFactorization(String),

    #[error("invalid Euler form: {0}")]
    InvalidEulerForm(String),

    #[error("invalid scan config: {0}")]
    InvalidScanConfig(String),
}
