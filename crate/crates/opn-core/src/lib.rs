//! Exact divisor-sum arithmetic and the structural machinery of odd perfect
//! numbers: Euler-form decomposition, Touchard residue classification, the
//! eight refined congruence forms, and a parallel perfect-number range scan.
//!
//! Everything is computed over arbitrary-precision naturals; there are no
//! probabilistic answers anywhere. The crate is split into:
//!
//! - [`arith`]: primality, factorization, and the divisor-sum function σ.
//! - [`forms`]: Euler form, Touchard classes, refined form classification,
//!   and the σ(p^(12λ+5)) factorization identity.
//! - [`scan`]: segmented divisor-sum sieve and the parallel perfect-number
//!   scan harness.
//! - [`lemmas`]: exhaustive/randomized verifiers for every divisibility
//!   lemma the classifiers rely on.

pub mod arith;
pub mod error;
pub mod forms;
pub mod lemmas;
pub mod scan;

/// Arbitrary-precision nonnegative integer; the universe of all arithmetic
/// in this crate.
pub type Natural = num_bigint::BigUint;

pub use arith::{factorize, is_perfect, is_prime, sigma, sigma_prime_power, Factorization};
pub use error::Error;
pub use forms::{
    euler_decompose, kuhnel_check, quartic_div3, quartic_div7_direct, quartic_div7_predict,
    refined_classify, sigma_factorization_eq3, touchard_class_direct, touchard_from_euler,
    Eq3Factors, EulerDecomposition, EulerExclusion, EulerForm, ExclusionReason, FormClass,
    PrimeClass, RefinedForm, SevenDivisibility, TouchardClass,
};
pub use scan::{
    scan_range, verify_even_perfect, Parity, Prefilter, ScanConfig, ScanRecord, ScanSummary,
    Verdict,
};
