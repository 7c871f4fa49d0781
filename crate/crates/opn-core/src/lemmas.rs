//! Exhaustive and randomized verifiers for the arithmetic facts the form
//! classifiers rest on.
//!
//! Each suite checks one lemma over a bounded domain and reports the number
//! of cases tried plus the first counterexample found. The suites never
//! trust the classifier shortcuts they are validating: every claim is
//! re-checked with exact arbitrary-precision arithmetic or an independent
//! residue computation.

use std::fmt;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{factorize, sigma_prime_power};
use crate::forms::{
    euler_decompose, quartic_div3, quartic_div7_direct, quartic_div7_predict, refined_classify,
    sigma_factorization_eq3, touchard_class_direct, touchard_from_euler, EulerDecomposition,
    EulerForm, ExclusionReason, FormClass, PrimeClass, SevenDivisibility, TouchardClass,
};
use crate::Natural;

/// Domain limits for the lemma suites. The defaults complete in seconds
/// while covering every residue class mod 12·7.
#[derive(Debug, Clone)]
pub struct LemmaBounds {
    /// Upper bound on primes swept exhaustively.
    pub prime_bound: u64,
    /// Upper bound on exponents α (always restricted to α ≡ 1 (mod 4), and
    /// to odd α for the divisor-sum divisibility lemma).
    pub alpha_bound: u32,
    /// Number of randomized Euler forms for the Touchard suites.
    pub touchard_samples: u64,
    /// Seed for the deterministic sample stream.
    pub seed: u64,
}

impl Default for LemmaBounds {
    fn default() -> Self {
        LemmaBounds {
            prime_bound: 10_000,
            alpha_bound: 13,
            touchard_samples: 100_000,
            seed: 1,
        }
    }
}

/// Outcome of one lemma suite.
#[derive(Debug, Clone)]
pub struct LemmaReport {
    pub name: &'static str,
    pub cases: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl fmt::Display for LemmaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "PASS {} ({} cases)", self.name, self.cases)
        } else {
            write!(
                f,
                "FAIL {} ({} of {} cases; first: {})",
                self.name,
                self.failures,
                self.cases,
                self.first_failure.as_deref().unwrap_or("unknown")
            )
        }
    }
}

struct Checker {
    report: LemmaReport,
}

impl Checker {
    fn new(name: &'static str) -> Checker {
        Checker {
            report: LemmaReport {
                name,
                cases: 0,
                failures: 0,
                first_failure: None,
            },
        }
    }

    fn case(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.report.cases += 1;
        if !ok {
            self.report.failures += 1;
            if self.report.first_failure.is_none() {
                self.report.first_failure = Some(describe());
            }
        }
    }

    fn finish(self) -> LemmaReport {
        self.report
    }
}

fn primes_up_to(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    let mut is_prime = vec![true; limit + 1];
    is_prime[0] = false;
    if limit >= 1 {
        is_prime[1] = false;
    }
    let mut i = 2usize;
    while i * i <= limit {
        if is_prime[i] {
            let mut j = i * i;
            while j <= limit {
                is_prime[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (2..=limit as u64)
        .filter(|&n| is_prime[n as usize])
        .collect()
}

fn nat(n: u64) -> Natural {
    Natural::from(n)
}

/// Exponents ≡ 1 (mod 4) up to the bound: the shapes a special prime's
/// exponent can take.
fn euler_exponents(alpha_bound: u32) -> Vec<u32> {
    (1..=alpha_bound).step_by(4).collect()
}

/// (p+1) | σ(p^α) for every prime p and odd α, the divisibility that forces
/// 3 | N whenever p ≡ 5 (mod 12).
pub fn sigma_prime_power_divisibility(bounds: &LemmaBounds) -> LemmaReport {
    let mut c = Checker::new("sigma-prime-power-divisibility");
    for &p in &primes_up_to(bounds.prime_bound) {
        for alpha in (1..=bounds.alpha_bound).step_by(2) {
            let s = sigma_prime_power(&nat(p), alpha).expect("prime base, positive exponent");
            c.case((&s % (p + 1)).is_zero(), || {
                format!("(p+1) does not divide sigma({p}^{alpha}) = {s}")
            });
        }
    }
    c.finish()
}

/// Decomposing p^α·Q² recovers exactly the Euler form it was built from.
pub fn euler_round_trip(bounds: &LemmaBounds) -> LemmaReport {
    let mut c = Checker::new("euler-round-trip");
    // factorizing p^13 by trial division dominates the cost; a moderate
    // prime cap keeps the suite fast without thinning the residue coverage
    let cap = bounds.prime_bound.min(2_000);
    for &p in &primes_up_to(cap) {
        if p % 4 != 1 {
            continue;
        }
        for &alpha in &euler_exponents(bounds.alpha_bound) {
            for q in (1..=21u64).step_by(2) {
                if q % p == 0 {
                    continue;
                }
                let e = EulerForm::new(nat(p), alpha, nat(q)).expect("valid by construction");
                let back = euler_decompose(&factorize(&e.value()).expect("nonzero"))
                    .expect("odd value");
                c.case(back == EulerDecomposition::Form(e.clone()), || {
                    format!("round trip of p={p}, alpha={alpha}, Q={q} returned {back:?}")
                });
            }
        }
    }
    c.finish()
}

fn sample_euler_form(
    rng: &mut ChaCha8Rng,
    primes_1mod4: &[u64],
    alphas: &[u32],
) -> (u64, u32, u64) {
    let p = primes_1mod4[rng.gen_range(0..primes_1mod4.len())];
    let alpha = alphas[rng.gen_range(0..alphas.len())];
    let q = loop {
        let q = 2 * rng.gen_range(0..500u64) + 1;
        if q % p != 0 {
            break q;
        }
    };
    (p, alpha, q)
}

fn touchard_sample_space(bounds: &LemmaBounds) -> (Vec<u64>, Vec<u32>) {
    let primes_1mod4: Vec<u64> = primes_up_to(bounds.prime_bound)
        .into_iter()
        .filter(|p| p % 4 == 1)
        .collect();
    (primes_1mod4, euler_exponents(bounds.alpha_bound))
}

/// Randomized Euler forms: every non-excluded verdict of the proof-driven
/// classifier equals the direct residue classification, variant and k alike.
pub fn touchard_consistency(bounds: &LemmaBounds) -> LemmaReport {
    let mut c = Checker::new("touchard-consistency");
    let (primes_1mod4, alphas) = touchard_sample_space(bounds);
    let mut rng = ChaCha8Rng::seed_from_u64(bounds.seed);
    for _ in 0..bounds.touchard_samples {
        let (p, alpha, q) = sample_euler_form(&mut rng, &primes_1mod4, &alphas);
        let e = EulerForm::new(nat(p), alpha, nat(q)).expect("valid by construction");
        let from_euler = touchard_from_euler(&e);
        if matches!(from_euler, TouchardClass::Excluded { .. }) {
            continue;
        }
        let direct = touchard_class_direct(&e.value());
        c.case(from_euler == direct, || {
            format!("p={p}, alpha={alpha}, Q={q}: from-Euler {from_euler} vs direct {direct}")
        });
    }
    c.finish()
}

/// The classifier excludes exactly the case p ≡ 5 (mod 12) with 3 ∤ Q, and
/// there 3 | σ(p^α) really holds, which is what makes the case impossible
/// for a perfect N.
pub fn touchard_exclusion_soundness(bounds: &LemmaBounds) -> LemmaReport {
    let mut c = Checker::new("touchard-exclusion-soundness");
    let (primes_1mod4, alphas) = touchard_sample_space(bounds);
    let mut rng = ChaCha8Rng::seed_from_u64(bounds.seed);
    for _ in 0..bounds.touchard_samples {
        let (p, alpha, q) = sample_euler_form(&mut rng, &primes_1mod4, &alphas);
        let e = EulerForm::new(nat(p), alpha, nat(q)).expect("valid by construction");
        let excluded = matches!(touchard_from_euler(&e), TouchardClass::Excluded { .. });
        let should_exclude = p % 12 == 5 && q % 3 != 0;
        if excluded != should_exclude {
            c.case(false, || {
                format!("p={p}, alpha={alpha}, Q={q}: excluded={excluded}, expected {should_exclude}")
            });
            continue;
        }
        if excluded {
            let s = sigma_prime_power(&nat(p), alpha).expect("prime base");
            c.case((&s % 3u32).is_zero(), || {
                format!("excluded p={p}, alpha={alpha} but 3 does not divide sigma = {s}")
            });
        } else {
            c.case(true, || unreachable!());
        }
    }
    c.finish()
}

/// 3 | p⁴+p²+1 across both special-prime residue classes, checked by exact
/// arithmetic rather than the mod-3 argument that predicts it.
pub fn quartic_mod3(bounds: &LemmaBounds) -> LemmaReport {
    let mut c = Checker::new("quartic-mod-3");
    for &p in &primes_up_to(bounds.prime_bound) {
        if p % 12 != 1 && p % 12 != 5 {
            continue;
        }
        c.case(quartic_div3(&nat(p)) == Ok(true), || {
            format!("3 does not divide {p}^4 + {p}^2 + 1")
        });
    }
    c.finish()
}

/// The residue-table prediction for 7 | p⁴+p²+1 agrees with exact division
/// on every prime in both classes, and its impossible rows never fire on a
/// prime.
pub fn quartic_mod7_agreement(bounds: &LemmaBounds) -> LemmaReport {
    let mut c = Checker::new("quartic-mod-7-agreement");
    for &p in &primes_up_to(bounds.prime_bound) {
        let class = match PrimeClass::of(&nat(p)) {
            Some(class) => class,
            None => continue,
        };
        let n = (p - class.offset() as u64) / 12;
        let predicted = quartic_div7_predict(class, (n % 7) as u8);
        let direct = quartic_div7_direct(&nat(p));
        let ok = match predicted {
            SevenDivisibility::Divides => direct,
            SevenDivisibility::DoesNotDivide => !direct,
            SevenDivisibility::PrimeImpossible => false,
        };
        c.case(ok, || {
            format!("p={p} (n={n}): predicted {predicted}, direct divisibility {direct}")
        });
    }
    c.finish()
}

/// The three-factor split of σ(p^(12λ+5)) multiplies back to the exact
/// geometric sum.
pub fn eq3_identity(bounds: &LemmaBounds) -> LemmaReport {
    let mut c = Checker::new("eq3-identity");
    // the identity is checked at full precision; values reach ~90 digits
    let cap = bounds.prime_bound.min(1_000);
    for &p in &primes_up_to(cap) {
        if p % 12 != 1 {
            continue;
        }
        for lambda in 0..=2u32 {
            let factors = sigma_factorization_eq3(&nat(p), lambda).expect("prime, 1 mod 12");
            let direct = sigma_prime_power(&nat(p), 12 * lambda + 5).expect("prime base");
            c.case(factors.product() == direct, || {
                format!("p={p}, lambda={lambda}: factors multiply to a wrong value")
            });
        }
    }
    c.finish()
}

/// Exponents ≡ 1 or 9 (mod 12) put no 3-divisibility demand on Q when
/// p ≡ 1 (mod 12): those two forms classify cleanly with 3 ∤ Q.
pub fn alpha_nine_analogue(bounds: &LemmaBounds) -> LemmaReport {
    let mut c = Checker::new("alpha-nine-analogue");
    let q_choices = [1u64, 5, 7, 11, 13, 25];
    for &p in &primes_up_to(bounds.prime_bound) {
        if p % 12 != 1 {
            continue;
        }
        for alpha in [1u32, 9] {
            if alpha > bounds.alpha_bound {
                continue;
            }
            for &q in &q_choices {
                if q % p == 0 {
                    continue;
                }
                let e = EulerForm::new(nat(p), alpha, nat(q)).expect("valid by construction");
                let verdict = refined_classify(&e);
                let ok = matches!(&verdict, FormClass::Form(f) if !f.three_divides);
                c.case(ok, || {
                    format!("p={p}, alpha={alpha}, Q={q}: unexpected verdict {verdict}")
                });
            }
        }
    }
    c.finish()
}

/// The refined classifier is total and internally coherent on a dense sweep
/// of valid Euler forms: every verdict is one of the eight forms or a
/// reachable exclusion, the forced-divisibility flags match the residues,
/// and no 21Q form appears where the prediction rules 7 out.
pub fn classifier_totality(bounds: &LemmaBounds) -> LemmaReport {
    let mut c = Checker::new("classifier-totality");
    for &p in &primes_up_to(bounds.prime_bound) {
        if p % 4 != 1 {
            continue;
        }
        for &alpha in &euler_exponents(bounds.alpha_bound) {
            for q in (1..=105u64).step_by(2) {
                if q % p == 0 {
                    continue;
                }
                let e = EulerForm::new(nat(p), alpha, nat(q)).expect("valid by construction");
                let class = if p % 12 == 1 {
                    PrimeClass::OneMod12
                } else {
                    PrimeClass::FiveMod12
                };
                let n = (p - class.offset() as u64) / 12;
                let predicted = quartic_div7_predict(class, (n % 7) as u8);
                let ok = match refined_classify(&e) {
                    FormClass::Form(f) => {
                        (1..=8).contains(&f.index())
                            && f.three_divides == (p % 12 == 5 || alpha % 12 == 5)
                            && (!f.seven_divides
                                || (alpha % 12 == 5
                                    && predicted == SevenDivisibility::Divides
                                    && q % 7 == 0))
                            && !(alpha % 12 == 5
                                && predicted == SevenDivisibility::DoesNotDivide
                                && f.seven_divides)
                    }
                    FormClass::Exclusion(reason) => matches!(
                        reason,
                        ExclusionReason::ThreeDivisibilityConflict
                            | ExclusionReason::SevenDivisibilityConflict
                            | ExclusionReason::KuhnelViolation
                    ),
                };
                c.case(ok, || {
                    format!(
                        "p={p}, alpha={alpha}, Q={q}: incoherent verdict {}",
                        refined_classify(&e)
                    )
                });
            }
        }
    }
    c.finish()
}

/// On the sweep of forms that land in the 21Q shapes, the classifier flags
/// exactly the ones whose reconstructed N is divisible by 105: no false
/// negatives and no false positives.
pub fn kuhnel_filter(bounds: &LemmaBounds) -> LemmaReport {
    let mut c = Checker::new("kuhnel-filter");
    let alphas: Vec<u32> = [5u32, 17]
        .into_iter()
        .filter(|a| *a <= bounds.alpha_bound)
        .collect();
    // odd multiples of 21 up to 1000; the multiples of 105 among them are
    // the guaranteed violations via 5 | Q
    let cofactors: Vec<u64> = (1..=47u64).step_by(2).map(|m| 21 * m).collect();
    for &p in &primes_up_to(bounds.prime_bound.min(500)) {
        if p % 4 != 1 {
            continue;
        }
        for &alpha in &alphas {
            for &q in &cofactors {
                if q % p == 0 {
                    continue;
                }
                let e = EulerForm::new(nat(p), alpha, nat(q)).expect("valid by construction");
                let class = if p % 12 == 1 {
                    PrimeClass::OneMod12
                } else {
                    PrimeClass::FiveMod12
                };
                let n = (p - class.offset() as u64) / 12;
                let lands_in_21q =
                    quartic_div7_predict(class, (n % 7) as u8) == SevenDivisibility::Divides;
                let divisible_by_105 = p == 5 || q % 5 == 0;
                let verdict = refined_classify(&e);
                let flagged =
                    verdict == FormClass::Exclusion(ExclusionReason::KuhnelViolation);
                c.case(flagged == (lands_in_21q && divisible_by_105), || {
                    format!(
                        "p={p}, alpha={alpha}, Q={q}: flagged={flagged}, \
                         lands_in_21q={lands_in_21q}, 105|N={divisible_by_105}"
                    )
                });
            }
        }
    }
    c.finish()
}

/// Run every suite at the given bounds, in a fixed order.
pub fn verify_all(bounds: &LemmaBounds) -> Vec<LemmaReport> {
    vec![
        sigma_prime_power_divisibility(bounds),
        euler_round_trip(bounds),
        touchard_consistency(bounds),
        touchard_exclusion_soundness(bounds),
        quartic_mod3(bounds),
        quartic_mod7_agreement(bounds),
        eq3_identity(bounds),
        alpha_nine_analogue(bounds),
        classifier_totality(bounds),
        kuhnel_filter(bounds),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_bounds() -> LemmaBounds {
        LemmaBounds {
            prime_bound: 300,
            alpha_bound: 13,
            touchard_samples: 2_000,
            seed: 7,
        }
    }

    #[test]
    fn all_suites_pass_at_small_bounds() {
        let reports = verify_all(&quick_bounds());
        assert_eq!(reports.len(), 10);
        for r in &reports {
            assert!(r.passed(), "{r}");
            assert!(r.cases > 0, "{} ran no cases", r.name);
        }
    }

    #[test]
    fn suite_names_are_unique() {
        let reports = verify_all(&quick_bounds());
        let mut names: Vec<_> = reports.iter().map(|r| r.name).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), 10);
    }

    #[test]
    fn default_bounds() {
        let b = LemmaBounds::default();
        assert_eq!(b.prime_bound, 10_000);
        assert_eq!(b.alpha_bound, 13);
        assert_eq!(b.touchard_samples, 100_000);
    }

    #[test]
    fn report_formatting() {
        let pass = LemmaReport {
            name: "example",
            cases: 12,
            failures: 0,
            first_failure: None,
        };
        assert_eq!(pass.to_string(), "PASS example (12 cases)");
        let fail = LemmaReport {
            name: "example",
            cases: 12,
            failures: 2,
            first_failure: Some("p=5".into()),
        };
        assert_eq!(fail.to_string(), "FAIL example (2 of 12 cases; first: p=5)");
    }

    #[test]
    fn primes_sieve_matches_known_counts() {
        assert_eq!(primes_up_to(100).len(), 25);
        assert_eq!(primes_up_to(10_000).len(), 1_229);
        assert_eq!(primes_up_to(2), vec![2]);
    }
}
