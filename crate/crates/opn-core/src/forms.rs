//! Structural constraints on odd perfect numbers: Euler's form N = p^α·Q²,
//! Touchard's residue classes N = 12k+1 and N = 36k+9, the eight refined
//! congruence forms layered on top of them, and the divisibility facts that
//! drive the whole chain.
//!
//! Every "excluded" verdict here propagates the perfection hypothesis
//! σ(N) = 2N: it means no odd perfect number can have the given shape, not
//! that the number itself fails some unconditional property. The
//! unconditional facts (which σ(p^α) is divisible by what) are separate
//! operations with their own exhaustive checks.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{is_prime, Factorization};
use crate::error::Error;
use crate::Natural;

fn residue(n: &Natural, m: u32) -> u32 {
    (n % m).to_u32().expect("residue fits u32")
}

/// p⁴ + p² + 1, the quartic factor of σ(p^(12λ+5)).
fn quartic(p: &Natural) -> Natural {
    let p2 = p * p;
    &p2 * &p2 + &p2 + 1u32
}

/// Euler's decomposition of an odd perfect candidate: N = p^α·Q² with p the
/// special prime. Constructed only through [`EulerForm::new`], so every value
/// satisfies p prime, p ≡ 1 (mod 4), α ≡ 1 (mod 4), Q odd, and p ∤ Q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerForm {
    special_prime: Natural,
    exponent: u32,
    cofactor: Natural,
}

impl EulerForm {
    pub fn new(special_prime: Natural, exponent: u32, cofactor: Natural) -> Result<Self, Error> {
        if !is_prime(&special_prime) {
            return Err(Error::InvalidEulerForm(format!(
                "special prime {special_prime} is not prime"
            )));
        }
        if residue(&special_prime, 4) != 1 {
            return Err(Error::InvalidEulerForm(format!(
                "special prime {special_prime} is not 1 (mod 4)"
            )));
        }
        if exponent % 4 != 1 {
            return Err(Error::InvalidEulerForm(format!(
                "exponent {exponent} is not 1 (mod 4)"
            )));
        }
        if cofactor.is_even() {
            return Err(Error::InvalidEulerForm(format!(
                "cofactor {cofactor} is even"
            )));
        }
        if (&cofactor % &special_prime).is_zero() {
            return Err(Error::InvalidEulerForm(format!(
                "special prime {special_prime} divides cofactor {cofactor}"
            )));
        }
        Ok(EulerForm {
            special_prime,
            exponent,
            cofactor,
        })
    }

    pub fn special_prime(&self) -> &Natural {
        &self.special_prime
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn cofactor(&self) -> &Natural {
        &self.cofactor
    }

    /// Reconstruct N = p^α·Q².
    pub fn value(&self) -> Natural {
        self.special_prime.pow(self.exponent) * (&self.cofactor * &self.cofactor)
    }
}

impl fmt::Display for EulerForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "p = {}, alpha = {}, Q = {}",
            self.special_prime, self.exponent, self.cofactor
        )
    }
}

/// Why a factorization admits no Euler form. Conditions are checked in a
/// fixed order and the first violation is reported.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EulerExclusion {
    /// A unique special prime needs exactly one odd exponent.
    OddExponentCount(usize),
    ExponentNotOneMod4 { prime: Natural, exponent: u32 },
    PrimeNotOneMod4 { prime: Natural },
}

impl fmt::Display for EulerExclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EulerExclusion::OddExponentCount(count) => {
                write!(f, "{count} primes have odd exponent, need exactly 1")
            }
            EulerExclusion::ExponentNotOneMod4 { prime, exponent } => {
                write!(f, "exponent {exponent} of {prime} is not 1 (mod 4)")
            }
            EulerExclusion::PrimeNotOneMod4 { prime } => {
                write!(f, "special prime {prime} is not 1 (mod 4)")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EulerDecomposition {
    Form(EulerForm),
    Excluded(EulerExclusion),
}

/// Split an odd number's factorization into Euler's p^α·Q² shape, or report
/// why the shape is impossible. Violations are checked in a fixed order:
/// odd-exponent count, then α mod 4, then p mod 4. An even input is a caller
/// error, not an exclusion.
pub fn euler_decompose(f: &Factorization) -> Result<EulerDecomposition, Error> {
    let two = Natural::from(2u32);
    if f.entries().first().is_some_and(|(p, _)| *p == two) {
        return Err(Error::EvenValue(f.value()));
    }
    let mut odd_entries = f.entries().iter().filter(|(_, e)| e % 2 == 1);
    let special = odd_entries.next();
    let extra_odd = odd_entries.count();
    let (p, alpha) = match (special, extra_odd) {
        (Some((p, e)), 0) => (p, *e),
        (None, _) => {
            return Ok(EulerDecomposition::Excluded(
                EulerExclusion::OddExponentCount(0),
            ))
        }
        (Some(_), more) => {
            return Ok(EulerDecomposition::Excluded(
                EulerExclusion::OddExponentCount(more + 1),
            ))
        }
    };
    if alpha % 4 != 1 {
        return Ok(EulerDecomposition::Excluded(
            EulerExclusion::ExponentNotOneMod4 {
                prime: p.clone(),
                exponent: alpha,
            },
        ));
    }
    if residue(p, 4) != 1 {
        return Ok(EulerDecomposition::Excluded(
            EulerExclusion::PrimeNotOneMod4 { prime: p.clone() },
        ));
    }
    let cofactor = f
        .entries()
        .iter()
        .filter(|(q, _)| q != p)
        .fold(Natural::one(), |acc, (q, e)| acc * q.pow(e / 2));
    let form = EulerForm::new(p.clone(), alpha, cofactor)
        .expect("factorization invariants imply a valid Euler form");
    Ok(EulerDecomposition::Form(form))
}

/// Touchard's residue classification: an odd perfect number is 12k+1 or
/// 36k+9.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TouchardClass {
    OneMod12 { k: Natural },
    NineMod36 { k: Natural },
    Excluded { reason: String },
}

impl TouchardClass {
    /// Stable machine-readable tag, used by the serialized scan records.
    pub fn tag(&self) -> &'static str {
        match self {
            TouchardClass::OneMod12 { .. } => "one_mod_12",
            TouchardClass::NineMod36 { .. } => "nine_mod_36",
            TouchardClass::Excluded { .. } => "excluded",
        }
    }
}

impl fmt::Display for TouchardClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TouchardClass::OneMod12 { k } => write!(f, "N = 12k + 1 with k = {k}"),
            TouchardClass::NineMod36 { k } => write!(f, "N = 36k + 9 with k = {k}"),
            TouchardClass::Excluded { reason } => write!(f, "excluded: {reason}"),
        }
    }
}

/// Classify by residue alone: 12k+1, 36k+9, or neither. Total over n ≥ 1.
pub fn touchard_class_direct(n: &Natural) -> TouchardClass {
    if residue(n, 12) == 1 {
        return TouchardClass::OneMod12 {
            k: (n - 1u32) / 12u32,
        };
    }
    if residue(n, 36) == 9 {
        return TouchardClass::NineMod36 {
            k: (n - 9u32) / 36u32,
        };
    }
    TouchardClass::Excluded {
        reason: format!(
            "residue {} (mod 12) is not 1 and residue {} (mod 36) is not 9",
            residue(n, 12),
            residue(n, 36)
        ),
    }
}

/// Derive the Touchard class from the Euler form, following the case split
/// of the theorem's proof. When 3 | Q, the square contributes a factor 9 and
/// the rest is 1 (mod 4), so N = 36k+9. When 3 ∤ Q and p ≡ 1 (mod 12), Q² ≡ 1
/// (mod 12) gives N = 12k+1. The remaining case (p ≡ 5 (mod 12), 3 ∤ Q) is
/// impossible for a perfect N: α odd makes (p+1) | σ(p^α) and 3 | p+1, so
/// σ(N) = 2N would force 3 | N.
pub fn touchard_from_euler(e: &EulerForm) -> TouchardClass {
    if (e.cofactor() % 3u32).is_zero() {
        let n = e.value();
        debug_assert_eq!(residue(&n, 36), 9);
        return TouchardClass::NineMod36 {
            k: (n - 9u32) / 36u32,
        };
    }
    if residue(e.special_prime(), 12) == 1 {
        let n = e.value();
        debug_assert_eq!(residue(&n, 12), 1);
        return TouchardClass::OneMod12 {
            k: (n - 1u32) / 12u32,
        };
    }
    TouchardClass::Excluded {
        reason: format!(
            "3 divides sigma({}^{}) so a perfect N would need 3 | N, \
             but 3 divides neither the special prime nor the cofactor",
            e.special_prime(),
            e.exponent()
        ),
    }
}

/// The two residue classes mod 12 available to an odd prime other than 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimeClass {
    OneMod12,
    FiveMod12,
}

impl PrimeClass {
    /// The additive offset: p = 12n + offset.
    pub fn offset(self) -> u32 {
        match self {
            PrimeClass::OneMod12 => 1,
            PrimeClass::FiveMod12 => 5,
        }
    }

    /// Class of a prime p ≡ 1 (mod 4); None for residues 3, 7, 9, 11 (mod 12)
    /// and the primes 2 and 3.
    pub fn of(p: &Natural) -> Option<PrimeClass> {
        match residue(p, 12) {
            1 => Some(PrimeClass::OneMod12),
            5 => Some(PrimeClass::FiveMod12),
            _ => None,
        }
    }
}

impl fmt::Display for PrimeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeClass::OneMod12 => write!(f, "12n+1"),
            PrimeClass::FiveMod12 => write!(f, "12n+5"),
        }
    }
}

/// Verdict on 7 | p⁴+p²+1 predicted from residues alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SevenDivisibility {
    Divides,
    DoesNotDivide,
    /// 7 | p itself in this residue class, so p cannot be a special prime.
    PrimeImpossible,
}

impl fmt::Display for SevenDivisibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SevenDivisibility::Divides => write!(f, "divides"),
            SevenDivisibility::DoesNotDivide => write!(f, "does_not_divide"),
            SevenDivisibility::PrimeImpossible => write!(f, "prime_impossible"),
        }
    }
}

/// True iff 3 | p⁴+p²+1, by exact arithmetic. Since p² ≡ 1 (mod 3) for any p
/// coprime to 3, this holds for the entire 12n+1 and 12n+5 classes; the
/// computation is kept exact so the fact is checked rather than assumed.
pub fn quartic_div3(p: &Natural) -> Result<bool, Error> {
    if (p % 3u32).is_zero() {
        return Err(Error::DivisibleByThree(p.clone()));
    }
    Ok((quartic(p) % 3u32).is_zero())
}

/// True iff 7 | p⁴+p²+1, by exact arithmetic.
pub fn quartic_div7_direct(p: &Natural) -> bool {
    (quartic(p) % 7u32).is_zero()
}

/// Predict 7 | p⁴+p²+1 from the residue data alone, for p = 12n + offset.
/// The quartic is divisible by 7 exactly when p ≡ 2, 3, 4, 5 (mod 7);
/// translating through p = 12n+1 or 12n+5 partitions n mod 7 into the three
/// verdicts. The PrimeImpossible rows are where 7 | p itself (n ≡ 4 gives
/// p = 12n+1 ≡ 0 (mod 7); n ≡ 6 gives p = 12n+5 ≡ 0 (mod 7)).
pub fn quartic_div7_predict(class: PrimeClass, n_mod_7: u8) -> SevenDivisibility {
    match (class, n_mod_7 % 7) {
        (PrimeClass::OneMod12, 2 | 3 | 5 | 6) => SevenDivisibility::Divides,
        (PrimeClass::OneMod12, 4) => SevenDivisibility::PrimeImpossible,
        (PrimeClass::OneMod12, _) => SevenDivisibility::DoesNotDivide,
        (PrimeClass::FiveMod12, 0 | 1 | 4 | 5) => SevenDivisibility::Divides,
        (PrimeClass::FiveMod12, 6) => SevenDivisibility::PrimeImpossible,
        (PrimeClass::FiveMod12, _) => SevenDivisibility::DoesNotDivide,
    }
}

/// The three-factor split of σ(p^(12λ+5)) for p ≡ 1 (mod 12):
/// σ = (p+1) · (p⁴+p²+1) · Σ_{γ=0..2λ} p^(6γ).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eq3Factors {
    pub linear: Natural,
    pub quartic: Natural,
    pub tail: Natural,
}

impl Eq3Factors {
    pub fn product(&self) -> Natural {
        &self.linear * &self.quartic * &self.tail
    }
}

/// Compute the three factors of σ(p^(12λ+5)). Their product equals
/// sigma_prime_power(p, 12λ+5) exactly; callers can and should verify.
pub fn sigma_factorization_eq3(p: &Natural, lambda: u32) -> Result<Eq3Factors, Error> {
    if residue(p, 12) != 1 {
        return Err(Error::NotOneMod12(p.clone()));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p.clone()));
    }
    let p6 = p.pow(6);
    let mut tail = Natural::one();
    let mut term = Natural::one();
    for _ in 0..2 * lambda {
        term *= &p6;
        tail += &term;
    }
    Ok(Eq3Factors {
        linear: p + 1u32,
        quartic: quartic(p),
        tail,
    })
}

/// One of the eight refined congruence forms: N = (12n+r)^(12λ+s) · C² where
/// C is Q, 3Q, or 21Q according to the forced divisibility flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinedForm {
    /// p mod 12, either 1 or 5.
    pub p_residue: u32,
    /// α mod 12, one of 1, 5, 9.
    pub alpha_residue: u32,
    /// 3 | N forced (p ≡ 5 or α ≡ 5 (mod 12)).
    pub three_divides: bool,
    /// 7 | N forced (α ≡ 5 with the quartic divisible by 7).
    pub seven_divides: bool,
    /// p = 12n + p_residue.
    pub n: Natural,
    /// α = 12λ + alpha_residue.
    pub lambda: u32,
}

impl RefinedForm {
    /// Position of this form in the canonical eight-row listing.
    pub fn index(&self) -> u8 {
        match (self.p_residue, self.alpha_residue, self.seven_divides) {
            (1, 1, _) => 1,
            (1, 9, _) => 2,
            (5, 1, _) => 3,
            (5, 9, _) => 4,
            (1, 5, false) => 5,
            (5, 5, false) => 6,
            (1, 5, true) => 7,
            (5, 5, true) => 8,
            _ => unreachable!("residues are validated at construction"),
        }
    }

    fn cofactor_shape(&self) -> &'static str {
        match (self.three_divides, self.seven_divides) {
            (false, _) => "Q^2",
            (true, false) => "(3Q)^2",
            (true, true) => "(21Q)^2",
        }
    }
}

impl fmt::Display for RefinedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "form {}: (12n+{})^(12*lambda+{}) * {} with n = {}, lambda = {}",
            self.index(),
            self.p_residue,
            self.alpha_residue,
            self.cofactor_shape(),
            self.n,
            self.lambda
        )
    }
}

/// Why an Euler form fails the refined classification under the perfection
/// hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExclusionReason {
    /// The residue pair forces 7 | p, contradicting primality.
    SpecialPrimeComposite,
    /// 3 | N is forced but 3 divides neither p nor Q.
    ThreeDivisibilityConflict,
    /// 7 | N is forced but 7 divides neither p nor Q.
    SevenDivisibilityConflict,
    /// 105 | N, impossible by Kühnel's theorem.
    KuhnelViolation,
    /// The number admits no Euler decomposition at all.
    NotEulerForm,
}

impl ExclusionReason {
    pub fn tag(self) -> &'static str {
        match self {
            ExclusionReason::SpecialPrimeComposite => "special_prime_composite",
            ExclusionReason::ThreeDivisibilityConflict => "three_divisibility_conflict",
            ExclusionReason::SevenDivisibilityConflict => "seven_divisibility_conflict",
            ExclusionReason::KuhnelViolation => "kuhnel_violation",
            ExclusionReason::NotEulerForm => "not_euler_form",
        }
    }
}

impl fmt::Display for ExclusionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExclusionReason::SpecialPrimeComposite => {
                write!(f, "special prime is divisible by 7 in this residue class")
            }
            ExclusionReason::ThreeDivisibilityConflict => {
                write!(f, "3 | N is forced but 3 divides neither p nor Q")
            }
            ExclusionReason::SevenDivisibilityConflict => {
                write!(f, "7 | N is forced but 7 divides neither p nor Q")
            }
            ExclusionReason::KuhnelViolation => write!(f, "105 | N, excluded by Kuhnel's theorem"),
            ExclusionReason::NotEulerForm => write!(f, "no Euler decomposition exists"),
        }
    }
}

/// Verdict of the refined classifier: one of the eight congruence forms, or
/// the first requirement the Euler form violates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormClass {
    Form(RefinedForm),
    Exclusion(ExclusionReason),
}

impl fmt::Display for FormClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormClass::Form(form) => write!(f, "{form}"),
            FormClass::Exclusion(reason) => write!(f, "excluded: {reason}"),
        }
    }
}

/// Place an Euler form into one of the eight refined congruence forms, or
/// report the first violated requirement. The requirement chain, under the
/// perfection hypothesis, in fixed order:
///
/// 1. p ≡ 5 (mod 12) or α ≡ 5 (mod 12) forces 3 | N, so 3 | Q is required.
/// 2. α ≡ 5 (mod 12) with the quartic factor divisible by 7 forces 7 | N,
///    so 7 | Q is required.
/// 3. The forms with both 3 | N and 7 | N additionally require 5 ∤ N
///    (Kühnel: 105 ∤ N).
pub fn refined_classify(e: &EulerForm) -> FormClass {
    let p_res = residue(e.special_prime(), 12);
    debug_assert!(p_res == 1 || p_res == 5, "prime 1 (mod 4) other than 3");
    let alpha_res = e.exponent() % 12;
    debug_assert!(matches!(alpha_res, 1 | 5 | 9), "exponent is 1 (mod 4)");
    let n = (e.special_prime() - p_res) / 12u32;
    let lambda = (e.exponent() - alpha_res) / 12;

    let three_divides = p_res == 5 || alpha_res == 5;
    if three_divides && !(e.cofactor() % 3u32).is_zero() {
        return FormClass::Exclusion(ExclusionReason::ThreeDivisibilityConflict);
    }

    let mut seven_divides = false;
    if alpha_res == 5 {
        let class = if p_res == 1 {
            PrimeClass::OneMod12
        } else {
            PrimeClass::FiveMod12
        };
        match quartic_div7_predict(class, residue(&n, 7) as u8) {
            SevenDivisibility::Divides => {
                if !(e.cofactor() % 7u32).is_zero() {
                    return FormClass::Exclusion(ExclusionReason::SevenDivisibilityConflict);
                }
                seven_divides = true;
            }
            SevenDivisibility::PrimeImpossible => {
                // Unreachable from a validated EulerForm; kept for totality.
                return FormClass::Exclusion(ExclusionReason::SpecialPrimeComposite);
            }
            SevenDivisibility::DoesNotDivide => {}
        }
    }

    if seven_divides {
        let five_divides_n =
            residue(e.special_prime(), 5) == 0 || (e.cofactor() % 5u32).is_zero();
        if five_divides_n {
            return FormClass::Exclusion(ExclusionReason::KuhnelViolation);
        }
    }

    FormClass::Form(RefinedForm {
        p_residue: p_res,
        alpha_residue: alpha_res,
        three_divides,
        seven_divides,
        n,
        lambda,
    })
}

/// Kühnel's filter: true iff 105 ∤ N, i.e. 3, 5, 7 do not all appear in the
/// factorization.
pub fn kuhnel_check(f: &Factorization) -> bool {
    let divides = |m: u32| f.exponent_of(&Natural::from(m)) >= 1;
    !(divides(3) && divides(5) && divides(7))
}
