//! Exact integer arithmetic: primality, factorization, and the divisor-sum
//! function σ.
//!
//! σ is multiplicative over coprime arguments, so σ(N) is computed as the
//! product of geometric sums 1 + p + ... + p^e over the canonical prime-power
//! decomposition of N. All values are arbitrary-precision; nothing here gives
//! a probabilistic answer:
//!
//! - below 2^64, primality is a deterministic Miller-Rabin over a fixed
//!   witness set proven exact for the whole range;
//! - at and above 2^64, primality falls back to trial division up to √n,
//!   which is exact but slow (only reachable via explicit user input).
//!
//! Factorization is trial division by 2 and odd candidates, with a Brent-rho
//! second stage once the remaining cofactor fits in a machine word.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::Error;
use crate::Natural;

/// Witness set for which Miller-Rabin is deterministic over all n < 2^64
/// (Sinclair's seven-base set).
const MR_WITNESSES: [u64; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];

const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Trial division handles factors up to this bound; anything left above it
/// goes to the rho splitter.
const TRIAL_LIMIT: u64 = 1 << 16;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality for the full u64 range.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_WITNESSES {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// True iff `n` is prime. Deterministic and exact for every input: fixed-base
/// Miller-Rabin below 2^64, trial division to √n above it (slow, documented).
pub fn is_prime(n: &Natural) -> bool {
    match n.to_u64() {
        Some(v) => is_prime_u64(v),
        None => trial_division_prime(n),
    }
}

fn trial_division_prime(n: &Natural) -> bool {
    if n.is_even() {
        return n == &Natural::from(2u32);
    }
    if n < &Natural::from(9u32) {
        return n > &Natural::one();
    }
    if (n % 3u32).is_zero() {
        return false;
    }
    // 6k±1 candidates: 5, 7, 11, 13, ...
    let mut d = Natural::from(5u32);
    let mut step = 2u32;
    loop {
        if &d * &d > *n {
            return true;
        }
        if (n % &d).is_zero() {
            return false;
        }
        d += step;
        step = 6 - step;
    }
}

/// Canonical prime-power decomposition: primes strictly increasing, exponents
/// ≥ 1, product reconstructing the original value. 1 is the empty product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    entries: Vec<(Natural, u32)>,
}

impl Factorization {
    /// Build from explicit entries, validating every invariant: strictly
    /// increasing primes, positive exponents, primality of each base.
    pub fn new(entries: Vec<(Natural, u32)>) -> Result<Self, Error> {
        for window in entries.windows(2) {
            if window[0].0 >= window[1].0 {
                return Err(Error::InvalidFactorization(
                    "primes must be strictly increasing".into(),
                ));
            }
        }
        for (p, e) in &entries {
            if *e == 0 {
                return Err(Error::InvalidFactorization(format!(
                    "exponent of {p} must be >= 1"
                )));
            }
            if !is_prime(p) {
                return Err(Error::InvalidFactorization(format!("{p} is not prime")));
            }
        }
        Ok(Factorization { entries })
    }

    /// Entries were produced by an algorithm that guarantees the invariants.
    pub(crate) fn from_trusted(entries: Vec<(Natural, u32)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|(p, e)| *e >= 1 && is_prime(p)));
        Factorization { entries }
    }

    pub fn entries(&self) -> &[(Natural, u32)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Multiply the decomposition back out.
    pub fn value(&self) -> Natural {
        self.entries
            .iter()
            .fold(Natural::one(), |acc, (p, e)| acc * p.pow(*e))
    }

    /// Exponent of `p` in the decomposition; 0 when `p` does not divide the
    /// value.
    pub fn exponent_of(&self, p: &Natural) -> u32 {
        self.entries
            .iter()
            .find(|(q, _)| q == p)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (p, e) in &self.entries {
            if !first {
                write!(f, " * ")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Factor `n ≥ 1` into its canonical decomposition. Errors on n = 0; 1 maps
/// to the empty product.
pub fn factorize(n: &Natural) -> Result<Factorization, Error> {
    if n.is_zero() {
        return Err(Error::ZeroFactorization);
    }
    let mut entries: Vec<(Natural, u32)> = Vec::new();
    let mut m = n.clone();

    let tz = m.trailing_zeros().unwrap_or(0);
    if tz > 0 {
        entries.push((
            Natural::from(2u32),
            u32::try_from(tz).expect("power of two exceeds u32 exponent range"),
        ));
        m >>= tz;
    }

    let mut d: u64 = 3;
    loop {
        if m.is_one() {
            break;
        }
        if let Some(v) = m.to_u64() {
            factor_u64_from(v, d, &mut entries);
            break;
        }
        // m exceeds u64 here, so d*d <= m is automatic while d < 2^32.
        if d >= (1 << 32) {
            let d_big = Natural::from(d);
            if &d_big * &d_big > m {
                entries.push((m, 1));
                break;
            }
        }
        if (&m % d).is_zero() {
            let mut e = 0u32;
            while (&m % d).is_zero() {
                m /= d;
                e += 1;
            }
            entries.push((Natural::from(d), e));
        }
        d += 2;
    }

    let result = Factorization::from_trusted(entries);
    debug_assert_eq!(&result.value(), n);
    Ok(result)
}

/// Factor an odd `v` whose prime factors are all ≥ `d`, appending entries in
/// increasing prime order.
fn factor_u64_from(mut v: u64, mut d: u64, out: &mut Vec<(Natural, u32)>) {
    debug_assert!(d % 2 == 1 && d >= 3);
    while d <= TRIAL_LIMIT && d * d <= v {
        if v.is_multiple_of(d) {
            let mut e = 0u32;
            while v.is_multiple_of(d) {
                v /= d;
                e += 1;
            }
            out.push((Natural::from(d), e));
        }
        d += 2;
    }
    if v == 1 {
        return;
    }
    if (d as u128) * (d as u128) > v as u128 || is_prime_u64(v) {
        out.push((Natural::from(v), 1));
        return;
    }
    // Remaining cofactor is composite with every factor above TRIAL_LIMIT.
    let mut primes = BTreeMap::new();
    split_composite(v, &mut primes);
    out.extend(primes.into_iter().map(|(p, e)| (Natural::from(p), e)));
}

fn split_composite(n: u64, out: &mut BTreeMap<u64, u32>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        *out.entry(n).or_insert(0) += 1;
        return;
    }
    let mut c = 1;
    let divisor = loop {
        let g = brent_rho(n, c);
        if g != 1 && g != n {
            break g;
        }
        c += 1;
    };
    split_composite(divisor, out);
    split_composite(n / divisor, out);
}

/// Brent's variant of Pollard's rho with polynomial x² + c. Deterministic for
/// a given c; callers retry with the next c on failure.
fn brent_rho(n: u64, c: u64) -> u64 {
    const BATCH: u64 = 128;
    let f = |x: u64| ((x as u128 * x as u128 + c as u128) % n as u128) as u64;
    let mut y = 2u64;
    let mut r = 1u64;
    let mut q = 1u64;
    let mut g = 1u64;
    let mut x = y;
    let mut ys = y;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd_u64(q, n);
            k += BATCH;
        }
        r <<= 1;
    }
    if g == n {
        // Backtrack one step at a time from the last checkpoint.
        loop {
            ys = f(ys);
            g = gcd_u64(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    g
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

/// σ of a prime power: the geometric sum 1 + p + ... + p^alpha, exact at any
/// size. Errors if `p` is not prime or `alpha` is 0.
pub fn sigma_prime_power(p: &Natural, alpha: u32) -> Result<Natural, Error> {
    if alpha == 0 {
        return Err(Error::ZeroExponent);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p.clone()));
    }
    Ok(geometric_sum(p, alpha))
}

/// 1 + p + ... + p^alpha without revalidating primality; the factorization
/// invariant already guarantees it.
pub(crate) fn geometric_sum(p: &Natural, alpha: u32) -> Natural {
    let mut acc = Natural::one();
    for _ in 0..alpha {
        acc = acc * p + 1u32;
    }
    acc
}

/// Sum of divisors via multiplicativity: the product of σ(p^e) over the
/// decomposition. σ of the empty product is 1.
pub fn sigma(f: &Factorization) -> Natural {
    f.entries()
        .iter()
        .fold(Natural::one(), |acc, (p, e)| acc * geometric_sum(p, *e))
}

/// True iff σ(n) = 2n. False for n = 0.
pub fn is_perfect(n: &Natural) -> bool {
    match factorize(n) {
        Ok(f) => sigma(&f) == n * 2u32,
        Err(_) => false,
    }
}
