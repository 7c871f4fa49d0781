//! End-to-end acceptance checks, one test per shipping criterion. Every test
//! prints a single PASS/FAIL line naming the criterion; failures also fail
//! the test run. Tolerances (case counts, bounds, time limits) are asserted,
//! not just reported.

use std::time::Instant;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use opn_core::lemmas::{self, LemmaBounds};
use opn_core::{
    factorize, scan_range, sigma, verify_even_perfect, Natural, Parity, Prefilter, ScanConfig,
    ScanRecord, Verdict,
};

fn nat(n: u64) -> Natural {
    Natural::from(n)
}

fn criterion(index: u32, label: &str, ok: bool, detail: &str) {
    let status = if ok { "PASS" } else { "FAIL" };
    println!("{status} criterion {index:02} ({label}): {detail}");
    assert!(ok, "criterion {index:02} ({label}): {detail}");
}

/// Independent oracle: enumerate divisor pairs directly, no factorization.
fn sigma_naive(n: u64) -> u64 {
    let mut sum = 0u64;
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            sum += d;
            let q = n / d;
            if q != d {
                sum += q;
            }
        }
        d += 1;
    }
    sum
}

fn perfect_hits(cfg: &ScanConfig) -> (Vec<Natural>, opn_core::ScanSummary, Vec<ScanRecord>) {
    let mut records = Vec::new();
    let summary = scan_range(cfg, |r| records.push(r.clone())).unwrap();
    let hits = records
        .iter()
        .filter(|r| r.verdict == Verdict::Perfect)
        .map(|r| r.n.clone())
        .collect();
    (hits, summary, records)
}

#[test]
fn criterion_01_divisor_sum_oracle() {
    let started = Instant::now();
    let mut mismatches = 0u64;
    for n in 1u64..=100_000 {
        let via_factorization = sigma(&factorize(&nat(n)).unwrap());
        if via_factorization != nat(sigma_naive(n)) {
            mismatches += 1;
        }
    }
    let elapsed = started.elapsed();
    let ok = mismatches == 0 && elapsed.as_secs() < 30;
    criterion(
        1,
        "divisor-sum oracle",
        ok,
        &format!("100000 values, {mismatches} mismatches, {:.2?}", elapsed),
    );
}

#[test]
fn criterion_02_multiplicativity() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut failures = 0u64;
    let pairs = 10_000u32;
    for _ in 0..pairs {
        let (a, b) = loop {
            let a = rng.gen_range(1u64..=1_000_000);
            let b = rng.gen_range(1u64..=1_000_000);
            if a.gcd(&b) == 1 {
                break (a, b);
            }
        };
        let product = sigma(&factorize(&(nat(a) * nat(b))).unwrap());
        let split = sigma(&factorize(&nat(a)).unwrap()) * sigma(&factorize(&nat(b)).unwrap());
        if product != split {
            failures += 1;
        }
    }
    criterion(
        2,
        "sigma multiplicativity",
        failures == 0,
        &format!("{pairs} random coprime pairs below 10^12, {failures} failures"),
    );
}

#[test]
fn criterion_03_prime_power_divisibility() {
    let report = lemmas::sigma_prime_power_divisibility(&LemmaBounds {
        prime_bound: 10_000,
        alpha_bound: 13,
        ..LemmaBounds::default()
    });
    // 1229 primes below 10^4, odd exponents 1, 3, 5, 7, 9, 11, 13
    let ok = report.passed() && report.cases == 1_229 * 7;
    criterion(
        3,
        "(p+1) divides sigma(p^alpha)",
        ok,
        &format!("{} cases, {} failures", report.cases, report.failures),
    );
}

#[test]
fn criterion_04_quartic_mod_3() {
    let report = lemmas::quartic_mod3(&LemmaBounds {
        prime_bound: 100_000,
        ..LemmaBounds::default()
    });
    let ok = report.passed() && report.cases > 4_000;
    criterion(
        4,
        "3 divides p^4 + p^2 + 1",
        ok,
        &format!(
            "{} primes to 10^5 in both residue classes, {} failures",
            report.cases, report.failures
        ),
    );
}

#[test]
fn criterion_05_mod_7_table() {
    let report = lemmas::quartic_mod7_agreement(&LemmaBounds {
        prime_bound: 100_000,
        ..LemmaBounds::default()
    });
    let ok = report.passed() && report.cases > 4_000;
    criterion(
        5,
        "mod-7 prediction table",
        ok,
        &format!(
            "{} primes to 10^5, prediction vs exact division, {} failures",
            report.cases, report.failures
        ),
    );
}

#[test]
fn criterion_06_eq3_identity() {
    let started = Instant::now();
    let report = lemmas::eq3_identity(&LemmaBounds {
        prime_bound: 1_000,
        ..LemmaBounds::default()
    });
    let elapsed = started.elapsed();
    // 36 primes = 1 (mod 12) below 1000, lambda 0..=2
    let ok = report.passed() && report.cases == 36 * 3 && elapsed.as_secs() < 10;
    criterion(
        6,
        "three-factor sigma identity",
        ok,
        &format!(
            "{} cases, {} failures, {:.2?}",
            report.cases, report.failures, elapsed
        ),
    );
}

#[test]
fn criterion_07_touchard_agreement() {
    let bounds = LemmaBounds {
        prime_bound: 10_000,
        alpha_bound: 13,
        touchard_samples: 100_000,
        seed: 1,
    };
    let consistency = lemmas::touchard_consistency(&bounds);
    let soundness = lemmas::touchard_exclusion_soundness(&bounds);
    let ok = consistency.passed() && soundness.passed() && soundness.cases == 100_000;
    criterion(
        7,
        "Touchard class agreement",
        ok,
        &format!(
            "{} sampled forms: {} agreement failures, {} soundness failures",
            soundness.cases, consistency.failures, soundness.failures
        ),
    );
}

#[test]
fn criterion_08_scan_ground_truth() {
    let started = Instant::now();
    let expected: Vec<Natural> = [6u64, 28, 496, 8128].iter().map(|&n| nat(n)).collect();

    let mut baseline: Option<(Vec<Natural>, u64, u64)> = None;
    let mut ok = true;
    for workers in [1usize, 2, 8] {
        let mut cfg = ScanConfig::new(nat(2), nat(10_000_000));
        cfg.worker_count = workers;
        let (hits, summary, records) = perfect_hits(&cfg);
        ok &= hits == expected;
        ok &= records.iter().all(verify_even_perfect);
        match &baseline {
            None => baseline = Some((hits, summary.scanned, summary.skipped)),
            Some((h, scanned, skipped)) => {
                ok &= hits == *h && summary.scanned == *scanned && summary.skipped == *skipped;
            }
        }
    }

    let mut odd = ScanConfig::new(nat(3), nat(10_000_000));
    odd.parity = Parity::OddOnly;
    let (odd_hits, _, _) = perfect_hits(&odd);
    ok &= odd_hits.is_empty();

    let elapsed = started.elapsed();
    ok &= elapsed.as_secs() < 60;
    criterion(
        8,
        "scan ground truth to 10^7",
        ok,
        &format!(
            "hits {{6, 28, 496, 8128}} at 1, 2, 8 workers; odd-only hits 0; {:.2?} total",
            elapsed
        ),
    );
}

#[test]
#[ignore = "extended sweep past the required bound; run with --ignored"]
fn criterion_08_scan_ground_truth_extended() {
    let expected: Vec<Natural> = [6u64, 28, 496, 8128, 33_550_336]
        .iter()
        .map(|&n| nat(n))
        .collect();
    let cfg = ScanConfig::new(nat(2), nat(100_000_000));
    let (hits, _, records) = perfect_hits(&cfg);
    let ok = hits == expected && records.iter().all(verify_even_perfect);
    criterion(
        8,
        "scan ground truth to 10^8",
        ok,
        "hits {6, 28, 496, 8128, 33550336}",
    );
}

#[test]
fn criterion_09_prefilter_equivalence() {
    let lo = 3u64;
    let hi = 1_000_000u64;

    let mut plain = ScanConfig::new(nat(lo), nat(hi));
    plain.parity = Parity::OddOnly;
    let (plain_hits, _, _) = perfect_hits(&plain);

    let mut filtered = plain.clone();
    filtered.prefilter = Prefilter::Touchard;
    let (filtered_hits, summary, _) = perfect_hits(&filtered);

    // the residues an odd perfect number can occupy: 1, 13, 25 (mod 36)
    // from 12k+1, plus 9 (mod 36)
    let passing = (lo..hi)
        .filter(|n| n % 2 == 1 && (n % 12 == 1 || n % 36 == 9))
        .count() as u64;
    let expected_skipped = (hi - lo) - passing;

    let ok = plain_hits == filtered_hits
        && filtered_hits.is_empty()
        && summary.skipped == expected_skipped
        && summary.scanned == passing;
    criterion(
        9,
        "prefilter equivalence",
        ok,
        &format!(
            "identical hit sets; skipped {} = expected {expected_skipped}",
            summary.skipped
        ),
    );
}

#[test]
fn criterion_10_kuhnel_filter() {
    let report = lemmas::kuhnel_filter(&LemmaBounds {
        prime_bound: 500,
        alpha_bound: 17,
        ..LemmaBounds::default()
    });
    // primes = 1 (mod 4) up to 500, alpha in {5, 17}, odd multiples of 21
    // up to 1000
    let ok = report.passed() && report.cases > 1_000;
    criterion(
        10,
        "Kuhnel 105-divisibility filter",
        ok,
        &format!("{} synthesized forms, {} failures", report.cases, report.failures),
    );
}
