//! Cross-module properties: randomized structure tests plus the range-scale
//! sweeps that are too heavy for the in-module unit tests.

use num_integer::Integer;
use proptest::prelude::*;

use opn_core::{
    euler_decompose, factorize, is_perfect, scan_range, sigma, touchard_class_direct,
    EulerDecomposition, EulerForm, Natural, Parity, Prefilter, ScanConfig, ScanRecord,
    TouchardClass, Verdict,
};

fn nat(n: u64) -> Natural {
    Natural::from(n)
}

fn collect(cfg: &ScanConfig) -> Vec<ScanRecord> {
    let mut records = Vec::new();
    scan_range(cfg, |r| records.push(r.clone())).unwrap();
    records
}

#[test]
fn reconstruction_holds_to_one_million() {
    for n in 1u64..=1_000_000 {
        let f = factorize(&nat(n)).unwrap();
        assert_eq!(f.value(), nat(n), "reconstruction failed at {n}");
    }
}

#[test]
fn sieve_agrees_with_sigma_to_one_hundred_thousand() {
    let mut cfg = ScanConfig::new(nat(2), nat(100_000));
    cfg.near_miss_threshold = Some(u64::MAX);
    let mut mismatches = 0u64;
    let mut seen = 0u64;
    scan_range(&cfg, |record| {
        seen += 1;
        let expected = sigma(&factorize(&record.n).unwrap());
        if record.sigma_n != expected {
            mismatches += 1;
        }
    })
    .unwrap();
    assert_eq!(seen, 99_998);
    assert_eq!(mismatches, 0);
}

#[test]
fn prefilter_never_rejects_accepted_classes() {
    // residue behavior is periodic mod 36; several full periods suffice
    for n in (1u64..=720).step_by(2) {
        let mut cfg = ScanConfig::new(nat(n), nat(n + 1));
        cfg.parity = Parity::OddOnly;
        cfg.prefilter = Prefilter::Touchard;
        cfg.worker_count = 1;
        let summary = scan_range(&cfg, |_| {}).unwrap();
        let accepted = !matches!(
            touchard_class_direct(&nat(n)),
            TouchardClass::Excluded { .. }
        );
        if accepted {
            assert_eq!(summary.scanned, 1, "prefilter rejected admissible {n}");
        }
        assert_eq!(summary.scanned == 1, accepted, "filter disagrees at {n}");
    }
}

#[test]
fn adjacent_scans_compose() {
    let whole = collect(&ScanConfig::new(nat(2), nat(10_000)));

    let first = ScanConfig::new(nat(2), nat(5_000));
    let summary_first = scan_range(&first, |_| {}).unwrap();
    let mut stitched = collect(&first);
    // resume from the bound the first summary reports
    let second = ScanConfig::new(summary_first.resume_from.clone(), nat(10_000));
    stitched.extend(collect(&second));

    assert_eq!(stitched, whole);
}

#[test]
fn even_perfect_numbers_have_mersenne_shape() {
    for k in [2u32, 3, 5, 7, 13] {
        let mersenne = (nat(1) << k) - 1u32;
        let n = (nat(1) << (k - 1)) * &mersenne;
        assert!(is_perfect(&n), "2^{}({}) should be perfect", k - 1, mersenne);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn factorize_round_trips(n in 1u64..1_000_000_000_000) {
        let f = factorize(&nat(n)).unwrap();
        prop_assert_eq!(f.value(), nat(n));
        for pair in f.entries().windows(2) {
            prop_assert!(pair[0].0 < pair[1].0);
        }
    }

    #[test]
    fn sigma_multiplicative_on_coprime_pairs(a in 1u64..1_000_000, b in 1u64..1_000_000) {
        prop_assume!(a.gcd(&b) == 1);
        let product = sigma(&factorize(&(nat(a) * nat(b))).unwrap());
        let split = sigma(&factorize(&nat(a)).unwrap()) * sigma(&factorize(&nat(b)).unwrap());
        prop_assert_eq!(product, split);
    }

    #[test]
    fn touchard_partition(n in 1u64..u64::MAX) {
        let n = nat(n);
        match touchard_class_direct(&n) {
            TouchardClass::OneMod12 { k } => {
                prop_assert_eq!(&n % 12u32, nat(1));
                prop_assert_eq!(k * 12u32 + 1u32, n);
            }
            TouchardClass::NineMod36 { k } => {
                prop_assert_eq!(&n % 36u32, nat(9));
                prop_assert_eq!(k * 36u32 + 9u32, n);
            }
            TouchardClass::Excluded { .. } => {
                prop_assert!(&n % 12u32 != nat(1) && &n % 36u32 != nat(9));
            }
        }
    }

    #[test]
    fn euler_decomposition_round_trips(
        p in prop::sample::select(vec![
            5u64, 13, 17, 29, 37, 41, 53, 61, 73, 89, 97, 101, 109, 113, 137, 149, 157, 173,
            181, 193, 197, 229, 233, 241,
        ]),
        alpha in prop::sample::select(vec![1u32, 5, 9, 13]),
        q_half in 0u64..500,
    ) {
        let q = 2 * q_half + 1;
        prop_assume!(q % p != 0);
        let e = EulerForm::new(nat(p), alpha, nat(q)).unwrap();
        let back = euler_decompose(&factorize(&e.value()).unwrap()).unwrap();
        prop_assert_eq!(back, EulerDecomposition::Form(e));
    }

    #[test]
    fn quartic_seven_divisibility_matches_residue(p in 1u64..10_000_000) {
        let direct = opn_core::quartic_div7_direct(&nat(p));
        let r = p % 7;
        let residue_says = (r.pow(4) + r.pow(2) + 1) % 7 == 0;
        prop_assert_eq!(direct, residue_says);
    }

    #[test]
    fn perfect_verdicts_match_is_perfect(lo in 1u64..20_000) {
        let mut cfg = ScanConfig::new(nat(lo), nat(lo + 64));
        cfg.worker_count = 2;
        cfg.segment_size = 17;
        let records = collect(&cfg);
        let expected: Vec<Natural> = (lo..lo + 64).filter(|&n| is_perfect(&nat(n))).map(nat).collect();
        let found: Vec<Natural> = records
            .iter()
            .filter(|r| r.verdict == Verdict::Perfect)
            .map(|r| r.n.clone())
            .collect();
        prop_assert_eq!(found, expected);
    }
}
