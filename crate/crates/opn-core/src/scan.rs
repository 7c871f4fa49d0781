//! Parallel range scan for perfect numbers.
//!
//! The scan partitions [lo, hi) into fixed-size segments and computes σ for
//! a whole segment at once with an additive divisor-pair sieve: every pair
//! d ≤ √m, q = m/d contributes d + q to σ(m) (d alone when d = q), so a
//! segment costs O(len·log √hi) instead of a factorization per candidate. An
//! odd-only variant walks only odd divisors against odd candidates.
//!
//! Workers claim segment indices from a shared atomic counter and send
//! finished segments over a channel; the caller's thread reorders them by
//! index, so emitted records arrive in ascending n regardless of worker
//! count or scheduling. Counts are summed per segment, making the whole
//! summary deterministic.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::mpsc;
use std::thread;
use std::time::Instant;

use num_traits::{ToPrimitive, Zero};
use serde_json::json;

use crate::error::Error;
use crate::forms::{touchard_class_direct, TouchardClass};
use crate::{arith, Natural};

/// Hard ceiling on scan bounds: keeps every σ accumulation comfortably inside
/// u64 and documents that this is a desk-scale tool.
pub const MAX_SCAN_BOUND: u64 = 1_000_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    All,
    OddOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prefilter {
    None,
    /// Skip odd candidates that are neither 12k+1 nor 36k+9; even candidates
    /// always pass (the residue theorem constrains odd perfect numbers only).
    Touchard,
}

#[derive(Debug, Clone)]
pub struct ScanConfig {
    /// Inclusive lower bound, at least 1.
    pub lo: Natural,
    /// Exclusive upper bound, at most [`MAX_SCAN_BOUND`].
    pub hi: Natural,
    pub parity: Parity,
    pub prefilter: Prefilter,
    pub segment_size: u64,
    pub worker_count: usize,
    /// When set, also emit NotPerfect records for every candidate with
    /// |σ(n) − 2n| ≤ threshold. Diagnostic; off by default.
    pub near_miss_threshold: Option<u64>,
}

impl ScanConfig {
    pub fn new(lo: Natural, hi: Natural) -> ScanConfig {
        ScanConfig {
            lo,
            hi,
            parity: Parity::All,
            prefilter: Prefilter::None,
            segment_size: 1 << 16,
            worker_count: thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
            near_miss_threshold: None,
        }
    }

    fn validated_bounds(&self) -> Result<(u64, u64), Error> {
        if self.lo.is_zero() {
            return Err(Error::InvalidScanConfig(
                "range must start at 1 or above".into(),
            ));
        }
        if self.lo >= self.hi {
            return Err(Error::InvalidScanConfig(format!(
                "empty range [{}, {})",
                self.lo, self.hi
            )));
        }
        if self.segment_size == 0 {
            return Err(Error::InvalidScanConfig("segment_size must be >= 1".into()));
        }
        if self.worker_count == 0 {
            return Err(Error::InvalidScanConfig("worker_count must be >= 1".into()));
        }
        let hi = self
            .hi
            .to_u64()
            .filter(|h| *h <= MAX_SCAN_BOUND)
            .ok_or_else(|| {
                Error::InvalidScanConfig(format!(
                    "upper bound {} exceeds the supported maximum {MAX_SCAN_BOUND}",
                    self.hi
                ))
            })?;
        let lo = self.lo.to_u64().expect("lo < hi <= u64 max");
        Ok((lo, hi))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Perfect,
    NotPerfect,
}

impl Verdict {
    pub fn tag(self) -> &'static str {
        match self {
            Verdict::Perfect => "perfect",
            Verdict::NotPerfect => "not_perfect",
        }
    }
}

/// One emitted scan result: a perfect number, or a near miss when that
/// reporting is switched on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanRecord {
    pub n: Natural,
    pub sigma_n: Natural,
    pub verdict: Verdict,
    pub touchard: TouchardClass,
}

impl ScanRecord {
    /// One JSON object per line; all numbers as decimal strings.
    pub fn to_json_line(&self) -> String {
        json!({
            "n": self.n.to_string(),
            "sigma": self.sigma_n.to_string(),
            "verdict": self.verdict.tag(),
            "touchard_class": self.touchard.tag(),
        })
        .to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanSummary {
    /// Candidates evaluated against σ(n) = 2n.
    pub scanned: u64,
    /// Candidates in [lo, hi) skipped by parity or prefilter; scanned +
    /// skipped always equals hi − lo.
    pub skipped: u64,
    /// Perfect numbers found.
    pub hits: u64,
    pub elapsed_ms: u64,
    /// Highest fully-scanned bound; a follow-up scan can start here.
    pub resume_from: Natural,
}

impl ScanSummary {
    pub fn to_json_line(&self) -> String {
        json!({
            "scanned": self.scanned.to_string(),
            "skipped": self.skipped.to_string(),
            "hits": self.hits.to_string(),
            "elapsed_ms": self.elapsed_ms.to_string(),
            "resume_from": self.resume_from.to_string(),
        })
        .to_string()
    }
}

struct SegmentOutcome {
    index: u64,
    records: Vec<ScanRecord>,
    scanned: u64,
    skipped: u64,
}

/// Scan [lo, hi) for perfect numbers. `emit` receives each record in
/// ascending n; the summary reports totals. The perfect set found is
/// independent of parity mode (beyond its restriction), prefilter, worker
/// count, and segment size.
pub fn scan_range<F>(cfg: &ScanConfig, mut emit: F) -> Result<ScanSummary, Error>
where
    F: FnMut(&ScanRecord),
{
    let (lo, hi) = cfg.validated_bounds()?;
    let started = Instant::now();
    let total_segments = (hi - lo).div_ceil(cfg.segment_size);
    let next_segment = AtomicU64::new(0);
    let (tx, rx) = mpsc::channel::<SegmentOutcome>();

    let mut scanned = 0u64;
    let mut skipped = 0u64;
    let mut hits = 0u64;

    thread::scope(|scope| {
        for _ in 0..cfg.worker_count {
            let tx = tx.clone();
            let next_segment = &next_segment;
            scope.spawn(move || {
                let mut sums = Vec::new();
                loop {
                    let index = next_segment.fetch_add(1, Ordering::Relaxed);
                    if index >= total_segments {
                        break;
                    }
                    let s = lo + index * cfg.segment_size;
                    let e = (s + cfg.segment_size).min(hi);
                    let outcome = scan_segment(cfg, index, s, e, &mut sums);
                    if tx.send(outcome).is_err() {
                        break;
                    }
                }
            });
        }
        drop(tx);

        let mut pending: BTreeMap<u64, SegmentOutcome> = BTreeMap::new();
        let mut next_emit = 0u64;
        for _ in 0..total_segments {
            let outcome = rx.recv().expect("worker exited without sending its segment");
            pending.insert(outcome.index, outcome);
            while let Some(ready) = pending.remove(&next_emit) {
                for record in &ready.records {
                    if record.verdict == Verdict::Perfect {
                        hits += 1;
                    }
                    emit(record);
                }
                scanned += ready.scanned;
                skipped += ready.skipped;
                next_emit += 1;
            }
        }
    });

    debug_assert_eq!(scanned + skipped, hi - lo);
    Ok(ScanSummary {
        scanned,
        skipped,
        hits,
        elapsed_ms: started.elapsed().as_millis() as u64,
        resume_from: cfg.hi.clone(),
    })
}

fn passes_prefilter(prefilter: Prefilter, n: u64) -> bool {
    match prefilter {
        Prefilter::None => true,
        Prefilter::Touchard => n.is_multiple_of(2) || n % 12 == 1 || n % 36 == 9,
    }
}

fn scan_segment(
    cfg: &ScanConfig,
    index: u64,
    s: u64,
    e: u64,
    sums: &mut Vec<u64>,
) -> SegmentOutcome {
    let mut records = Vec::new();
    let mut scanned = 0u64;
    let mut skipped = 0u64;
    match cfg.parity {
        Parity::All => {
            sieve_all(s, e, sums);
            for (i, &sigma) in sums.iter().enumerate() {
                let n = s + i as u64;
                if !passes_prefilter(cfg.prefilter, n) {
                    skipped += 1;
                    continue;
                }
                scanned += 1;
                judge(n, sigma, cfg.near_miss_threshold, &mut records);
            }
        }
        Parity::OddOnly => {
            let s_odd = s | 1;
            sieve_odd(s, e, sums);
            // evens in the segment are parity skips
            skipped += (e - s) - sums.len() as u64;
            for (i, &sigma) in sums.iter().enumerate() {
                let n = s_odd + 2 * i as u64;
                if !passes_prefilter(cfg.prefilter, n) {
                    skipped += 1;
                    continue;
                }
                scanned += 1;
                judge(n, sigma, cfg.near_miss_threshold, &mut records);
            }
        }
    }
    SegmentOutcome {
        index,
        records,
        scanned,
        skipped,
    }
}

fn judge(n: u64, sigma: u64, near_miss: Option<u64>, records: &mut Vec<ScanRecord>) {
    let verdict = if sigma == 2 * n {
        Verdict::Perfect
    } else if near_miss.is_some_and(|t| sigma.abs_diff(2 * n) <= t) {
        Verdict::NotPerfect
    } else {
        return;
    };
    let n = Natural::from(n);
    records.push(ScanRecord {
        touchard: touchard_class_direct(&n),
        sigma_n: Natural::from(sigma),
        verdict,
        n,
    });
}

/// Accumulate σ(m) for every m in [s, e): for each divisor d up to √(e−1),
/// walk the multiples m = d·q with q ≥ d, adding d + q (d alone when q = d).
fn sieve_all(s: u64, e: u64, sums: &mut Vec<u64>) {
    sums.clear();
    sums.resize((e - s) as usize, 0);
    let limit = (e - 1).isqrt();
    for d in 1..=limit {
        let mut q = s.div_ceil(d).max(d);
        let mut m = d * q;
        while m < e {
            sums[(m - s) as usize] += if q == d { d } else { d + q };
            m += d;
            q += 1;
        }
    }
}

/// Odd-candidates variant: odd divisors d against odd cofactors q, stepping
/// multiples by 2d. Slot i holds σ(s_odd + 2i).
fn sieve_odd(s: u64, e: u64, sums: &mut Vec<u64>) {
    let s_odd = s | 1;
    let count = if e > s_odd { (e - s_odd).div_ceil(2) } else { 0 };
    sums.clear();
    sums.resize(count as usize, 0);
    if count == 0 {
        return;
    }
    let limit = (e - 1).isqrt();
    let mut d = 1u64;
    while d <= limit {
        let mut q = s.div_ceil(d).max(d);
        if q.is_multiple_of(2) {
            q += 1;
        }
        let mut m = d * q;
        while m < e {
            sums[((m - s_odd) / 2) as usize] += if q == d { d } else { d + q };
            m += 2 * d;
            q += 2;
        }
        d += 2;
    }
}

/// Shape check for an even perfect hit: n = 2^(k−1)·(2^k − 1) with the odd
/// part a Mersenne prime. Any even hit failing this would be an anomaly worth
/// flagging, since all known even perfect numbers have this shape.
pub fn verify_even_perfect(record: &ScanRecord) -> bool {
    if record.verdict != Verdict::Perfect {
        return false;
    }
    let tz = match record.n.trailing_zeros() {
        Some(tz) if tz > 0 => tz,
        _ => return false,
    };
    let odd_part = &record.n >> tz;
    let mersenne = (Natural::from(1u32) << (tz + 1)) - 1u32;
    odd_part == mersenne && arith::is_prime(&odd_part)
}
