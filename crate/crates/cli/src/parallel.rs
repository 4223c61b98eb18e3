//! Thread-partitioned drivers for the core scans and samplers.
//!
//! Every driver splits its index range into `workers` contiguous chunks and
//! merges with an order-insensitive reduction, so results are bit-identical
//! for any worker count.

use std::ops::Range;
use std::thread;

use ctxbell_core::hv::{
    bound_from_partial, chain_check_range, ChainPartial, Evaluator, ModelClass, Objective,
    ScanPartial,
};
use ctxbell_core::inequality::{sweep_point, SweepRow, Variant};
use ctxbell_core::sequence::{ShotSampler, Tally};
use ctxbell_core::{BoundResult, HvModel, Result, Visibility};

/// Splits `0..n` into at most `workers` contiguous, non-empty ranges.
pub fn partition(n: u64, workers: usize) -> Vec<Range<u64>> {
    let workers = workers.max(1) as u64;
    let chunk = n.div_ceil(workers).max(1);
    (0..workers)
        .map(|w| (w * chunk).min(n)..((w + 1) * chunk).min(n))
        .filter(|r| !r.is_empty())
        .collect()
}

fn u32_ranges(n: u32, workers: usize) -> impl Iterator<Item = Range<u32>> {
    partition(u64::from(n), workers)
        .into_iter()
        .map(|r| r.start as u32..r.end as u32)
}

/// Exhaustive bound over `class` using `workers` threads.
pub fn scan_bound(objective: Objective, class: ModelClass, workers: usize) -> BoundResult<HvModel> {
    let ev = Evaluator::new(objective, class);
    let merged = thread::scope(|s| {
        let handles: Vec<_> = u32_ranges(class.model_count(), workers)
            .map(|r| {
                let ev = &ev;
                s.spawn(move || ev.scan(r))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scan worker panicked"))
            .fold(ScanPartial::empty(), ScanPartial::merge)
    });
    bound_from_partial(&ev, merged)
}

/// Chain inequality check over every model of `class`.
pub fn chain_check(class: ModelClass, workers: usize) -> ChainPartial {
    thread::scope(|s| {
        let handles: Vec<_> = u32_ranges(class.model_count(), workers)
            .map(|r| s.spawn(move || chain_check_range(class, r)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("chain worker panicked"))
            .fold(
                ChainPartial {
                    checked: 0,
                    failures: 0,
                    first_failure: None,
                },
                ChainPartial::merge,
            )
    })
}

/// Outcome counts of `shots` shots from stream `(seed, stream)`.
pub fn tally(sampler: &ShotSampler, seed: u64, stream: u64, shots: u64, workers: usize) -> Tally {
    thread::scope(|s| {
        let handles: Vec<_> = partition(shots, workers)
            .into_iter()
            .map(|r| s.spawn(move || sampler.tally(seed, stream, r)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sampling worker panicked"))
            .fold(Tally::new(sampler.spec()), |mut acc, t| {
                acc.merge(&t);
                acc
            })
    })
}

/// Sweep rows in grid order.
pub fn sweep(grid: &[Visibility], variant: Variant, workers: usize) -> Result<Vec<SweepRow>> {
    let chunks = partition(grid.len() as u64, workers);
    let parts: Vec<Result<Vec<SweepRow>>> = thread::scope(|s| {
        let handles: Vec<_> = chunks
            .into_iter()
            .map(|r| {
                let pts = &grid[r.start as usize..r.end as usize];
                s.spawn(move || pts.iter().map(|&v| sweep_point(v, variant)).collect())
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });
    let mut rows = Vec::with_capacity(grid.len());
    for p in parts {
        rows.extend(p?);
    }
    Ok(rows)
}
