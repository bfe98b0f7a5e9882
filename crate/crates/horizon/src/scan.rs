//! Prime scans split across worker threads.

use std::thread;

use euler_horizon_core::local_zeros::{scan_range, LocalZeroError, ScanPartial, ScanSummary};
use euler_horizon_core::{BivariateRational, Slope};

/// Same result as the sequential scan; sub-ranges are merged order-independently.
pub fn parallel_scan(
    w: &BivariateRational,
    beta: Slope,
    bound: u64,
    margin_tol: f64,
) -> Result<ScanSummary, LocalZeroError> {
    if bound < 100 {
        return Err(LocalZeroError::BoundTooSmall(bound));
    }
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(16) as u64;
    // later ranges hold higher-degree local factors, so cut them finer
    let chunks = workers * 4;
    let width = (bound + 1).div_ceil(chunks).max(64);
    let ranges: Vec<(u64, u64)> =
        (0..chunks).map(|i| (2.max(i * width), ((i + 1) * width).min(bound + 1))).filter(|(lo, hi)| lo < hi).collect();
    let partial = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers as usize)
            .map(|t| {
                let mine: Vec<(u64, u64)> = ranges.iter().copied().skip(t).step_by(workers as usize).collect();
                scope.spawn(move || {
                    mine.into_iter()
                        .map(|(lo, hi)| scan_range(w, beta, lo, hi, margin_tol))
                        .fold(ScanPartial::default(), ScanPartial::merge)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scan worker panicked"))
            .fold(ScanPartial::default(), ScanPartial::merge)
    });
    partial.finish(bound, margin_tol)
}
