//! Small shared statistics helpers for trial batches.

/// Empirical CDF of recovery counts: one `(count, fraction)` point per
/// distinct count, with the fraction taken over all trials so censored
/// runs hold the curve below 1.
pub fn recovery_cdf(outcomes: &[Option<u64>]) -> Vec<(u64, f64)> {
    let total = outcomes.len() as f64;
    let mut done: Vec<u64> = outcomes.iter().flatten().copied().collect();
    done.sort_unstable();
    let mut cdf = Vec::new();
    let mut seen = 0usize;
    let mut i = 0;
    while i < done.len() {
        let value = done[i];
        while i < done.len() && done[i] == value {
            seen += 1;
            i += 1;
        }
        cdf.push((value, seen as f64 / total));
    }
    cdf
}

/// Mean and sample standard deviation of the finished trials.
pub fn mean_std(outcomes: &[Option<u64>]) -> (Option<f64>, Option<f64>) {
    let finished: Vec<f64> = outcomes.iter().flatten().map(|&r| r as f64).collect();
    if finished.is_empty() {
        return (None, None);
    }
    let mean = finished.iter().sum::<f64>() / finished.len() as f64;
    let std = if finished.len() < 2 {
        0.0
    } else {
        (finished.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (finished.len() - 1) as f64)
            .sqrt()
    };
    (Some(mean), Some(std))
}

/// Evaluates one CDF at `x` (fraction of trials finished within `x`).
pub fn cdf_at(cdf: &[(u64, f64)], x: u64) -> f64 {
    let mut value = 0.0;
    for &(count, frac) in cdf {
        if count > x {
            break;
        }
        value = frac;
    }
    value
}
