//! Statistics for variant comparisons.
//!
//! Comparisons are paired by construction (every variant scores the same
//! judge verdict for the same record), so uncertainty on a mean difference
//! comes from a paired bootstrap over the per-record deltas. The interval is
//! the percentile interval of the resampled means; the point estimate is the
//! plain mean of the original deltas, not a bootstrap aggregate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::Error;

/// Bootstrap resample count used when callers do not choose one.
pub const DEFAULT_BOOTSTRAP_RESAMPLES: usize = 1000;

/// A mean with a percentile bootstrap interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapCi {
    /// Mean of the original (unresampled) deltas.
    pub point: f64,
    /// 2.5th percentile of the resampled means.
    pub lower: f64,
    /// 97.5th percentile of the resampled means.
    pub upper: f64,
    pub resamples: usize,
}

/// Percentile bootstrap for the mean of paired deltas. Deterministic for a
/// given `(deltas, resamples, seed)`.
pub fn paired_bootstrap_ci(
    deltas: &[f64],
    resamples: usize,
    seed: u64,
) -> crate::Result<BootstrapCi> {
    if deltas.is_empty() {
        return Err(Error::InsufficientData {
            what: "bootstrap deltas",
            min: 1,
            got: 0,
        });
    }
    if resamples == 0 {
        return Err(Error::invalid("resamples", "must be at least 1"));
    }
    let n = deltas.len();
    let point = deltas.iter().sum::<f64>() / n as f64;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut means = Vec::with_capacity(resamples);
    for _ in 0..resamples {
        let mut sum = 0.0;
        for _ in 0..n {
            sum += deltas[rng.gen_range(0..n)];
        }
        means.push(sum / n as f64);
    }
    means.sort_by(|a, b| a.partial_cmp(b).expect("resample means are finite"));

    Ok(BootstrapCi {
        point,
        lower: percentile(&means, 2.5),
        upper: percentile(&means, 97.5),
        resamples,
    })
}

/// Linear-interpolation percentile of a sorted slice.
fn percentile(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    if sorted.len() == 1 {
        return sorted[0];
    }
    let rank = p / 100.0 * (sorted.len() - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    let frac = rank - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

/// Spearman rank correlation with average ranks for ties.
///
/// Returns `Ok(None)` when either side is constant (rank correlation is
/// undefined there, and treating it as zero would be misleading). Requires
/// at least three pairs.
pub fn spearman_rho(xs: &[f64], ys: &[f64]) -> crate::Result<Option<f64>> {
    if xs.len() != ys.len() {
        return Err(Error::invalid(
            "spearman inputs",
            format!("length mismatch: {} vs {}", xs.len(), ys.len()),
        ));
    }
    if xs.len() < 3 {
        return Err(Error::InsufficientData {
            what: "spearman pairs",
            min: 3,
            got: xs.len(),
        });
    }
    let rx = average_ranks(xs);
    let ry = average_ranks(ys);
    Ok(pearson(&rx, &ry))
}

/// Ranks (1-based) with tied values sharing the average of their ranks.
fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite values"));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // Positions i..=j hold ties; their shared rank is the average of
        // the 1-based ranks they span.
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Pearson correlation; `None` when either side has zero variance.
fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        cov += (x - mx) * (y - my);
        vx += (x - mx).powi(2);
        vy += (y - my).powi(2);
    }
    if vx == 0.0 || vy == 0.0 {
        return None;
    }
    Some(cov / (vx * vy).sqrt())
}
