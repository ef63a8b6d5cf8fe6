//! Weight-space samplers for one sibling group, and the point estimates used
//! when sampling is bypassed.

use rand::Rng;

use crate::error::{Error, ErrorCode, Result};
use crate::hierarchy::WeightSpec;

/// Uniform draw from the unit simplex via sorted uniform spacings.
pub fn sample_weights_missing<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    assert!(n >= 1, "weight group must not be empty");
    let mut cuts: Vec<f64> = (0..n - 1).map(|_| rng.random::<f64>()).collect();
    cuts.sort_by(f64::total_cmp);
    let mut out = Vec::with_capacity(n);
    let mut prev = 0.0;
    for c in cuts {
        out.push(c - prev);
        prev = c;
    }
    out.push(1.0 - prev);
    out
}

/// Places descending `sorted` values onto the ranked siblings; siblings with
/// equal rank share the mean of their positions.
fn place_by_rank(ranked: &[(usize, u32)], sorted: &[f64], out: &mut [f64]) {
    let mut order: Vec<(usize, u32)> = ranked.to_vec();
    order.sort_by_key(|&(i, r)| (r, i));
    let mut start = 0;
    while start < order.len() {
        let rank = order[start].1;
        let end = start + order[start..].iter().take_while(|&&(_, r)| r == rank).count();
        let mean = sorted[start..end].iter().sum::<f64>() / (end - start) as f64;
        for &(i, _) in &order[start..end] {
            out[i] = mean;
        }
        start = end;
    }
}

/// Simplex draw reordered to follow `ranks` (1 = most important). Unranked
/// siblings keep their draw; the ranked ones are rearranged among their own
/// slots, which leaves the conditional distribution uniform on the
/// order-constrained region.
pub fn sample_weights_ordinal<R: Rng + ?Sized>(ranks: &[Option<u32>], rng: &mut R) -> Vec<f64> {
    let mut w = sample_weights_missing(ranks.len(), rng);
    let ranked: Vec<(usize, u32)> = ranks.iter().enumerate().filter_map(|(i, r)| r.map(|r| (i, r))).collect();
    let mut values: Vec<f64> = ranked.iter().map(|&(i, _)| w[i]).collect();
    values.sort_by(|a, b| b.total_cmp(a));
    place_by_rank(&ranked, &values, &mut w);
    w
}

/// Rejection sampling from the uniform simplex until every bound holds.
pub fn sample_weights_interval<R: Rng + ?Sized>(bounds: &[(f64, f64)], rng: &mut R, max_attempts: u64) -> Result<Vec<f64>> {
    for _ in 0..max_attempts {
        let w = sample_weights_missing(bounds.len(), rng);
        if w.iter().zip(bounds).all(|(&v, &(lo, hi))| lo <= v && v <= hi) {
            return Ok(w);
        }
    }
    let shown: Vec<String> = bounds.iter().map(|(lo, hi)| format!("[{lo}, {hi}]")).collect();
    Err(Error::new(
        ErrorCode::Infeasible,
        format!("no simplex draw satisfied bounds {} after {max_attempts} attempts", shown.join(", ")),
    ))
}

/// One weight vector for a group according to its spec.
pub fn sample_weights<R: Rng + ?Sized>(spec: &WeightSpec, n: usize, rng: &mut R, max_attempts: u64) -> Result<Vec<f64>> {
    Ok(match spec {
        WeightSpec::Deterministic(w) => w.clone(),
        WeightSpec::Missing => sample_weights_missing(n, rng),
        WeightSpec::Ordinal(ranks) => sample_weights_ordinal(ranks, rng),
        WeightSpec::Interval(bounds) => sample_weights_interval(bounds, rng, max_attempts)?,
    })
}

/// Representative weights used by the deterministic mode: the centre of the
/// admissible region for each kind of information.
pub fn point_weights(spec: &WeightSpec, n: usize) -> Vec<f64> {
    match spec {
        WeightSpec::Deterministic(w) => w.clone(),
        WeightSpec::Missing => vec![1.0 / n as f64; n],
        WeightSpec::Ordinal(ranks) => {
            // expected order statistics of a uniform simplex draw
            let expected: Vec<f64> = (1..=n).map(|j| (j..=n).map(|i| 1.0 / i as f64).sum::<f64>() / n as f64).collect();
            let ranked: Vec<(usize, u32)> = ranks.iter().enumerate().filter_map(|(i, r)| r.map(|r| (i, r))).collect();
            if ranked.len() == n {
                let mut out = vec![0.0; n];
                place_by_rank(&ranked, &expected, &mut out);
                return out;
            }
            // unranked siblings keep the mean share; ranked ones split the rest
            let free = n - ranked.len();
            let mut out = vec![1.0 / n as f64; n];
            let m = ranked.len();
            let subset: Vec<f64> = (1..=m).map(|j| (j..=m).map(|i| 1.0 / i as f64).sum::<f64>() / m as f64).collect();
            let mass = 1.0 - free as f64 / n as f64;
            let scaled: Vec<f64> = subset.iter().map(|v| v * mass).collect();
            place_by_rank(&ranked, &scaled, &mut out);
            out
        }
        WeightSpec::Interval(bounds) => {
            let lo: f64 = bounds.iter().map(|b| b.0).sum();
            let hi: f64 = bounds.iter().map(|b| b.1).sum();
            let lambda = if hi > lo { (1.0 - lo) / (hi - lo) } else { 0.0 };
            bounds.iter().map(|&(l, h)| l + lambda * (h - l)).collect()
        }
    }
}
