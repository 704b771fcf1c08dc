//! Wilcoxon signed-rank test for paired differences.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

use super::TestResult;

/// Two-sided signed-rank test on paired differences. Exact zeros are
/// dropped; ties in |diff| receive average ranks; the statistic is
/// min(W⁺, W⁻). The p-value is exact (full sign-assignment distribution)
/// for n ≤ 25 and a tie-corrected normal approximation with continuity
/// correction above that.
pub fn wilcoxon_signed_rank(diffs: &[f64]) -> Result<TestResult> {
    if diffs.iter().any(|v| !v.is_finite()) {
        return Err(Error::DegenerateInput(
            "signed-rank differences must be finite".into(),
        ));
    }
    let nonzero: Vec<f64> = diffs.iter().copied().filter(|&v| v != 0.0).collect();
    if nonzero.is_empty() {
        return Err(Error::DegenerateInput("all differences are zero".into()));
    }
    if nonzero.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "signed-rank needs at least 3 nonzero differences, got {}",
            nonzero.len()
        )));
    }
    let n = nonzero.len();

    // Average ranks of |d| are half-integers; doubled ranks stay in exact
    // integer arithmetic throughout.
    let abs: Vec<f64> = nonzero.iter().map(|v| v.abs()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| abs[a].total_cmp(&abs[b]));
    let mut rank2 = vec![0u64; n];
    let mut tie_sizes = Vec::new();
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && abs[order[j + 1]] == abs[order[i]] {
            j += 1;
        }
        let doubled = (i + j + 2) as u64;
        for &idx in &order[i..=j] {
            rank2[idx] = doubled;
        }
        tie_sizes.push(j - i + 1);
        i = j + 1;
    }

    let total2 = n as u64 * (n as u64 + 1);
    let mut w_plus2 = 0u64;
    for (idx, &v) in nonzero.iter().enumerate() {
        if v > 0.0 {
            w_plus2 += rank2[idx];
        }
    }
    let w_minus2 = total2 - w_plus2;
    let w2 = w_plus2.min(w_minus2);

    let p_value = if n <= 25 {
        exact_two_sided_p(&rank2, w2)
    } else {
        normal_two_sided_p(w2 as f64 / 2.0, n, &tie_sizes)
    };
    Ok(TestResult {
        statistic: w2 as f64 / 2.0,
        p_value,
        n,
    })
}

/// P(W⁺ ≤ w) doubled from the exact null distribution: a subset-sum count
/// over the doubled ranks, equivalent to enumerating all 2ⁿ sign patterns.
pub(crate) fn exact_two_sided_p(rank2: &[u64], w2: u64) -> f64 {
    let n = rank2.len();
    let max: usize = rank2.iter().sum::<u64>() as usize;
    let mut dp = vec![0u64; max + 1];
    dp[0] = 1;
    for &r in rank2 {
        let r = r as usize;
        for s in (r..=max).rev() {
            dp[s] += dp[s - r];
        }
    }
    let count: u64 = dp[..=(w2 as usize)].iter().sum();
    let total = 1u64 << n;
    (2.0 * count as f64 / total as f64).min(1.0)
}

fn normal_two_sided_p(w: f64, n: usize, tie_sizes: &[usize]) -> f64 {
    let nf = n as f64;
    let mu = nf * (nf + 1.0) / 4.0;
    let tie_term: f64 = tie_sizes
        .iter()
        .map(|&t| {
            let t = t as f64;
            (t * t * t - t) / 48.0
        })
        .sum();
    let sigma = (nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term).sqrt();
    let z = (w - mu + 0.5) / sigma;
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    (2.0 * normal.cdf(z)).min(1.0)
}
