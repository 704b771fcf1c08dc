//! Rank transforms and Spearman rank correlation.

use crate::error::{Error, Result};

/// Replaces values by their 1-based ranks; ties receive the average of the
/// ranks they span.
pub fn rank_transform(values: &[f64]) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(Error::InvalidArgument("rank_transform on empty input".into()));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::DegenerateInput("rank input must be finite".into()));
    }
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));

    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // positions i..=j share the value; average rank is the midpoint
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }
    Ok(ranks)
}

/// Spearman rank correlation: Pearson correlation of the rank-transformed
/// inputs. Errors if either side has zero rank variance (all values tied)
/// or the inputs are empty, mismatched, or non-finite.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::InvalidArgument(format!(
            "spearman inputs have lengths {} and {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::DegenerateInput(
            "spearman needs at least two observations".into(),
        ));
    }

    let rx = rank_transform(x)?;
    let ry = rank_transform(y)?;

    // Identical rankings correlate exactly; skipping the arithmetic avoids
    // reporting 0.999... for what is exactly 1.
    if rx == ry {
        return Ok(1.0);
    }

    let n = rx.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in rx.iter().zip(ry.iter()) {
        let da = a - mx;
        let db = b - my;
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::DegenerateInput(
            "spearman input has zero rank variance".into(),
        ));
    }
    Ok(sxy / (sxx * syy).sqrt())
}
