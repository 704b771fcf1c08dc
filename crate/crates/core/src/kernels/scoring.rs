//! Probe scoring: coefficient of determination and McFadden's pseudo-R².

use ndarray::Array2;

use crate::error::{Error, Result};

const PROB_CLIP: f64 = 1e-12;

/// R² = 1 − SS_res/SS_tot about the mean of `y`. Unbounded below; 1 is a
/// perfect fit. Errors when `y` is constant.
pub fn r2_score(y: &[f64], y_hat: &[f64]) -> Result<f64> {
    if y.len() != y_hat.len() {
        return Err(Error::InvalidArgument(format!(
            "r2 inputs have lengths {} and {}",
            y.len(),
            y_hat.len()
        )));
    }
    if y.len() < 2 {
        return Err(Error::InvalidArgument(
            "r2 needs at least two observations".into(),
        ));
    }
    if y.iter().chain(y_hat.iter()).any(|v| !v.is_finite()) {
        return Err(Error::DegenerateInput("r2 inputs must be finite".into()));
    }
    let n = y.len() as f64;
    let mut mean = 0.0;
    for &v in y {
        mean += v;
    }
    mean /= n;
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for i in 0..y.len() {
        let r = y[i] - y_hat[i];
        ss_res += r * r;
        let d = y[i] - mean;
        ss_tot += d * d;
    }
    if ss_tot == 0.0 {
        return Err(Error::DegenerateTarget);
    }
    Ok(1.0 - ss_res / ss_tot)
}

fn clipped_ln(p: f64) -> f64 {
    p.clamp(PROB_CLIP, 1.0 - PROB_CLIP).ln()
}

/// McFadden's pseudo-R²: 1 − LL_model/LL_null. `p_hat` holds per-row class
/// probabilities; `p_null` is the intercept-only distribution applied to
/// every row (class frequencies of the training data). `y` indexes columns.
/// Probabilities are clipped to [1e-12, 1−1e-12] before taking logs.
pub fn mcfadden_pseudo_r2(y: &[usize], p_hat: &Array2<f64>, p_null: &[f64]) -> Result<f64> {
    let (n, k) = p_hat.dim();
    if y.len() != n {
        return Err(Error::InvalidArgument(format!(
            "{} labels for {} probability rows",
            y.len(),
            n
        )));
    }
    if p_null.len() != k {
        return Err(Error::InvalidArgument(format!(
            "null distribution has {} entries for {} classes",
            p_null.len(),
            k
        )));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("no observations".into()));
    }
    for i in 0..n {
        let row: f64 = (0..k).map(|c| p_hat[[i, c]]).sum();
        if (row - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "probability row {} sums to {}",
                i, row
            )));
        }
    }
    if let Some(&bad) = y.iter().find(|&&label| label >= k) {
        return Err(Error::InvalidArgument(format!(
            "label {} outside the {} probability columns",
            bad, k
        )));
    }

    let mut ll_model = 0.0;
    let mut ll_null = 0.0;
    for (i, &label) in y.iter().enumerate() {
        ll_model += clipped_ln(p_hat[[i, label]]);
        ll_null += clipped_ln(p_null[label]);
    }
    if ll_null == 0.0 {
        return Err(Error::DegenerateTarget);
    }
    Ok(1.0 - ll_model / ll_null)
}
