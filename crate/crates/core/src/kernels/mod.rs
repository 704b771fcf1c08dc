//! Shared numeric kernels: ranking, Spearman correlation, truncated SVD,
//! ridge and logistic estimation, classical MDS, the Wilcoxon signed-rank
//! test, and scoring functions.
//!
//! Every kernel is a pure function. The estimators accumulate sums in a
//! fixed index order, so results are reproducible bit-for-bit across runs
//! and thread counts.

mod logistic;
mod mds;
mod rank;
mod ridge;
mod scoring;
mod svd;
mod wilcoxon;

pub use logistic::logistic_fit;
pub use mds::classical_mds;
pub use rank::{rank_transform, spearman};
pub use ridge::ridge_fit;
pub use scoring::{mcfadden_pseudo_r2, r2_score};
pub use svd::truncated_svd;
pub use wilcoxon::wilcoxon_signed_rank;

use ndarray::Array2;

use crate::error::{Error, Result};

/// Estimator family of a fitted linear model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Ridge,
    LogisticBinary,
    LogisticMultinomial,
}

/// A fitted linear map from features to a target.
///
/// `weights` has one row for ridge and binary logistic models and one row
/// per class for multinomial models; `intercepts` matches the row count.
/// `penalty` is alpha for ridge and C (inverse penalty) for logistic.
#[derive(Debug, Clone)]
pub struct LinearModel {
    pub kind: ModelKind,
    pub weights: Array2<f64>,
    pub intercepts: Vec<f64>,
    /// Class ids in column order of `predict_proba`; empty for ridge.
    pub classes: Vec<usize>,
    pub penalty: f64,
    pub converged: bool,
}

impl LinearModel {
    /// Regression predictions, one per row of `x`. Ridge models only.
    pub fn predict(&self, x: &Array2<f64>) -> Result<Vec<f64>> {
        if self.kind != ModelKind::Ridge {
            return Err(Error::InvalidArgument(
                "predict applies to ridge models; use predict_proba".into(),
            ));
        }
        let d = self.weights.ncols();
        if x.ncols() != d {
            return Err(Error::InvalidArgument(format!(
                "model has {} features, input has {}",
                d,
                x.ncols()
            )));
        }
        let mut out = Vec::with_capacity(x.nrows());
        for i in 0..x.nrows() {
            let mut acc = self.intercepts[0];
            for j in 0..d {
                acc += x[[i, j]] * self.weights[[0, j]];
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Class probabilities, rows summing to 1, columns ordered as `classes`.
    /// Logistic models only.
    pub fn predict_proba(&self, x: &Array2<f64>) -> Result<Array2<f64>> {
        let d = self.weights.ncols();
        if x.ncols() != d {
            return Err(Error::InvalidArgument(format!(
                "model has {} features, input has {}",
                d,
                x.ncols()
            )));
        }
        match self.kind {
            ModelKind::Ridge => Err(Error::InvalidArgument(
                "predict_proba applies to logistic models".into(),
            )),
            ModelKind::LogisticBinary => {
                let mut out = Array2::zeros((x.nrows(), 2));
                for i in 0..x.nrows() {
                    let mut z = self.intercepts[0];
                    for j in 0..d {
                        z += x[[i, j]] * self.weights[[0, j]];
                    }
                    let p = sigmoid(z);
                    out[[i, 0]] = 1.0 - p;
                    out[[i, 1]] = p;
                }
                Ok(out)
            }
            ModelKind::LogisticMultinomial => {
                let k = self.weights.nrows();
                let mut out = Array2::zeros((x.nrows(), k));
                let mut logits = vec![0.0; k];
                for i in 0..x.nrows() {
                    for (c, logit) in logits.iter_mut().enumerate() {
                        let mut z = self.intercepts[c];
                        for j in 0..d {
                            z += x[[i, j]] * self.weights[[c, j]];
                        }
                        *logit = z;
                    }
                    let lse = log_sum_exp(&logits);
                    for c in 0..k {
                        out[[i, c]] = (logits[c] - lse).exp();
                    }
                }
                Ok(out)
            }
        }
    }
}

/// Outcome of a statistical test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
    /// Sample count entering the test (for signed-rank: nonzero differences).
    pub n: usize,
}

pub(crate) fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

pub(crate) fn log_sum_exp(logits: &[f64]) -> f64 {
    let m = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let s: f64 = logits.iter().map(|&l| (l - m).exp()).sum();
    m + s.ln()
}

pub(crate) fn to_dmatrix(a: &Array2<f64>) -> nalgebra::DMatrix<f64> {
    nalgebra::DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[[i, j]])
}

pub(crate) fn check_finite_matrix(a: &Array2<f64>, what: &str) -> Result<()> {
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::DegenerateInput(format!(
            "{what} contains non-finite values"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigmoid_is_stable_at_extremes() {
        assert_eq!(sigmoid(800.0), 1.0);
        assert_eq!(sigmoid(-800.0), 0.0);
        assert!((sigmoid(0.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn log_sum_exp_matches_direct_sum() {
        let logits = [0.1f64, -0.3, 0.7];
        let direct: f64 = logits.iter().map(|l| l.exp()).sum::<f64>().ln();
        assert!((log_sum_exp(&logits) - direct).abs() < 1e-12);
        assert!((log_sum_exp(&[1000.0, 1000.0]) - (1000.0 + 2.0f64.ln())).abs() < 1e-9);
    }
}
