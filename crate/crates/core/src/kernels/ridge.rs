//! Ridge regression via the centered closed form.

use ndarray::Array2;

use crate::error::{Error, Result};

use super::{check_finite_matrix, to_dmatrix, LinearModel, ModelKind};

/// Fits y ≈ Xw + b with an L2 penalty alpha on w; the intercept b is
/// unpenalized (the system is solved on column-centered data).
///
/// For alpha > 0 the normal equations (X_cᵀX_c + αI)w = X_cᵀy_c are solved
/// by Cholesky factorization. For alpha = 0 the minimum-norm least-squares
/// solution is computed through an SVD of the centered design, so
/// rank-deficient inputs are handled.
pub fn ridge_fit(x: &Array2<f64>, y: &[f64], alpha: f64) -> Result<LinearModel> {
    let (n, d) = x.dim();
    if n != y.len() {
        return Err(Error::InvalidArgument(format!(
            "design has {} rows but target has {} values",
            n,
            y.len()
        )));
    }
    if n < 2 {
        return Err(Error::InvalidArgument(
            "ridge needs at least two samples".into(),
        ));
    }
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "penalty must be finite and nonnegative, got {alpha}"
        )));
    }
    check_finite_matrix(x, "ridge design")?;
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::DegenerateInput("ridge target is non-finite".into()));
    }

    let nf = n as f64;
    let mut mean = vec![0.0; d];
    for (j, m) in mean.iter_mut().enumerate() {
        let mut s = 0.0;
        for i in 0..n {
            s += x[[i, j]];
        }
        *m = s / nf;
    }
    let mean_y = {
        let mut s = 0.0;
        for &v in y {
            s += v;
        }
        s / nf
    };

    let mut xc = Array2::zeros((n, d));
    for i in 0..n {
        for j in 0..d {
            xc[[i, j]] = x[[i, j]] - mean[j];
        }
    }
    let yc: Vec<f64> = y.iter().map(|&v| v - mean_y).collect();

    let w = if alpha > 0.0 {
        let mut gram = vec![vec![0.0; d]; d];
        for a in 0..d {
            for b in 0..d {
                let mut s = 0.0;
                for i in 0..n {
                    s += xc[[i, a]] * xc[[i, b]];
                }
                gram[a][b] = s;
            }
            gram[a][a] += alpha;
        }
        let mut rhs = vec![0.0; d];
        for (a, r) in rhs.iter_mut().enumerate() {
            let mut s = 0.0;
            for i in 0..n {
                s += xc[[i, a]] * yc[i];
            }
            *r = s;
        }
        cholesky_solve(&gram, &rhs)?
    } else {
        min_norm_lstsq(&xc, &yc)?
    };

    let mut proj = 0.0;
    for j in 0..d {
        proj += mean[j] * w[j];
    }
    let intercept = mean_y - proj;

    let mut weights = Array2::zeros((1, d));
    for (j, &v) in w.iter().enumerate() {
        weights[[0, j]] = v;
    }
    Ok(LinearModel {
        kind: ModelKind::Ridge,
        weights,
        intercepts: vec![intercept],
        classes: Vec::new(),
        penalty: alpha,
        converged: true,
    })
}

/// Solves Aw = b for symmetric positive-definite A by textbook Cholesky:
/// column-ordered factorization, then forward and back substitution.
fn cholesky_solve(a: &[Vec<f64>], b: &[f64]) -> Result<Vec<f64>> {
    let d = b.len();
    let mut l = vec![vec![0.0; d]; d];
    for j in 0..d {
        for i in j..d {
            let mut s = a[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                if s <= 0.0 {
                    return Err(Error::DegenerateInput(
                        "normal equations are not positive definite".into(),
                    ));
                }
                l[j][j] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    let mut z = vec![0.0; d];
    for i in 0..d {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i][k] * z[k];
        }
        z[i] = s / l[i][i];
    }
    let mut w = vec![0.0; d];
    for i in (0..d).rev() {
        let mut s = z[i];
        for k in i + 1..d {
            s -= l[k][i] * w[k];
        }
        w[i] = s / l[i][i];
    }
    Ok(w)
}

/// Minimum-norm least squares via SVD with a relative singular value cutoff.
fn min_norm_lstsq(xc: &Array2<f64>, yc: &[f64]) -> Result<Vec<f64>> {
    let (n, d) = xc.dim();
    let svd = to_dmatrix(xc)
        .try_svd(true, true, f64::EPSILON, 0)
        .ok_or(Error::SvdFailure)?;
    let u = svd.u.ok_or(Error::SvdFailure)?;
    let vt = svd.v_t.ok_or(Error::SvdFailure)?;
    let sv = svd.singular_values;

    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let cutoff = smax * n.max(d) as f64 * f64::EPSILON;

    let r = sv.len();
    let mut w = vec![0.0; d];
    for t in 0..r {
        if sv[t] <= cutoff {
            continue;
        }
        let mut uy = 0.0;
        for i in 0..n {
            uy += u[(i, t)] * yc[i];
        }
        let coef = uy / sv[t];
        for (j, wj) in w.iter_mut().enumerate() {
            *wj += coef * vt[(t, j)];
        }
    }
    Ok(w)
}
