//! Truncated singular value decomposition on dense matrices.

use ndarray::Array2;

use crate::error::{Error, Result};

use super::{check_finite_matrix, to_dmatrix};

/// Rank-k SVD: returns (U: n×k, s: k descending nonnegative values, Vt: k×m)
/// with U·diag(s)·Vt the best rank-k approximation in Frobenius norm.
///
/// Singular vector signs are canonicalized so the largest-magnitude entry of
/// each U column is positive, making output independent of backend sign
/// choices.
pub fn truncated_svd(a: &Array2<f64>, k: usize) -> Result<(Array2<f64>, Vec<f64>, Array2<f64>)> {
    let (n, m) = a.dim();
    if k == 0 || k > n.min(m) {
        return Err(Error::InvalidArgument(format!(
            "svd rank {} out of range for a {}x{} matrix",
            k, n, m
        )));
    }
    check_finite_matrix(a, "svd input")?;

    let svd = to_dmatrix(a)
        .try_svd(true, true, f64::EPSILON, 0)
        .ok_or(Error::SvdFailure)?;
    let u_full = svd.u.ok_or(Error::SvdFailure)?;
    let vt_full = svd.v_t.ok_or(Error::SvdFailure)?;
    let sv = svd.singular_values;

    // sort descending; the backend's ordering is not part of its contract
    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&a, &b| sv[b].total_cmp(&sv[a]));

    let mut u = Array2::zeros((n, k));
    let mut vt = Array2::zeros((k, m));
    let mut s = Vec::with_capacity(k);
    for (t, &src) in order.iter().take(k).enumerate() {
        s.push(sv[src]);
        for i in 0..n {
            u[[i, t]] = u_full[(i, src)];
        }
        for j in 0..m {
            vt[[t, j]] = vt_full[(src, j)];
        }
    }

    for t in 0..k {
        let mut pivot = 0;
        for i in 1..n {
            if u[[i, t]].abs() > u[[pivot, t]].abs() {
                pivot = i;
            }
        }
        if u[[pivot, t]] < 0.0 {
            for i in 0..n {
                u[[i, t]] = -u[[i, t]];
            }
            for j in 0..m {
                vt[[t, j]] = -vt[[t, j]];
            }
        }
    }

    Ok((u, s, vt))
}
