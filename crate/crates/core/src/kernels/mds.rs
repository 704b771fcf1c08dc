//! Classical (Torgerson) multidimensional scaling.

use nalgebra::DMatrix;
use ndarray::Array2;

use crate::error::{Error, Result};

/// Embeds an n×n dissimilarity matrix into `dims` coordinates by double
/// centering: B = −½ J D² J, then scaling the top eigenvectors of B by the
/// square roots of their eigenvalues. Negative eigenvalues are clamped to
/// zero, so non-Euclidean inputs fold into fewer effective dimensions.
/// Coordinates are centered at the origin, with each column's sign chosen
/// so its largest-magnitude entry is positive.
pub fn classical_mds(d: &Array2<f64>, dims: usize) -> Result<Array2<f64>> {
    let n = d.nrows();
    if d.ncols() != n {
        return Err(Error::InvalidArgument(format!(
            "dissimilarity matrix is {}x{}, not square",
            n,
            d.ncols()
        )));
    }
    if dims == 0 || dims > n {
        return Err(Error::InvalidArgument(format!(
            "cannot embed {} points into {} dimensions",
            n, dims
        )));
    }
    for i in 0..n {
        if d[[i, i]].abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "dissimilarity diagonal entry {} is {}",
                i,
                d[[i, i]]
            )));
        }
        for j in 0..n {
            let v = d[[i, j]];
            if !v.is_finite() || v < -1e-9 {
                return Err(Error::InvalidArgument(format!(
                    "dissimilarity entry ({i},{j}) is {v}"
                )));
            }
            if (v - d[[j, i]]).abs() > 1e-9 {
                return Err(Error::InvalidArgument(format!(
                    "dissimilarity matrix is asymmetric at ({i},{j})"
                )));
            }
        }
    }

    // B = −½ J D² J, computed via row/column/grand means of D²
    let nf = n as f64;
    let sq = |v: f64| v.max(0.0) * v.max(0.0);
    let mut row_mean = vec![0.0; n];
    let mut grand = 0.0;
    for i in 0..n {
        let mut s = 0.0;
        for j in 0..n {
            s += sq(d[[i, j]]);
        }
        row_mean[i] = s / nf;
        grand += s;
    }
    grand /= nf * nf;
    let mut b = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            b[(i, j)] = -0.5 * (sq(d[[i, j]]) - row_mean[i] - row_mean[j] + grand);
        }
    }
    // enforce exact symmetry before the eigensolver
    for i in 0..n {
        for j in i + 1..n {
            let avg = 0.5 * (b[(i, j)] + b[(j, i)]);
            b[(i, j)] = avg;
            b[(j, i)] = avg;
        }
    }

    let eig = b.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let mut coords = Array2::zeros((n, dims));
    for (t, &src) in order.iter().take(dims).enumerate() {
        let scale = eig.eigenvalues[src].max(0.0).sqrt();
        for i in 0..n {
            coords[[i, t]] = eig.eigenvectors[(i, src)] * scale;
        }
    }

    for t in 0..dims {
        let mut pivot = 0;
        for i in 1..n {
            if coords[[i, t]].abs() > coords[[pivot, t]].abs() {
                pivot = i;
            }
        }
        if coords[[pivot, t]] < 0.0 {
            for i in 0..n {
                coords[[i, t]] = -coords[[i, t]];
            }
        }
    }

    for t in 0..dims {
        let mean: f64 = (0..n).map(|i| coords[[i, t]]).sum::<f64>() / nf;
        for i in 0..n {
            coords[[i, t]] -= mean;
        }
    }
    Ok(coords)
}
