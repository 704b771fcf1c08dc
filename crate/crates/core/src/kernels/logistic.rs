//! L2-regularized logistic regression (binary and multinomial softmax),
//! fitted by L-BFGS with Armijo backtracking.

use ndarray::Array2;

use crate::error::{Error, Result};

use super::{check_finite_matrix, log_sum_exp, LinearModel, ModelKind};

const GRAD_TOL: f64 = 1e-6;
const MAX_ITER: usize = 1000;

/// Maximizes Σ log-likelihood − (1/(2C))‖W‖² over weights and unpenalized
/// intercepts. Labels are arbitrary class ids; the fitted model's `classes`
/// lists the distinct ids ascending, matching `predict_proba` columns.
///
/// With two classes the model is a single sigmoid unit; with more it is a
/// multinomial softmax. Failure to reach the gradient tolerance within the
/// iteration budget clears `converged` instead of erroring.
pub fn logistic_fit(x: &Array2<f64>, y: &[usize], c: f64) -> Result<LinearModel> {
    let n = x.nrows();
    if n != y.len() {
        return Err(Error::InvalidArgument(format!(
            "design has {} rows but target has {} labels",
            n,
            y.len()
        )));
    }
    if !c.is_finite() || c <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "inverse penalty must be finite and positive, got {c}"
        )));
    }
    check_finite_matrix(x, "logistic design")?;

    let mut classes: Vec<usize> = y.to_vec();
    classes.sort_unstable();
    classes.dedup();
    let k = classes.len();
    if k < 2 {
        return Err(Error::DegenerateInput(
            "logistic regression needs at least two classes present".into(),
        ));
    }
    if n < k {
        return Err(Error::InvalidArgument(
            "fewer samples than classes".into(),
        ));
    }
    let targets: Vec<usize> = y
        .iter()
        .map(|label| classes.binary_search(label).expect("label from y"))
        .collect();

    if k == 2 {
        fit_binary(x, &targets, c, classes)
    } else {
        fit_multinomial(x, &targets, c, classes, k)
    }
}

/// ln(1 + e^z) without overflow.
fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

fn fit_binary(x: &Array2<f64>, t: &[usize], c: f64, classes: Vec<usize>) -> Result<LinearModel> {
    let (n, d) = x.dim();
    // theta = [w_0..w_{d-1}, b]
    let objective = |theta: &[f64]| -> (f64, Vec<f64>) {
        let w = &theta[..d];
        let b = theta[d];
        let mut loss = 0.0;
        let mut grad = vec![0.0; d + 1];
        for i in 0..n {
            let mut z = b;
            for j in 0..d {
                z += x[[i, j]] * w[j];
            }
            let ti = t[i] as f64;
            loss += ti * softplus(-z) + (1.0 - ti) * softplus(z);
            let r = super::sigmoid(z) - ti;
            for j in 0..d {
                grad[j] += r * x[[i, j]];
            }
            grad[d] += r;
        }
        for j in 0..d {
            loss += w[j] * w[j] / (2.0 * c);
            grad[j] += w[j] / c;
        }
        (loss, grad)
    };

    let (theta, converged) = lbfgs(vec![0.0; d + 1], objective);
    let mut weights = Array2::zeros((1, d));
    for j in 0..d {
        weights[[0, j]] = theta[j];
    }
    Ok(LinearModel {
        kind: ModelKind::LogisticBinary,
        weights,
        intercepts: vec![theta[d]],
        classes,
        penalty: c,
        converged,
    })
}

fn fit_multinomial(
    x: &Array2<f64>,
    t: &[usize],
    c: f64,
    classes: Vec<usize>,
    k: usize,
) -> Result<LinearModel> {
    let (n, d) = x.dim();
    // theta = [W row-major (k*d), b_0..b_{k-1}]
    let objective = |theta: &[f64]| -> (f64, Vec<f64>) {
        let mut loss = 0.0;
        let mut grad = vec![0.0; k * d + k];
        let mut logits = vec![0.0; k];
        for i in 0..n {
            for (cl, logit) in logits.iter_mut().enumerate() {
                let mut z = theta[k * d + cl];
                for j in 0..d {
                    z += x[[i, j]] * theta[cl * d + j];
                }
                *logit = z;
            }
            let lse = log_sum_exp(&logits);
            loss += lse - logits[t[i]];
            for cl in 0..k {
                let p = (logits[cl] - lse).exp();
                let r = p - if t[i] == cl { 1.0 } else { 0.0 };
                for j in 0..d {
                    grad[cl * d + j] += r * x[[i, j]];
                }
                grad[k * d + cl] += r;
            }
        }
        for v in 0..k * d {
            loss += theta[v] * theta[v] / (2.0 * c);
            grad[v] += theta[v] / c;
        }
        (loss, grad)
    };

    let (theta, converged) = lbfgs(vec![0.0; k * d + k], objective);
    let mut weights = Array2::zeros((k, d));
    for cl in 0..k {
        for j in 0..d {
            weights[[cl, j]] = theta[cl * d + j];
        }
    }
    Ok(LinearModel {
        kind: ModelKind::LogisticMultinomial,
        weights,
        intercepts: theta[k * d..].to_vec(),
        classes,
        penalty: c,
        converged,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Limited-memory BFGS with history 10 and Armijo backtracking, started at
/// the given point. Returns the final iterate and whether the gradient
/// max-norm reached tolerance within the iteration budget.
fn lbfgs<F>(mut theta: Vec<f64>, mut objective: F) -> (Vec<f64>, bool)
where
    F: FnMut(&[f64]) -> (f64, Vec<f64>),
{
    const HISTORY: usize = 10;
    let dim = theta.len();
    let (mut f, mut g) = objective(&theta);
    let mut s_hist: Vec<Vec<f64>> = Vec::new();
    let mut y_hist: Vec<Vec<f64>> = Vec::new();

    for _ in 0..MAX_ITER {
        if inf_norm(&g) <= GRAD_TOL {
            return (theta, true);
        }

        // two-loop recursion for the search direction
        let mut q = g.clone();
        let pairs = s_hist.len();
        let mut alphas = vec![0.0; pairs];
        for idx in (0..pairs).rev() {
            let rho = 1.0 / dot(&y_hist[idx], &s_hist[idx]);
            let a = rho * dot(&s_hist[idx], &q);
            for v in 0..dim {
                q[v] -= a * y_hist[idx][v];
            }
            alphas[idx] = a;
        }
        if pairs > 0 {
            let last = pairs - 1;
            let gamma = dot(&s_hist[last], &y_hist[last]) / dot(&y_hist[last], &y_hist[last]);
            for v in q.iter_mut() {
                *v *= gamma;
            }
        }
        for idx in 0..pairs {
            let rho = 1.0 / dot(&y_hist[idx], &s_hist[idx]);
            let b = rho * dot(&y_hist[idx], &q);
            for v in 0..dim {
                q[v] += (alphas[idx] - b) * s_hist[idx][v];
            }
        }
        let mut dir: Vec<f64> = q.iter().map(|v| -v).collect();
        let mut slope = dot(&g, &dir);
        if slope >= 0.0 {
            dir = g.iter().map(|v| -v).collect();
            slope = dot(&g, &dir);
        }

        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let cand: Vec<f64> = theta
                .iter()
                .zip(&dir)
                .map(|(t, d)| t + step * d)
                .collect();
            let (fc, gc) = objective(&cand);
            if fc.is_finite() && fc <= f + 1e-4 * step * slope {
                accepted = Some((cand, fc, gc));
                break;
            }
            step *= 0.5;
        }
        let Some((cand, fc, gc)) = accepted else {
            break;
        };

        let s_new: Vec<f64> = cand.iter().zip(&theta).map(|(a, b)| a - b).collect();
        let y_new: Vec<f64> = gc.iter().zip(&g).map(|(a, b)| a - b).collect();
        if dot(&s_new, &y_new) > 1e-12 {
            s_hist.push(s_new);
            y_hist.push(y_new);
            if s_hist.len() > HISTORY {
                s_hist.remove(0);
                y_hist.remove(0);
            }
        }
        theta = cand;
        f = fc;
        g = gc;
    }
    let converged = inf_norm(&g) <= GRAD_TOL;
    (theta, converged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn separable_data_is_classified_perfectly() {
        let x = array![[-2.0], [-1.5], [-1.0], [1.0], [1.5], [2.0]];
        let y = [0, 0, 0, 1, 1, 1];
        let m = logistic_fit(&x, &y, 1.0).unwrap();
        assert!(m.converged);
        let p = m.predict_proba(&x).unwrap();
        for (i, &label) in y.iter().enumerate() {
            let pred = if p[[i, 1]] > 0.5 { 1 } else { 0 };
            assert_eq!(pred, label);
        }
    }

    #[test]
    fn intercept_only_predicts_class_frequencies() {
        let x = Array2::zeros((6, 2));
        let y = [0, 0, 0, 0, 1, 1];
        let m = logistic_fit(&x, &y, 1.0).unwrap();
        let p = m.predict_proba(&x).unwrap();
        for i in 0..6 {
            assert!((p[[i, 0]] - 4.0 / 6.0).abs() < 1e-5);
            assert!((p[[i, 1]] - 2.0 / 6.0).abs() < 1e-5);
        }
    }

    #[test]
    fn multinomial_rows_sum_to_one() {
        let x = array![
            [1.0, 0.0, 0.0],
            [1.0, 0.1, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, 1.0, 0.1],
            [0.0, 0.0, 1.0],
            [0.1, 0.0, 1.0]
        ];
        let y = [0, 0, 1, 1, 2, 2];
        let m = logistic_fit(&x, &y, 1.0).unwrap();
        assert_eq!(m.kind, ModelKind::LogisticMultinomial);
        let p = m.predict_proba(&x).unwrap();
        for i in 0..6 {
            let row: f64 = (0..3).map(|c| p[[i, c]]).sum();
            assert!((row - 1.0).abs() < 1e-9);
            let pred = (0..3).fold(0, |best, c| if p[[i, c]] > p[[i, best]] { c } else { best });
            assert_eq!(pred, y[i]);
        }
    }

    #[test]
    fn gradient_vanishes_at_reported_optimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let x = Array2::from_shape_fn((50, 3), |_| rng.gen_range(-1.0..1.0));
        let y: Vec<usize> = (0..50)
            .map(|i| {
                let z = x[[i, 0]] - 0.5 * x[[i, 1]];
                usize::from(z + rng.gen_range(-0.3..0.3) > 0.0)
            })
            .collect();
        let c = 0.7;
        let m = logistic_fit(&x, &y, c).unwrap();
        assert!(m.converged);

        // independent gradient evaluation at the returned parameters
        let mut grad = vec![0.0; 4];
        for i in 0..50 {
            let mut z = m.intercepts[0];
            for j in 0..3 {
                z += x[[i, j]] * m.weights[[0, j]];
            }
            let p = 1.0 / (1.0 + (-z).exp());
            let r = p - y[i] as f64;
            for j in 0..3 {
                grad[j] += r * x[[i, j]];
            }
            grad[3] += r;
        }
        for j in 0..3 {
            grad[j] += m.weights[[0, j]] / c;
        }
        assert!(grad.iter().all(|g| g.abs() <= 1e-5), "gradient {:?}", grad);
    }

    #[test]
    fn multinomial_gradient_vanishes_at_optimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let x = Array2::from_shape_fn((60, 2), |_| rng.gen_range(-1.0..1.0));
        let y: Vec<usize> = (0..60).map(|i| i % 3).collect();
        let c = 2.0;
        let m = logistic_fit(&x, &y, c).unwrap();
        assert!(m.converged);
        let p = m.predict_proba(&x).unwrap();
        let mut grad = vec![0.0; 3 * 2 + 3];
        for i in 0..60 {
            for cl in 0..3 {
                let r = p[[i, cl]] - if y[i] == cl { 1.0 } else { 0.0 };
                for j in 0..2 {
                    grad[cl * 2 + j] += r * x[[i, j]];
                }
                grad[6 + cl] += r;
            }
        }
        for cl in 0..3 {
            for j in 0..2 {
                grad[cl * 2 + j] += m.weights[[cl, j]] / c;
            }
        }
        assert!(grad.iter().all(|g| g.abs() <= 1e-5), "gradient {:?}", grad);
    }

    #[test]
    fn rejects_single_class() {
        let x = array![[1.0], [2.0]];
        assert!(matches!(
            logistic_fit(&x, &[3, 3], 1.0),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn class_ids_can_be_arbitrary() {
        let x = array![[-1.0], [-2.0], [1.0], [2.0]];
        let m = logistic_fit(&x, &[7, 7, 42, 42], 1.0).unwrap();
        assert_eq!(m.classes, vec![7, 42]);
        let p = m.predict_proba(&x).unwrap();
        assert!(p[[0, 0]] > 0.5);
        assert!(p[[2, 1]] > 0.5);
    }
}
