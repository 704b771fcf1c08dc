//! Skip-gram embeddings trained with a full softmax over responses.

use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::kernels::log_sum_exp;
use crate::store::{DataType, Representation};
use crate::vocab::VocabSet;

/// Index-encoded (cue, response) observations over sorted vocabularies.
#[derive(Debug, Clone)]
pub struct SgPairs {
    pub cues: VocabSet,
    pub responses: VocabSet,
    pub pairs: Vec<(usize, usize)>,
}

impl SgPairs {
    pub fn from_words(pairs: &[(String, String)]) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidArgument("no training pairs".into()));
        }
        let cues = VocabSet::new(pairs.iter().map(|(c, _)| c.clone()));
        let responses = VocabSet::new(pairs.iter().map(|(_, r)| r.clone()));
        let indexed = pairs
            .iter()
            .map(|(c, r)| {
                (
                    cues.index_of(c).expect("cue from pairs"),
                    responses.index_of(r).expect("response from pairs"),
                )
            })
            .collect();
        Ok(SgPairs {
            cues,
            responses,
            pairs: indexed,
        })
    }
}

/// Result of skip-gram softmax training: both embedding tables plus the
/// mean training loss recorded at each epoch.
#[derive(Debug, Clone)]
pub struct SgTrainOutcome {
    pub input: Representation,
    pub output: Representation,
    pub epoch_losses: Vec<f64>,
}

/// Mean negative log-likelihood −log softmax(input(cue)·output(·))[response]
/// over the given index pairs.
pub fn sg_softmax_loss(
    input: &Array2<f64>,
    output: &Array2<f64>,
    pairs: &[(usize, usize)],
) -> f64 {
    let dim = input.ncols();
    let n_resp = output.nrows();
    let mut logits = vec![0.0; n_resp];
    let mut total = 0.0;
    for &(ci, ri) in pairs {
        for (j, logit) in logits.iter_mut().enumerate() {
            let mut z = 0.0;
            for t in 0..dim {
                z += input[[ci, t]] * output[[j, t]];
            }
            *logit = z;
        }
        total += log_sum_exp(&logits) - logits[ri];
    }
    total / pairs.len() as f64
}

/// Analytic gradient of [`sg_softmax_loss`] with respect to both tables.
pub fn sg_softmax_gradient(
    input: &Array2<f64>,
    output: &Array2<f64>,
    pairs: &[(usize, usize)],
) -> (Array2<f64>, Array2<f64>) {
    let dim = input.ncols();
    let n_resp = output.nrows();
    let mut g_in = Array2::zeros(input.dim());
    let mut g_out = Array2::zeros(output.dim());
    let mut logits = vec![0.0; n_resp];
    let scale = 1.0 / pairs.len() as f64;
    for &(ci, ri) in pairs {
        for (j, logit) in logits.iter_mut().enumerate() {
            let mut z = 0.0;
            for t in 0..dim {
                z += input[[ci, t]] * output[[j, t]];
            }
            *logit = z;
        }
        let lse = log_sum_exp(&logits);
        for j in 0..n_resp {
            let coef = ((logits[j] - lse).exp() - if j == ri { 1.0 } else { 0.0 }) * scale;
            for t in 0..dim {
                g_in[[ci, t]] += coef * output[[j, t]];
                g_out[[j, t]] += coef * input[[ci, t]];
            }
        }
    }
    (g_in, g_out)
}

fn init_tables(
    rng: &mut ChaCha8Rng,
    n_cues: usize,
    n_responses: usize,
    dim: usize,
) -> (Array2<f64>, Array2<f64>) {
    let half = 0.5 / dim as f64;
    let mut fill = |rows: usize| {
        let mut m = Array2::zeros((rows, dim));
        for i in 0..rows {
            for t in 0..dim {
                m[[i, t]] = rng.gen_range(-half..half);
            }
        }
        m
    };
    let input = fill(n_cues);
    let output = fill(n_responses);
    (input, output)
}

/// Trains cue (input) and response (output) embeddings by stochastic
/// gradient descent on the full-softmax skip-gram objective. The learning
/// rate decays linearly toward zero across all updates; shuffling and
/// initialization draw from a single seeded stream, so equal seeds give
/// bit-identical results.
pub fn sg_softmax_train(
    word_pairs: &[(String, String)],
    dim: usize,
    epochs: usize,
    learning_rate: f64,
    seed: u64,
) -> Result<SgTrainOutcome> {
    if dim == 0 {
        return Err(Error::InvalidArgument("embedding dim must be ≥ 1".into()));
    }
    if epochs == 0 {
        return Err(Error::InvalidArgument("need at least one epoch".into()));
    }
    if !learning_rate.is_finite() || learning_rate <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "learning rate must be positive, got {learning_rate}"
        )));
    }
    let data = SgPairs::from_words(word_pairs)?;
    let n_pairs = data.pairs.len();
    let n_resp = data.responses.len();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut input, mut output) = init_tables(&mut rng, data.cues.len(), n_resp, dim);

    let total_updates = (epochs * n_pairs) as f64;
    let mut step = 0usize;
    let mut order: Vec<usize> = (0..n_pairs).collect();
    let mut logits = vec![0.0; n_resp];
    let mut cue_row = vec![0.0; dim];
    let mut epoch_losses = Vec::with_capacity(epochs);

    for _ in 0..epochs {
        order.shuffle(&mut rng);
        let mut loss_sum = 0.0;
        for &p in &order {
            let (ci, ri) = data.pairs[p];
            for t in 0..dim {
                cue_row[t] = input[[ci, t]];
            }
            for (j, logit) in logits.iter_mut().enumerate() {
                let mut z = 0.0;
                for t in 0..dim {
                    z += cue_row[t] * output[[j, t]];
                }
                *logit = z;
            }
            let lse = log_sum_exp(&logits);
            loss_sum += lse - logits[ri];

            let lr = learning_rate * (1.0 - step as f64 / total_updates);
            // gradient wrt the cue row uses pre-update output rows
            let mut g_in = vec![0.0; dim];
            for j in 0..n_resp {
                let coef = (logits[j] - lse).exp() - if j == ri { 1.0 } else { 0.0 };
                for t in 0..dim {
                    g_in[t] += coef * output[[j, t]];
                    output[[j, t]] -= lr * coef * cue_row[t];
                }
            }
            for t in 0..dim {
                input[[ci, t]] -= lr * g_in[t];
            }
            step += 1;
        }
        epoch_losses.push(loss_sum / n_pairs as f64);
    }

    Ok(SgTrainOutcome {
        input: Representation::from_parts(
            "sg-input".into(),
            DataType::Behavior,
            data.cues,
            input,
        ),
        output: Representation::from_parts(
            "sg-output".into(),
            DataType::Behavior,
            data.responses,
            output,
        ),
        epoch_losses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_pairs() -> Vec<(String, String)> {
        let mut pairs = Vec::new();
        for (c, r, times) in [
            ("sun", "warm", 4),
            ("sun", "bright", 3),
            ("ice", "cold", 4),
            ("ice", "slip", 2),
        ] {
            for _ in 0..times {
                pairs.push((c.to_string(), r.to_string()));
            }
        }
        pairs
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let data = SgPairs::from_words(&toy_pairs()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (mut input, mut output) = init_tables(&mut rng, data.cues.len(), data.responses.len(), 3);
        let (g_in, g_out) = sg_softmax_gradient(&input, &output, &data.pairs);

        let h = 1e-5;
        for i in 0..input.nrows() {
            for t in 0..input.ncols() {
                let orig = input[[i, t]];
                input[[i, t]] = orig + h;
                let up = sg_softmax_loss(&input, &output, &data.pairs);
                input[[i, t]] = orig - h;
                let down = sg_softmax_loss(&input, &output, &data.pairs);
                input[[i, t]] = orig;
                let numeric = (up - down) / (2.0 * h);
                let denom = g_in[[i, t]].abs().max(numeric.abs()).max(1e-10);
                assert!(
                    ((g_in[[i, t]] - numeric) / denom).abs() <= 1e-5,
                    "input grad ({i},{t}): analytic {} numeric {}",
                    g_in[[i, t]],
                    numeric
                );
            }
        }
        for j in 0..output.nrows() {
            for t in 0..output.ncols() {
                let orig = output[[j, t]];
                output[[j, t]] = orig + h;
                let up = sg_softmax_loss(&input, &output, &data.pairs);
                output[[j, t]] = orig - h;
                let down = sg_softmax_loss(&input, &output, &data.pairs);
                output[[j, t]] = orig;
                let numeric = (up - down) / (2.0 * h);
                let denom = g_out[[j, t]].abs().max(numeric.abs()).max(1e-10);
                assert!(((g_out[[j, t]] - numeric) / denom).abs() <= 1e-5);
            }
        }
    }

    #[test]
    fn softmax_rows_sum_to_one() {
        let data = SgPairs::from_words(&toy_pairs()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (input, output) = init_tables(&mut rng, data.cues.len(), data.responses.len(), 4);
        for ci in 0..input.nrows() {
            let logits: Vec<f64> = (0..output.nrows())
                .map(|j| (0..4).map(|t| input[[ci, t]] * output[[j, t]]).sum())
                .collect();
            let lse = log_sum_exp(&logits);
            let total: f64 = logits.iter().map(|z| (z - lse).exp()).sum();
            assert!((total - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn loss_decreases_epoch_over_epoch_after_warmup() {
        // 2 cues with disjoint deterministic responses
        let mut pairs = Vec::new();
        for _ in 0..6 {
            pairs.push(("left".to_string(), "red".to_string()));
            pairs.push(("right".to_string(), "blue".to_string()));
        }
        let out = sg_softmax_train(&pairs, 4, 50, 0.5, 11).unwrap();
        assert_eq!(out.epoch_losses.len(), 50);
        for i in 3..50 {
            assert!(
                out.epoch_losses[i] < out.epoch_losses[i - 1],
                "loss rose at epoch {}: {} -> {}",
                i + 1,
                out.epoch_losses[i - 1],
                out.epoch_losses[i]
            );
        }
    }

    #[test]
    fn held_out_loss_improves_over_initialization() {
        let pairs = toy_pairs();
        let held_out = vec![
            ("sun".to_string(), "warm".to_string()),
            ("ice".to_string(), "cold".to_string()),
        ];
        let seed = 21;
        let out = sg_softmax_train(&pairs, 4, 40, 0.3, seed).unwrap();

        let data = SgPairs::from_words(&pairs).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (init_in, init_out) = init_tables(&mut rng, data.cues.len(), data.responses.len(), 4);

        let held = SgPairs::from_words(&held_out).unwrap();
        let map_pairs: Vec<(usize, usize)> = held_out
            .iter()
            .map(|(c, r)| {
                (
                    data.cues.index_of(c).unwrap(),
                    data.responses.index_of(r).unwrap(),
                )
            })
            .collect();
        drop(held);
        let init_loss = sg_softmax_loss(&init_in, &init_out, &map_pairs);
        let trained_loss =
            sg_softmax_loss(out.input.matrix(), out.output.matrix(), &map_pairs);
        assert!(
            trained_loss < init_loss,
            "held-out loss {} vs initial {}",
            trained_loss,
            init_loss
        );
    }

    #[test]
    fn training_is_deterministic_in_the_seed() {
        let pairs = toy_pairs();
        let a = sg_softmax_train(&pairs, 3, 5, 0.2, 7).unwrap();
        let b = sg_softmax_train(&pairs, 3, 5, 0.2, 7).unwrap();
        assert_eq!(a.input.matrix(), b.input.matrix());
        assert_eq!(a.output.matrix(), b.output.matrix());
        assert_eq!(a.epoch_losses, b.epoch_losses);
        let c = sg_softmax_train(&pairs, 3, 5, 0.2, 8).unwrap();
        assert_ne!(a.input.matrix(), c.input.matrix());
    }

    #[test]
    fn rejects_empty_and_invalid_input() {
        assert!(sg_softmax_train(&[], 3, 5, 0.2, 7).is_err());
        let pairs = toy_pairs();
        assert!(sg_softmax_train(&pairs, 0, 5, 0.2, 7).is_err());
        assert!(sg_softmax_train(&pairs, 3, 0, 0.2, 7).is_err());
        assert!(sg_softmax_train(&pairs, 3, 5, 0.0, 7).is_err());
    }
}
