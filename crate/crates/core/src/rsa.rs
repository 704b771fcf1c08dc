//! Representational similarity analysis: cosine similarity structure,
//! pairwise Spearman comparison of representations, MDS projection, and
//! data-type summaries.

use std::collections::BTreeMap;

use ndarray::Array2;
use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::kernels::{classical_mds, spearman};
use crate::store::{DataType, Representation};
use crate::vocab::{subset_representation, VocabSet};

/// A representational similarity matrix: pairwise cosine similarities over
/// a vocabulary, stored as the packed upper triangle (row-major, diagonal
/// excluded, length n(n−1)/2).
#[derive(Debug, Clone, PartialEq)]
pub struct Rsm {
    vocab: VocabSet,
    upper: Vec<f64>,
}

impl Rsm {
    pub fn vocab(&self) -> &VocabSet {
        &self.vocab
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Similarity of the i-th and j-th vocabulary words.
    pub fn similarity(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 1.0;
        }
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        let n = self.vocab.len();
        self.upper[i * (2 * n - i - 1) / 2 + (j - i - 1)]
    }
}

/// Builds the cosine RSM of a representation: rows are L2-normalized and
/// the upper triangle of M̃M̃ᵀ is packed. Requires ≥ 3 words; a zero-norm
/// row is an error naming the offending word.
pub fn representational_similarity_matrix(rep: &Representation) -> Result<Rsm> {
    let n = rep.len();
    let d = rep.dim();
    if n < 3 {
        return Err(Error::CommonVocabularyTooSmall {
            size: n,
            required: 3,
        });
    }
    let m = rep.matrix();
    let mut normalized = Array2::zeros((n, d));
    for i in 0..n {
        let mut sq = 0.0;
        for j in 0..d {
            sq += m[[i, j]] * m[[i, j]];
        }
        if sq == 0.0 {
            return Err(Error::ZeroNormRow {
                word: rep.vocab().words()[i].clone(),
            });
        }
        let norm = sq.sqrt();
        for j in 0..d {
            normalized[[i, j]] = m[[i, j]] / norm;
        }
    }

    let rows: Vec<Vec<f64>> = (0..n - 1)
        .into_par_iter()
        .map(|i| {
            let mut row = Vec::with_capacity(n - i - 1);
            for j in i + 1..n {
                let mut dot = 0.0;
                for t in 0..d {
                    dot += normalized[[i, t]] * normalized[[j, t]];
                }
                row.push(dot.clamp(-1.0, 1.0));
            }
            row
        })
        .collect();
    let upper: Vec<f64> = rows.into_iter().flatten().collect();
    debug_assert_eq!(upper.len(), n * (n - 1) / 2);
    Ok(Rsm {
        vocab: rep.vocab().clone(),
        upper,
    })
}

/// Spearman correlation between two representations' similarity structures
/// over their common vocabulary. Both sides are subset to the (sorted)
/// intersection so the packed triangles align element-for-element. Returns
/// (rho, common vocabulary size).
pub fn rsa_correlation(rep_i: &Representation, rep_j: &Representation) -> Result<(f64, usize)> {
    let common = rep_i.vocab().intersection(rep_j.vocab());
    if common.len() < 3 {
        return Err(Error::CommonVocabularyTooSmall {
            size: common.len(),
            required: 3,
        });
    }
    let sub_i = subset_representation(rep_i, &common)?;
    let sub_j = subset_representation(rep_j, &common)?;
    let rsm_i = representational_similarity_matrix(&sub_i)?;
    let rsm_j = representational_similarity_matrix(&sub_j)?;
    let rho = spearman(rsm_i.upper(), rsm_j.upper())?;
    Ok((rho, common.len()))
}

/// Pairwise RSA results over a list of representations, input order
/// preserved. Cells for pairs that fail (too little overlap, degenerate
/// similarity structure) are missing rather than fatal.
#[derive(Debug, Clone)]
pub struct RsaMatrix {
    names: Vec<String>,
    labels: Vec<DataType>,
    rho: Vec<Option<f64>>,
    pair_vocab_sizes: Vec<usize>,
    n: usize,
}

impl RsaMatrix {
    /// Assembles a matrix from row-major n×n cell vectors, e.g. when
    /// reloading exported results.
    pub fn from_parts(
        names: Vec<String>,
        labels: Vec<DataType>,
        rho: Vec<Option<f64>>,
        pair_vocab_sizes: Vec<usize>,
    ) -> Self {
        let n = names.len();
        debug_assert_eq!(rho.len(), n * n);
        debug_assert_eq!(pair_vocab_sizes.len(), n * n);
        RsaMatrix {
            names,
            labels,
            rho,
            pair_vocab_sizes,
            n,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn labels(&self) -> &[DataType] {
        &self.labels
    }

    pub fn rho(&self, i: usize, j: usize) -> Option<f64> {
        self.rho[i * self.n + j]
    }

    pub fn pair_vocab_size(&self, i: usize, j: usize) -> usize {
        self.pair_vocab_sizes[i * self.n + j]
    }

    pub fn missing_pairs(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.rho(i, j).is_none() {
                    out.push((self.names[i].clone(), self.names[j].clone()));
                }
            }
        }
        out
    }

    pub fn is_complete(&self) -> bool {
        self.rho.iter().all(|c| c.is_some())
    }

    /// Square csv: header "name,<names…>", one row per representation,
    /// missing cells empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("name");
        for name in &self.names {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for i in 0..self.n {
            out.push_str(&self.names[i]);
            for j in 0..self.n {
                out.push(',');
                if let Some(v) = self.rho(i, j) {
                    out.push_str(&v.to_string());
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rho: Vec<Vec<serde_json::Value>> = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| match self.rho(i, j) {
                        Some(v) => json!(v),
                        None => serde_json::Value::Null,
                    })
                    .collect()
            })
            .collect();
        let sizes: Vec<Vec<usize>> = (0..self.n)
            .map(|i| (0..self.n).map(|j| self.pair_vocab_size(i, j)).collect())
            .collect();
        json!({
            "names": self.names,
            "labels": self.labels.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
            "rho": rho,
            "pair_vocab_sizes": sizes,
        })
    }
}

/// Computes all unordered pairwise RSA correlations. Pairs run in parallel;
/// results land by index, so output is independent of scheduling.
pub fn pairwise_rsa(reps: &[Representation]) -> Result<RsaMatrix> {
    let n = reps.len();
    if n < 2 {
        return Err(Error::InvalidArgument(
            "pairwise rsa needs at least two representations".into(),
        ));
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let computed: Vec<((usize, usize), Option<(f64, usize)>)> = pairs
        .par_iter()
        .map(|&(i, j)| ((i, j), rsa_correlation(&reps[i], &reps[j]).ok()))
        .collect();

    let mut rho = vec![None; n * n];
    let mut sizes = vec![0usize; n * n];
    for i in 0..n {
        rho[i * n + i] = Some(1.0);
        sizes[i * n + i] = reps[i].len();
    }
    for ((i, j), cell) in computed {
        if let Some((r, size)) = cell {
            rho[i * n + j] = Some(r);
            rho[j * n + i] = Some(r);
            sizes[i * n + j] = size;
            sizes[j * n + i] = size;
        }
    }
    Ok(RsaMatrix::from_parts(
        reps.iter().map(|r| r.name().to_string()).collect(),
        reps.iter().map(|r| r.data_type()).collect(),
        rho,
        sizes,
    ))
}

/// Classical MDS of the dissimilarity matrix D = 1 − rho. Errors if any
/// cell is missing.
pub fn mds_projection(rsa: &RsaMatrix, dims: usize) -> Result<Array2<f64>> {
    let n = rsa.len();
    let mut d = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let rho = rsa.rho(i, j).ok_or_else(|| Error::MissingCells {
                context: format!(
                    "rsa cell ({}, {}) is missing",
                    rsa.names()[i],
                    rsa.names()[j]
                ),
            })?;
            d[[i, j]] = (1.0 - rho).max(0.0);
        }
    }
    classical_mds(&d, dims)
}

/// Mean rho per unordered data-type combination, over off-diagonal pairs.
/// Missing cells are skipped; absent combinations are omitted.
pub fn within_between_summary(rsa: &RsaMatrix) -> BTreeMap<(DataType, DataType), f64> {
    let mut sums: BTreeMap<(DataType, DataType), (f64, f64)> = BTreeMap::new();
    let n = rsa.len();
    for i in 0..n {
        for j in i + 1..n {
            let Some(rho) = rsa.rho(i, j) else { continue };
            let (a, b) = (rsa.labels()[i], rsa.labels()[j]);
            let key = if a <= b { (a, b) } else { (b, a) };
            let slot = sums.entry(key).or_insert((0.0, 0.0));
            slot.0 += rho;
            slot.1 += 1.0;
        }
    }
    sums.into_iter()
        .map(|(k, (sum, cnt))| (k, sum / cnt))
        .collect()
}

/// For each representation, the fraction of its k highest-rho neighbors
/// sharing its data type, averaged per type. Rho ties break toward earlier
/// input order. Proportions are reported in [0, 1].
pub fn same_type_neighbor_affinity(
    rsa: &RsaMatrix,
    k: usize,
) -> Result<BTreeMap<DataType, f64>> {
    let n = rsa.len();
    if k == 0 || k >= n {
        return Err(Error::InvalidArgument(format!(
            "affinity needs 1 ≤ k < {} representations, got k={}",
            n, k
        )));
    }
    let mut sums: BTreeMap<DataType, (f64, f64)> = BTreeMap::new();
    for i in 0..n {
        let mut neighbors: Vec<(usize, f64)> = (0..n)
            .filter(|&j| j != i)
            .filter_map(|j| rsa.rho(i, j).map(|r| (j, r)))
            .collect();
        if neighbors.len() < k {
            return Err(Error::MissingCells {
                context: format!(
                    "representation {} has only {} comparable neighbors",
                    rsa.names()[i],
                    neighbors.len()
                ),
            });
        }
        neighbors.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        let same = neighbors[..k]
            .iter()
            .filter(|(j, _)| rsa.labels()[*j] == rsa.labels()[i])
            .count();
        let slot = sums.entry(rsa.labels()[i]).or_insert((0.0, 0.0));
        slot.0 += same as f64 / k as f64;
        slot.1 += 1.0;
    }
    Ok(sums
        .into_iter()
        .map(|(t, (sum, cnt))| (t, sum / cnt))
        .collect())
}
