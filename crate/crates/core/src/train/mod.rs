//! Training of behavior-style representations from raw behavioral data:
//! PPMI-SVD of cue-response counts, SVD of aggregated similarity judgments,
//! and skip-gram softmax embeddings.

mod sgsoftmax;

pub use sgsoftmax::{
    sg_softmax_gradient, sg_softmax_loss, sg_softmax_train, SgPairs, SgTrainOutcome,
};

use std::collections::BTreeMap;
use std::path::Path;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::kernels::truncated_svd;
use crate::store::{DataType, Representation};
use crate::vocab::{csv_error, VocabSet};

/// Cue-response co-occurrence counts, e.g. from free-association data.
#[derive(Debug, Clone)]
pub struct CueResponseCounts {
    cues: VocabSet,
    responses: VocabSet,
    counts: Array2<f64>,
    total: f64,
}

impl CueResponseCounts {
    /// Aggregates (cue, response, count) triplets; repeated pairs sum.
    pub fn from_triplets<I>(triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (String, String, f64)>,
    {
        let mut acc: BTreeMap<(String, String), f64> = BTreeMap::new();
        for (cue, response, count) in triplets {
            if !count.is_finite() || count < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "count for ({cue:?}, {response:?}) is {count}"
                )));
            }
            *acc.entry((cue, response)).or_insert(0.0) += count;
        }
        let cues = VocabSet::new(acc.keys().map(|(c, _)| c.clone()));
        let responses = VocabSet::new(acc.keys().map(|(_, r)| r.clone()));
        if cues.is_empty() {
            return Err(Error::InvalidArgument("no cue-response data".into()));
        }
        let mut counts = Array2::zeros((cues.len(), responses.len()));
        let mut total = 0.0;
        for ((cue, response), count) in acc {
            let i = cues.index_of(&cue).expect("cue from keys");
            let j = responses.index_of(&response).expect("response from keys");
            counts[[i, j]] = count;
            total += count;
        }
        if total <= 0.0 {
            return Err(Error::InvalidArgument(
                "cue-response counts sum to zero".into(),
            ));
        }
        Ok(CueResponseCounts {
            cues,
            responses,
            counts,
            total,
        })
    }

    /// Reads a csv file with columns `cue,response,count`.
    pub fn from_csv(path: &Path) -> Result<Self> {
        let mut reader = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
        let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
        if headers.len() != 3
            || &headers[0] != "cue"
            || &headers[1] != "response"
            || &headers[2] != "count"
        {
            return Err(Error::MalformedLine {
                path: path.display().to_string(),
                line: 1,
                detail: format!("expected header \"cue,response,count\", found {:?}", headers),
            });
        }
        let mut triplets = Vec::new();
        for (idx, record) in reader.records().enumerate() {
            let record = record.map_err(|e| csv_error(path, e))?;
            let count: f64 = record.get(2).unwrap_or("").parse().map_err(|_| {
                Error::MalformedLine {
                    path: path.display().to_string(),
                    line: idx + 2,
                    detail: format!("count {:?} is not a number", record.get(2).unwrap_or("")),
                }
            })?;
            triplets.push((
                record.get(0).unwrap_or("").to_string(),
                record.get(1).unwrap_or("").to_string(),
                count,
            ));
        }
        CueResponseCounts::from_triplets(triplets)
    }

    pub fn cues(&self) -> &VocabSet {
        &self.cues
    }

    pub fn responses(&self) -> &VocabSet {
        &self.responses
    }

    pub fn counts(&self) -> &Array2<f64> {
        &self.counts
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    /// Expands the table back into integer-repeated (cue, response) pairs
    /// for samplers that consume individual observations. All counts must
    /// be whole numbers.
    pub fn to_pairs(&self) -> Result<Vec<(String, String)>> {
        let mut pairs = Vec::new();
        for i in 0..self.cues.len() {
            for j in 0..self.responses.len() {
                let c = self.counts[[i, j]];
                if c == 0.0 {
                    continue;
                }
                if c.fract() != 0.0 {
                    return Err(Error::InvalidArgument(format!(
                        "count {} for ({:?}, {:?}) is not an integer",
                        c,
                        self.cues.words()[i],
                        self.responses.words()[j]
                    )));
                }
                for _ in 0..c as usize {
                    pairs.push((
                        self.cues.words()[i].clone(),
                        self.responses.words()[j].clone(),
                    ));
                }
            }
        }
        Ok(pairs)
    }
}

/// Positive pointwise mutual information of a count matrix:
/// max(0, ln[p(w,c) / (p(w)p(c))]), computed as (count·total)/(row·col) so
/// independent counts give exact zeros. Zero-count cells stay zero.
pub fn ppmi(counts: &CueResponseCounts) -> Array2<f64> {
    let (n, m) = counts.counts.dim();
    let mut row_sums = vec![0.0; n];
    let mut col_sums = vec![0.0; m];
    for i in 0..n {
        for j in 0..m {
            let c = counts.counts[[i, j]];
            row_sums[i] += c;
            col_sums[j] += c;
        }
    }
    let mut out = Array2::zeros((n, m));
    for i in 0..n {
        for j in 0..m {
            let c = counts.counts[[i, j]];
            if c == 0.0 {
                continue;
            }
            let ratio = (c * counts.total) / (row_sums[i] * col_sums[j]);
            let value = ratio.ln();
            if value > 0.0 {
                out[[i, j]] = value;
            }
        }
    }
    out
}

/// Embeds cues as rows of U_k·diag(s_k) from the truncated SVD of the PPMI
/// matrix. The result is named "ppmi-svd" (rename with
/// [`Representation::with_name`]) and typed as behavior data.
pub fn ppmi_svd_embed(counts: &CueResponseCounts, k: usize) -> Result<Representation> {
    let matrix = ppmi(counts);
    let (u, s, _) = truncated_svd(&matrix, k)?;
    let mut emb = Array2::zeros((u.nrows(), k));
    for i in 0..u.nrows() {
        for t in 0..k {
            emb[[i, t]] = u[[i, t]] * s[t];
        }
    }
    Ok(Representation::from_parts(
        "ppmi-svd".into(),
        DataType::Behavior,
        counts.cues.clone(),
        emb,
    ))
}

/// One similarity/relatedness judgment dataset on a declared scale.
/// Pair keys are stored unordered; values reported for both orders of the
/// same pair are averaged.
#[derive(Debug, Clone)]
pub struct SimilarityJudgments {
    name: String,
    scale_min: f64,
    scale_max: f64,
    pairs: BTreeMap<(String, String), f64>,
}

impl SimilarityJudgments {
    pub fn new<I>(name: String, scale_min: f64, scale_max: f64, records: I) -> Result<Self>
    where
        I: IntoIterator<Item = (String, String, f64)>,
    {
        if !(scale_min.is_finite() && scale_max.is_finite()) || scale_min >= scale_max {
            return Err(Error::InvalidArgument(format!(
                "scale bounds [{scale_min}, {scale_max}] are invalid"
            )));
        }
        let mut sums: BTreeMap<(String, String), (f64, f64)> = BTreeMap::new();
        for (a, b, value) in records {
            if a == b {
                return Err(Error::InvalidArgument(format!(
                    "self-pair ({a:?}, {a:?}) in dataset {name:?}"
                )));
            }
            if !value.is_finite() || value < scale_min || value > scale_max {
                return Err(Error::InvalidArgument(format!(
                    "value {value} for ({a:?}, {b:?}) outside scale [{scale_min}, {scale_max}]"
                )));
            }
            let key = if a <= b { (a, b) } else { (b, a) };
            let slot = sums.entry(key).or_insert((0.0, 0.0));
            slot.0 += value;
            slot.1 += 1.0;
        }
        if sums.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "similarity dataset {name:?} has no pairs"
            )));
        }
        let pairs = sums
            .into_iter()
            .map(|(k, (sum, cnt))| (k, sum / cnt))
            .collect();
        Ok(SimilarityJudgments {
            name,
            scale_min,
            scale_max,
            pairs,
        })
    }

    /// Reads a csv file with columns `word1,word2,value,scale_min,scale_max`.
    /// Every row must declare the same scale bounds.
    pub fn from_csv(path: &Path, name: String) -> Result<Self> {
        let mut reader = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
        let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
        let expected = ["word1", "word2", "value", "scale_min", "scale_max"];
        if headers.len() != 5 || headers.iter().zip(expected).any(|(h, e)| h != e) {
            return Err(Error::MalformedLine {
                path: path.display().to_string(),
                line: 1,
                detail: format!("expected header {:?}, found {:?}", expected.join(","), headers),
            });
        }
        let mut bounds: Option<(f64, f64)> = None;
        let mut records = Vec::new();
        for (idx, record) in reader.records().enumerate() {
            let record = record.map_err(|e| csv_error(path, e))?;
            let lineno = idx + 2;
            let parse = |field: usize| -> Result<f64> {
                record
                    .get(field)
                    .unwrap_or("")
                    .parse()
                    .map_err(|_| Error::MalformedLine {
                        path: path.display().to_string(),
                        line: lineno,
                        detail: format!(
                            "field {:?} is not a number",
                            record.get(field).unwrap_or("")
                        ),
                    })
            };
            let value = parse(2)?;
            let lo = parse(3)?;
            let hi = parse(4)?;
            match bounds {
                None => bounds = Some((lo, hi)),
                Some(b) if b != (lo, hi) => {
                    return Err(Error::MalformedLine {
                        path: path.display().to_string(),
                        line: lineno,
                        detail: format!(
                            "scale bounds ({lo}, {hi}) differ from earlier rows {b:?}"
                        ),
                    });
                }
                _ => {}
            }
            records.push((
                record.get(0).unwrap_or("").to_string(),
                record.get(1).unwrap_or("").to_string(),
                value,
            ));
        }
        let (lo, hi) = bounds.ok_or_else(|| Error::InvalidArgument(format!(
            "similarity file {} has no rows",
            path.display()
        )))?;
        SimilarityJudgments::new(name, lo, hi, records)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Normalized value for an unordered pair, if present: min-max scaled
    /// to [0,1] by the declared bounds.
    /// Sorted unique words appearing in any pair.
    pub fn words(&self) -> VocabSet {
        let mut words: Vec<String> = self
            .pairs
            .keys()
            .flat_map(|(a, b)| [a.clone(), b.clone()])
            .collect();
        words.sort();
        words.dedup();
        VocabSet::new(words)
    }

    pub fn normalized(&self, a: &str, b: &str) -> Option<f64> {
        let key = if a <= b {
            (a.to_string(), b.to_string())
        } else {
            (b.to_string(), a.to_string())
        };
        self.pairs
            .get(&key)
            .map(|v| (v - self.scale_min) / (self.scale_max - self.scale_min))
    }
}

/// A symmetric similarity matrix that may have unobserved cells.
#[derive(Debug, Clone)]
pub struct AggregatedSimilarity {
    pub vocab: VocabSet,
    pub values: Array2<f64>,
    pub observed: Array2<bool>,
}

/// Merges judgment datasets over `vocab`: each dataset is min-max
/// normalized by its declared scale, overlapping pairs are averaged, and
/// the diagonal is fixed at 1. Cells no dataset covers are left unobserved.
/// A vocab word with no pairs at all is an error.
pub fn aggregate_similarity(
    datasets: &[SimilarityJudgments],
    vocab: &VocabSet,
) -> Result<AggregatedSimilarity> {
    if datasets.is_empty() {
        return Err(Error::InvalidArgument("no similarity datasets".into()));
    }
    let n = vocab.len();
    let mut values = Array2::zeros((n, n));
    let mut observed = Array2::from_elem((n, n), false);
    let words = vocab.words();
    for i in 0..n {
        values[[i, i]] = 1.0;
        observed[[i, i]] = true;
        for j in i + 1..n {
            let mut sum = 0.0;
            let mut cnt = 0.0;
            for ds in datasets {
                if let Some(v) = ds.normalized(&words[i], &words[j]) {
                    sum += v;
                    cnt += 1.0;
                }
            }
            if cnt > 0.0 {
                let v = sum / cnt;
                values[[i, j]] = v;
                values[[j, i]] = v;
                observed[[i, j]] = true;
                observed[[j, i]] = true;
            }
        }
    }
    for i in 0..n {
        let covered = (0..n).any(|j| j != i && observed[[i, j]]);
        if !covered {
            return Err(Error::InvalidArgument(format!(
                "word {:?} has no similarity pairs in any dataset",
                words[i]
            )));
        }
    }
    Ok(AggregatedSimilarity {
        vocab: vocab.clone(),
        values,
        observed,
    })
}

/// Embeds words as rows of U_k·diag(s_k) from the SVD of the similarity
/// matrix, imputing unobserved cells with the mean of observed off-diagonal
/// entries first. Returns the representation (named "sim-svd", behavior
/// type) and the number of imputed word pairs.
pub fn similarity_svd_embed(
    agg: &AggregatedSimilarity,
    k: usize,
) -> Result<(Representation, usize)> {
    let n = agg.vocab.len();
    let mut sum = 0.0;
    let mut cnt = 0.0;
    let mut missing_pairs = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            if agg.observed[[i, j]] {
                sum += agg.values[[i, j]];
                cnt += 1.0;
            } else {
                missing_pairs += 1;
            }
        }
    }
    let fill = if cnt > 0.0 { sum / cnt } else { 0.0 };
    let mut complete = agg.values.clone();
    for i in 0..n {
        for j in 0..n {
            if !agg.observed[[i, j]] {
                complete[[i, j]] = fill;
            }
        }
    }

    let (u, s, _) = truncated_svd(&complete, k)?;
    let mut emb = Array2::zeros((n, k));
    for i in 0..n {
        for t in 0..k {
            emb[[i, t]] = u[[i, t]] * s[t];
        }
    }
    Ok((
        Representation::from_parts("sim-svd".into(), DataType::Behavior, agg.vocab.clone(), emb),
        missing_pairs,
    ))
}
