//! Representational content analysis: nested cross-validated linear probes
//! of representations against word norms, plus category-level aggregation.
//!
//! Numeric norms use ridge regression scored with R²; categorical norms use
//! L2-regularized logistic regression scored with McFadden's pseudo-R²
//! against a null model fit on the training fold. Penalties are selected by
//! an inner cross-validation loop on each outer training fold.

use std::collections::BTreeMap;

use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::kernels::{logistic_fit, mcfadden_pseudo_r2, r2_score, ridge_fit};
use crate::store::{DataType, NormKind, NormTable, NormValue, Representation};

pub const SKIP_INSUFFICIENT_SAMPLES: &str = "insufficient-samples";
pub const SKIP_RARE_CLASS: &str = "rare-class";
pub const SKIP_DEGENERATE_TARGET: &str = "degenerate-target";

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeConfig {
    pub outer_folds: usize,
    pub inner_folds: usize,
    /// Regularization strengths, ascending. Logistic probes use C = 1/alpha.
    pub alpha_grid: Vec<f64>,
    /// Minimum size of every outer test fold; smaller common vocabularies
    /// skip the probe.
    pub min_test_samples: usize,
    pub seed: u64,
    /// Z-score feature columns using training-fold statistics before
    /// fitting. Off by default: probes see raw features, centered only
    /// through the intercept.
    pub standardize: bool,
}

pub fn default_alpha_grid() -> Vec<f64> {
    (-5..=5).map(|e| 10f64.powi(e)).collect()
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            outer_folds: 5,
            inner_folds: 5,
            alpha_grid: default_alpha_grid(),
            min_test_samples: 20,
            seed: 0,
            standardize: false,
        }
    }
}

impl ProbeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.outer_folds < 2 || self.inner_folds < 2 {
            return Err(Error::InvalidArgument(
                "probe config needs at least 2 outer and inner folds".into(),
            ));
        }
        if self.min_test_samples < 1 {
            return Err(Error::InvalidArgument(
                "min_test_samples must be at least 1".into(),
            ));
        }
        if self.alpha_grid.is_empty() {
            return Err(Error::InvalidArgument("alpha grid is empty".into()));
        }
        for w in self.alpha_grid.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::InvalidArgument(
                    "alpha grid must be strictly ascending".into(),
                ));
            }
        }
        if self.alpha_grid.iter().any(|a| !a.is_finite() || *a <= 0.0) {
            return Err(Error::InvalidArgument(
                "alpha grid entries must be positive and finite".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeResult {
    pub representation: String,
    pub norm: String,
    pub per_fold_scores: Vec<f64>,
    /// Mean of per-fold scores; NaN when skipped.
    pub mean_score: f64,
    pub chosen_penalties: Vec<f64>,
    pub n_samples: usize,
    pub skipped: bool,
    pub skip_reason: Option<String>,
    /// FNV-1a hash of the outer fold assignment vector; 0 when skipped.
    /// Probes sharing vocabulary, target, and seed share this digest.
    pub fold_digest: u64,
}

impl ProbeResult {
    fn skip(rep: &str, norm: &str, n: usize, reason: &str) -> Self {
        ProbeResult {
            representation: rep.to_string(),
            norm: norm.to_string(),
            per_fold_scores: Vec::new(),
            mean_score: f64::NAN,
            chosen_penalties: Vec::new(),
            n_samples: n,
            skipped: true,
            skip_reason: Some(reason.to_string()),
            fold_digest: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ContentProfile {
    pub representation: String,
    pub scores: BTreeMap<String, ProbeResult>,
}

/// Deals shuffled indices 0..n round-robin into k folds. With strata
/// (class ids per index), the shuffled order is stably partitioned by class
/// first, so every fold receives an even share of each class. Returns the
/// fold id of each index.
pub(crate) fn assign_folds(n: usize, k: usize, strata: Option<&[usize]>, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    if let Some(y) = strata {
        let mut classes: Vec<usize> = y.to_vec();
        classes.sort_unstable();
        classes.dedup();
        let shuffled = order.clone();
        order.clear();
        for c in classes {
            order.extend(shuffled.iter().copied().filter(|&i| y[i] == c));
        }
    }
    let mut fold = vec![0usize; n];
    for (pos, &i) in order.iter().enumerate() {
        fold[i] = pos % k;
    }
    fold
}

pub(crate) fn fold_digest(folds: &[usize]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &f in folds {
        for b in (f as u64).to_le_bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    h
}

enum Target {
    Numeric(Vec<f64>),
    Classes(Vec<usize>),
}

/// Column-wise z-scoring with statistics taken from the training rows only.
/// Constant columns are left at zero. Standard deviation is the population
/// form (divide by n).
fn standardize_pair(train: &Array2<f64>, test: &Array2<f64>) -> (Array2<f64>, Array2<f64>) {
    let (n, d) = train.dim();
    let mut mean = vec![0.0; d];
    let mut sd = vec![0.0; d];
    for j in 0..d {
        let mut s = 0.0;
        for i in 0..n {
            s += train[[i, j]];
        }
        mean[j] = s / n as f64;
        let mut sq = 0.0;
        for i in 0..n {
            let dev = train[[i, j]] - mean[j];
            sq += dev * dev;
        }
        sd[j] = (sq / n as f64).sqrt();
    }
    let apply = |m: &Array2<f64>| {
        let mut out = m.clone();
        for j in 0..d {
            for i in 0..out.nrows() {
                out[[i, j]] = if sd[j] == 0.0 {
                    0.0
                } else {
                    (m[[i, j]] - mean[j]) / sd[j]
                };
            }
        }
        out
    };
    (apply(train), apply(test))
}

fn gather_rows(x: &Array2<f64>, idx: &[usize]) -> Array2<f64> {
    let d = x.ncols();
    let mut out = Array2::zeros((idx.len(), d));
    for (r, &i) in idx.iter().enumerate() {
        for j in 0..d {
            out[[r, j]] = x[[i, j]];
        }
    }
    out
}

fn fit_and_score(
    x_train: &Array2<f64>,
    x_test: &Array2<f64>,
    y_train_num: &[f64],
    y_test_num: &[f64],
    y_train_cls: &[usize],
    y_test_cls: &[usize],
    categorical: bool,
    alpha: f64,
    standardize: bool,
) -> Result<f64> {
    let (xt, xs) = if standardize {
        standardize_pair(x_train, x_test)
    } else {
        (x_train.clone(), x_test.clone())
    };
    if categorical {
        let model = logistic_fit(&xt, y_train_cls, 1.0 / alpha)?;
        let proba = model.predict_proba(&xs)?;
        let mut y_mapped = Vec::with_capacity(y_test_cls.len());
        for &c in y_test_cls {
            match model.classes.binary_search(&c) {
                Ok(pos) => y_mapped.push(pos),
                Err(_) => return Err(Error::DegenerateTarget),
            }
        }
        let n_train = y_train_cls.len() as f64;
        let p_null: Vec<f64> = model
            .classes
            .iter()
            .map(|c| y_train_cls.iter().filter(|&&v| v == *c).count() as f64 / n_train)
            .collect();
        mcfadden_pseudo_r2(&y_mapped, &proba, &p_null)
    } else {
        let model = ridge_fit(&xt, y_train_num, alpha)?;
        let y_hat = model.predict(&xs)?;
        r2_score(y_test_num, &y_hat)
    }
}

/// One nested cross-validation run. Returns per-fold test scores and the
/// penalty chosen on each outer training fold. Errors with
/// DegenerateTarget/DegenerateInput when a fold collapses (constant test
/// target, single-class training fold); the caller converts those to skips.
#[allow(clippy::too_many_arguments)]
fn nested_cv(
    x: &Array2<f64>,
    target: &Target,
    outer: &[usize],
    cfg: &ProbeConfig,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let categorical = matches!(target, Target::Classes(_));
    let empty_num: Vec<f64> = Vec::new();
    let empty_cls: Vec<usize> = Vec::new();
    let (y_num, y_cls): (&[f64], &[usize]) = match target {
        Target::Numeric(v) => (v, &empty_cls),
        Target::Classes(v) => (&empty_num, v),
    };

    let mut fold_scores = Vec::with_capacity(cfg.outer_folds);
    let mut penalties = Vec::with_capacity(cfg.outer_folds);
    for f in 0..cfg.outer_folds {
        let test_idx: Vec<usize> = (0..x.nrows()).filter(|&i| outer[i] == f).collect();
        let train_idx: Vec<usize> = (0..x.nrows()).filter(|&i| outer[i] != f).collect();
        let x_train = gather_rows(x, &train_idx);
        let x_test = gather_rows(x, &test_idx);
        let yt_num: Vec<f64> = if categorical {
            Vec::new()
        } else {
            train_idx.iter().map(|&i| y_num[i]).collect()
        };
        let ys_num: Vec<f64> = if categorical {
            Vec::new()
        } else {
            test_idx.iter().map(|&i| y_num[i]).collect()
        };
        let yt_cls: Vec<usize> = if categorical {
            train_idx.iter().map(|&i| y_cls[i]).collect()
        } else {
            Vec::new()
        };
        let ys_cls: Vec<usize> = if categorical {
            test_idx.iter().map(|&i| y_cls[i]).collect()
        } else {
            Vec::new()
        };

        let inner_seed = cfg.seed.wrapping_add(f as u64 + 1);
        let inner = assign_folds(
            train_idx.len(),
            cfg.inner_folds,
            if categorical { Some(&yt_cls) } else { None },
            inner_seed,
        );

        let mut best_alpha = cfg.alpha_grid[0];
        let mut best_score = f64::NEG_INFINITY;
        for &alpha in &cfg.alpha_grid {
            let mut sum = 0.0;
            for g in 0..cfg.inner_folds {
                let val_pos: Vec<usize> = (0..train_idx.len()).filter(|&p| inner[p] == g).collect();
                let fit_pos: Vec<usize> = (0..train_idx.len()).filter(|&p| inner[p] != g).collect();
                let x_fit = gather_rows(&x_train, &fit_pos);
                let x_val = gather_rows(&x_train, &val_pos);
                let score = fit_and_score(
                    &x_fit,
                    &x_val,
                    &fit_pos.iter().map(|&p| yt_num.get(p).copied().unwrap_or(0.0)).collect::<Vec<_>>(),
                    &val_pos.iter().map(|&p| yt_num.get(p).copied().unwrap_or(0.0)).collect::<Vec<_>>(),
                    &fit_pos.iter().map(|&p| yt_cls.get(p).copied().unwrap_or(0)).collect::<Vec<_>>(),
                    &val_pos.iter().map(|&p| yt_cls.get(p).copied().unwrap_or(0)).collect::<Vec<_>>(),
                    categorical,
                    alpha,
                    cfg.standardize,
                )?;
                sum += score;
            }
            let mean = sum / cfg.inner_folds as f64;
            if mean >= best_score {
                best_score = mean;
                best_alpha = alpha;
            }
        }

        let score = fit_and_score(
            &x_train,
            &x_test,
            &yt_num,
            &ys_num,
            &yt_cls,
            &ys_cls,
            categorical,
            best_alpha,
            cfg.standardize,
        )?;
        fold_scores.push(score);
        penalties.push(best_alpha);
    }
    Ok((fold_scores, penalties))
}

/// Probes one representation against one norm with nested cross-validation.
/// Vocabularies that would leave any outer test fold under
/// `min_test_samples` skip with reason "insufficient-samples"; categorical
/// classes with fewer members than `outer_folds` skip with "rare-class";
/// targets that are constant (overall or within a fold) skip with
/// "degenerate-target".
pub fn probe_norm(rep: &Representation, norm: &NormTable, cfg: &ProbeConfig) -> Result<ProbeResult> {
    cfg.validate()?;
    let common = rep.vocab().intersection(norm.vocab());
    let n = common.len();
    if n / cfg.outer_folds < cfg.min_test_samples {
        return Ok(ProbeResult::skip(
            rep.name(),
            norm.name(),
            n,
            SKIP_INSUFFICIENT_SAMPLES,
        ));
    }

    let d = rep.dim();
    let mut x = Array2::zeros((n, d));
    for (r, word) in common.words().iter().enumerate() {
        let i = rep.vocab().index_of(word).expect("word in intersection");
        for j in 0..d {
            x[[r, j]] = rep.matrix()[[i, j]];
        }
    }

    let target = match norm.kind() {
        NormKind::Numeric => {
            let y: Vec<f64> = common
                .words()
                .iter()
                .map(|w| match norm.value(w) {
                    Some(NormValue::Numeric(v)) => v,
                    _ => unreachable!("numeric norm holds numeric values"),
                })
                .collect();
            if y.iter().all(|&v| v == y[0]) {
                return Ok(ProbeResult::skip(
                    rep.name(),
                    norm.name(),
                    n,
                    SKIP_DEGENERATE_TARGET,
                ));
            }
            Target::Numeric(y)
        }
        NormKind::Binary | NormKind::Multiclass => {
            let y: Vec<usize> = common
                .words()
                .iter()
                .map(|w| match norm.value(w) {
                    Some(NormValue::Class(c)) => c,
                    _ => unreachable!("categorical norm holds class values"),
                })
                .collect();
            let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
            for &c in &y {
                *counts.entry(c).or_insert(0) += 1;
            }
            if counts.len() < 2 {
                return Ok(ProbeResult::skip(
                    rep.name(),
                    norm.name(),
                    n,
                    SKIP_DEGENERATE_TARGET,
                ));
            }
            if counts.values().any(|&c| c < cfg.outer_folds) {
                return Ok(ProbeResult::skip(
                    rep.name(),
                    norm.name(),
                    n,
                    SKIP_RARE_CLASS,
                ));
            }
            Target::Classes(y)
        }
    };

    let strata: Option<Vec<usize>> = match &target {
        Target::Classes(y) => Some(y.clone()),
        Target::Numeric(_) => None,
    };
    let outer = assign_folds(n, cfg.outer_folds, strata.as_deref(), cfg.seed);
    let digest = fold_digest(&outer);

    match nested_cv(&x, &target, &outer, cfg) {
        Ok((per_fold_scores, chosen_penalties)) => {
            let mean_score = per_fold_scores.iter().sum::<f64>() / per_fold_scores.len() as f64;
            Ok(ProbeResult {
                representation: rep.name().to_string(),
                norm: norm.name().to_string(),
                per_fold_scores,
                mean_score,
                chosen_penalties,
                n_samples: n,
                skipped: false,
                skip_reason: None,
                fold_digest: digest,
            })
        }
        Err(Error::DegenerateTarget) | Err(Error::DegenerateInput(_)) => Ok(ProbeResult::skip(
            rep.name(),
            norm.name(),
            n,
            SKIP_DEGENERATE_TARGET,
        )),
        Err(e) => Err(e),
    }
}

/// Probes a representation against every norm. Norms run in parallel;
/// results are keyed by norm name, so output is order-independent.
pub fn content_profile(
    rep: &Representation,
    norms: &[NormTable],
    cfg: &ProbeConfig,
) -> Result<ContentProfile> {
    if norms.is_empty() {
        return Err(Error::InvalidArgument("no norms to probe".into()));
    }
    let results: Vec<Result<ProbeResult>> = norms
        .par_iter()
        .map(|norm| probe_norm(rep, norm, cfg))
        .collect();
    let mut scores = BTreeMap::new();
    for r in results {
        let r = r?;
        if scores.insert(r.norm.clone(), r).is_some() {
            return Err(Error::InvalidArgument(
                "duplicate norm name in probe set".into(),
            ));
        }
    }
    Ok(ContentProfile {
        representation: rep.name().to_string(),
        scores,
    })
}

/// Representation × category score table. Cells are medians of norm-wise
/// mean scores; a cell is missing when every norm in the category skipped.
#[derive(Debug, Clone)]
pub struct CategoryTable {
    representations: Vec<String>,
    categories: Vec<String>,
    cells: Vec<Option<f64>>,
}

impl CategoryTable {
    /// Assembles a table from row-major representation × category cells,
    /// e.g. when reloading exported results.
    pub fn from_parts(
        representations: Vec<String>,
        categories: Vec<String>,
        cells: Vec<Option<f64>>,
    ) -> Self {
        debug_assert_eq!(cells.len(), representations.len() * categories.len());
        CategoryTable {
            representations,
            categories,
            cells,
        }
    }

    pub fn representations(&self) -> &[String] {
        &self.representations
    }

    pub fn categories(&self) -> &[String] {
        &self.categories
    }

    pub fn cell(&self, rep: usize, category: usize) -> Option<f64> {
        self.cells[rep * self.categories.len() + category]
    }

    pub fn cell_by_name(&self, rep: &str, category: &str) -> Option<f64> {
        let i = self.representations.iter().position(|r| r == rep)?;
        let j = self.categories.iter().position(|c| c == category)?;
        self.cell(i, j)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("representation");
        for c in &self.categories {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for (i, rep) in self.representations.iter().enumerate() {
            out.push_str(rep);
            for j in 0..self.categories.len() {
                out.push(',');
                if let Some(v) = self.cell(i, j) {
                    out.push_str(&v.to_string());
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .representations
            .iter()
            .enumerate()
            .map(|(i, rep)| {
                let cells: BTreeMap<&str, serde_json::Value> = self
                    .categories
                    .iter()
                    .enumerate()
                    .map(|(j, c)| {
                        (
                            c.as_str(),
                            match self.cell(i, j) {
                                Some(v) => json!(v),
                                None => serde_json::Value::Null,
                            },
                        )
                    })
                    .collect();
                json!({ "representation": rep, "scores": cells })
            })
            .collect();
        json!({ "categories": self.categories, "rows": rows })
    }
}

pub(crate) fn median(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.total_cmp(b));
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

/// Aggregates profiles into a representation × category table: per cell the
/// median over the category's norms of their mean scores, skipped probes
/// excluded. Every probed norm must appear in `category_map`.
pub fn aggregate_by_category(
    profiles: &[ContentProfile],
    category_map: &BTreeMap<String, String>,
) -> Result<CategoryTable> {
    let mut categories: Vec<String> = Vec::new();
    for profile in profiles {
        for norm in profile.scores.keys() {
            let cat = category_map
                .get(norm)
                .ok_or_else(|| Error::UnmappedNorm { norm: norm.clone() })?;
            if !categories.contains(cat) {
                categories.push(cat.clone());
            }
        }
    }
    categories.sort();

    let representations: Vec<String> = profiles
        .iter()
        .map(|p| p.representation.clone())
        .collect();
    let mut cells = vec![None; representations.len() * categories.len()];
    for (i, profile) in profiles.iter().enumerate() {
        for (j, cat) in categories.iter().enumerate() {
            let mut means: Vec<f64> = profile
                .scores
                .values()
                .filter(|r| !r.skipped && category_map[&r.norm] == *cat)
                .map(|r| r.mean_score)
                .collect();
            if !means.is_empty() {
                cells[i * categories.len() + j] = Some(median(&mut means));
            }
        }
    }
    Ok(CategoryTable {
        representations,
        categories,
        cells,
    })
}

/// Absolute difference between the best cell of each data type within one
/// category: |max over type-a reps − max over type-b reps|.
pub fn max_gap(
    table: &CategoryTable,
    type_of: &BTreeMap<String, DataType>,
    category: &str,
    type_a: DataType,
    type_b: DataType,
) -> Result<f64> {
    let j = table
        .categories
        .iter()
        .position(|c| c == category)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown category {category}")))?;
    let best = |wanted: DataType| -> Result<f64> {
        let mut best = f64::NEG_INFINITY;
        let mut seen = false;
        for (i, rep) in table.representations.iter().enumerate() {
            let t = type_of.get(rep).copied().ok_or_else(|| {
                Error::InvalidArgument(format!("representation {rep} has no data type"))
            })?;
            if t != wanted {
                continue;
            }
            if let Some(v) = table.cell(i, j) {
                seen = true;
                if v > best {
                    best = v;
                }
            }
        }
        if !seen {
            return Err(Error::MissingCells {
                context: format!("category {category} has no {wanted} cells"),
            });
        }
        Ok(best)
    };
    Ok((best(type_a)? - best(type_b)?).abs())
}

/// csv export: one row per (representation, norm) in profile order then
/// norm order, with per-fold scores, mean, and skip reason.
pub fn profiles_to_csv(
    profiles: &[ContentProfile],
    category_map: &BTreeMap<String, String>,
) -> Result<String> {
    let n_folds = profiles
        .iter()
        .flat_map(|p| p.scores.values())
        .map(|r| r.per_fold_scores.len())
        .max()
        .filter(|&m| m > 0)
        .unwrap_or(5);
    let mut out = String::from("representation,norm,category,n_samples");
    for f in 0..n_folds {
        out.push_str(&format!(",fold_{f}"));
    }
    out.push_str(",mean,skip_reason\n");
    for profile in profiles {
        for result in profile.scores.values() {
            let category = category_map
                .get(&result.norm)
                .ok_or_else(|| Error::UnmappedNorm {
                    norm: result.norm.clone(),
                })?;
            out.push_str(&format!(
                "{},{},{},{}",
                result.representation, result.norm, category, result.n_samples
            ));
            for f in 0..n_folds {
                out.push(',');
                if let Some(v) = result.per_fold_scores.get(f) {
                    out.push_str(&v.to_string());
                }
            }
            out.push(',');
            if !result.skipped {
                out.push_str(&result.mean_score.to_string());
            }
            out.push(',');
            if let Some(reason) = &result.skip_reason {
                out.push_str(reason);
            }
            out.push('\n');
        }
    }
    Ok(out)
}
