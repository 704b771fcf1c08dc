//! Ensemble probing: concatenate representations on a shared vocabulary,
//! probe ensembles and their solo members under identical fold assignments,
//! and test paired per-category differences.

use std::collections::BTreeMap;

use ndarray::Array2;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::kernels::{wilcoxon_signed_rank, TestResult};
use crate::rca::{content_profile, median, ContentProfile, ProbeConfig};
use crate::store::Representation;
use crate::vocab::{subset_representation, VocabSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockScaling {
    None,
    /// Z-score each column of each member block over the shared vocabulary
    /// (population standard deviation; constant columns become zero). The
    /// default: it stops a shared penalty from silently down-weighting a
    /// block whose features live on a different scale.
    #[default]
    PerBlockColumnZscore,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub members: Vec<String>,
    #[serde(default)]
    pub block_scaling: BlockScaling,
    pub label: String,
}

impl EnsembleSpec {
    pub fn validate(&self) -> Result<()> {
        if self.members.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "ensemble {} needs at least 2 members",
                self.label
            )));
        }
        let mut sorted = self.members.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != self.members.len() {
            return Err(Error::InvalidArgument(format!(
                "ensemble {} lists a member twice",
                self.label
            )));
        }
        if self.label.is_empty() {
            return Err(Error::InvalidArgument("ensemble label is empty".into()));
        }
        Ok(())
    }
}

fn zscore_columns(m: &mut Array2<f64>) {
    let (n, d) = m.dim();
    for j in 0..d {
        let mut mean = 0.0;
        for i in 0..n {
            mean += m[[i, j]];
        }
        mean /= n as f64;
        let mut sq = 0.0;
        for i in 0..n {
            let dev = m[[i, j]] - mean;
            sq += dev * dev;
        }
        let sd = (sq / n as f64).sqrt();
        for i in 0..n {
            m[[i, j]] = if sd == 0.0 { 0.0 } else { (m[[i, j]] - mean) / sd };
        }
    }
}

/// Concatenates member representations feature-wise over `vocab`, which
/// must be contained in every member's vocabulary. The result's dimension
/// is the sum of member dimensions; its data type is the first member's.
pub fn concatenate(
    reps: &[&Representation],
    vocab: &VocabSet,
    scaling: BlockScaling,
) -> Result<Representation> {
    if reps.is_empty() {
        return Err(Error::InvalidArgument("no members to concatenate".into()));
    }
    for rep in reps {
        if !vocab.is_subset_of(rep.vocab()) {
            return Err(Error::InvalidArgument(format!(
                "vocabulary not contained in member {}",
                rep.name()
            )));
        }
    }
    let n = vocab.len();
    let total_dim: usize = reps.iter().map(|r| r.dim()).sum();
    let mut out = Array2::zeros((n, total_dim));
    let mut offset = 0;
    for rep in reps {
        let sub = subset_representation(rep, vocab)?;
        let mut block = sub.matrix().clone();
        if scaling == BlockScaling::PerBlockColumnZscore {
            zscore_columns(&mut block);
        }
        for i in 0..n {
            for j in 0..block.ncols() {
                out[[i, offset + j]] = block[[i, j]];
            }
        }
        offset += block.ncols();
    }
    let name = reps
        .iter()
        .map(|r| r.name())
        .collect::<Vec<_>>()
        .join("+");
    Representation::from_matrix(name, reps[0].data_type(), vocab.words().to_vec(), out)
}

/// Probes every ensemble spec and every distinct solo member on the
/// collective common vocabulary, guaranteeing identical fold assignments
/// per norm so downstream differences are paired. Returns spec profiles in
/// input order followed by solo profiles in first-appearance order.
pub fn ensemble_rca(
    specs: &[EnsembleSpec],
    reps: &[Representation],
    norms: &[crate::store::NormTable],
    cfg: &ProbeConfig,
) -> Result<Vec<ContentProfile>> {
    cfg.validate()?;
    if specs.is_empty() {
        return Err(Error::InvalidArgument("no ensemble specs".into()));
    }
    let by_name: BTreeMap<&str, &Representation> =
        reps.iter().map(|r| (r.name(), r)).collect();
    let mut solos: Vec<&str> = Vec::new();
    for spec in specs {
        spec.validate()?;
        for member in &spec.members {
            if !by_name.contains_key(member.as_str()) {
                return Err(Error::InvalidArgument(format!(
                    "ensemble {} references unknown representation {}",
                    spec.label, member
                )));
            }
            if !solos.contains(&member.as_str()) {
                solos.push(member);
            }
        }
    }

    let mut collective = by_name[solos[0]].vocab().clone();
    for member in &solos[1..] {
        collective = collective.intersection(by_name[member].vocab());
    }
    let required = cfg.outer_folds * cfg.min_test_samples;
    if collective.len() < required {
        return Err(Error::CommonVocabularyTooSmall {
            size: collective.len(),
            required,
        });
    }

    let mut subjects: Vec<Representation> = Vec::new();
    for spec in specs {
        let members: Vec<&Representation> = spec
            .members
            .iter()
            .map(|m| by_name[m.as_str()])
            .collect();
        let ensemble =
            concatenate(&members, &collective, spec.block_scaling)?.with_name(spec.label.clone());
        subjects.push(ensemble);
    }
    for member in &solos {
        subjects.push(subset_representation(by_name[member], &collective)?);
    }

    let profiles: Vec<ContentProfile> = subjects
        .iter()
        .map(|rep| content_profile(rep, norms, cfg))
        .collect::<Result<_>>()?;

    // paired design check: per norm, all profiles agree on skip status and
    // fold assignment
    for norm in profiles[0].scores.keys() {
        let first = &profiles[0].scores[norm];
        for p in &profiles[1..] {
            let r = &p.scores[norm];
            if r.skipped != first.skipped || r.fold_digest != first.fold_digest {
                return Err(Error::MismatchedProfiles(format!(
                    "fold assignments diverged on norm {norm}"
                )));
            }
        }
    }
    Ok(profiles)
}

#[derive(Debug, Clone)]
pub struct DiffRow {
    pub category: String,
    /// Norms contributing a paired difference (non-skipped in both profiles).
    pub n_norms: usize,
    pub median_diff: Option<f64>,
    /// Wilcoxon signed-rank over the paired differences; absent when fewer
    /// than 3 norms contribute or every difference is zero.
    pub test: Option<TestResult>,
}

#[derive(Debug, Clone)]
pub struct DiffReport {
    pub label_a: String,
    pub label_b: String,
    pub rows: Vec<DiffRow>,
}

impl DiffReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("category,n_norms,median_diff,wilcoxon_stat,p_value\n");
        for row in &self.rows {
            out.push_str(&row.category);
            out.push_str(&format!(",{}", row.n_norms));
            out.push(',');
            if let Some(d) = row.median_diff {
                out.push_str(&d.to_string());
            }
            out.push(',');
            if let Some(t) = &row.test {
                out.push_str(&t.statistic.to_string());
            }
            out.push(',');
            if let Some(t) = &row.test {
                out.push_str(&t.p_value.to_string());
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                json!({
                    "category": row.category,
                    "n_norms": row.n_norms,
                    "median_diff": row.median_diff,
                    "wilcoxon_stat": row.test.as_ref().map(|t| t.statistic),
                    "p_value": row.test.as_ref().map(|t| t.p_value),
                })
            })
            .collect();
        json!({ "a": self.label_a, "b": self.label_b, "rows": rows })
    }
}

/// Per-category paired comparison of two profiles computed on identical
/// norms and fold assignments. Pairs are norm-wise mean scores; rows carry
/// the median difference and, for ≥ 3 contributing norms, a Wilcoxon
/// signed-rank test.
pub fn paired_difference_report(
    a: &ContentProfile,
    b: &ContentProfile,
    category_map: &BTreeMap<String, String>,
) -> Result<DiffReport> {
    if a.scores.len() != b.scores.len()
        || a.scores.keys().zip(b.scores.keys()).any(|(x, y)| x != y)
    {
        return Err(Error::MismatchedProfiles(format!(
            "{} and {} were probed on different norm sets",
            a.representation, b.representation
        )));
    }
    let mut by_category: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for (norm, ra) in &a.scores {
        let rb = &b.scores[norm];
        let category = category_map
            .get(norm)
            .ok_or_else(|| Error::UnmappedNorm { norm: norm.clone() })?;
        by_category.entry(category).or_default();
        if ra.skipped || rb.skipped {
            continue;
        }
        if ra.fold_digest != rb.fold_digest {
            return Err(Error::MismatchedProfiles(format!(
                "fold assignments differ on norm {norm}"
            )));
        }
        by_category
            .get_mut(category.as_str())
            .expect("entry just created")
            .push(ra.mean_score - rb.mean_score);
    }

    let rows = by_category
        .into_iter()
        .map(|(category, mut diffs)| {
            let n_norms = diffs.len();
            let median_diff = if n_norms > 0 {
                Some(median(&mut diffs))
            } else {
                None
            };
            let test = if n_norms >= 3 {
                wilcoxon_signed_rank(&diffs).ok()
            } else {
                None
            };
            DiffRow {
                category: category.to_string(),
                n_norms,
                median_diff,
                test,
            }
        })
        .collect();
    Ok(DiffReport {
        label_a: a.representation.clone(),
        label_b: b.representation.clone(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::ridge_fit;
    use crate::rca::ProbeResult;
    use crate::store::{DataType, NormKind, NormTable, NormValue};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn words(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("w{i:04}")).collect()
    }

    fn random_rep(name: &str, n: usize, d: usize, seed: u64) -> Representation {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = Array2::from_shape_fn((n, d), |_| rng.gen_range(-1.0..1.0));
        Representation::from_matrix(name.into(), DataType::Text, words(n), m).unwrap()
    }

    fn vocab_of(rep: &Representation) -> VocabSet {
        rep.vocab().clone()
    }

    #[test]
    fn dimensions_add_up() {
        let a = random_rep("a", 10, 2, 1);
        let b = random_rep("b", 10, 3, 2);
        let cat = concatenate(&[&a, &b], &vocab_of(&a), BlockScaling::None).unwrap();
        assert_eq!(cat.dim(), 5);
        assert_eq!(cat.len(), 10);
        assert_eq!(cat.name(), "a+b");
        // raw concatenation preserves the blocks
        for i in 0..10 {
            assert_eq!(cat.matrix()[[i, 0]], a.matrix()[[i, 0]]);
            assert_eq!(cat.matrix()[[i, 2]], b.matrix()[[i, 0]]);
        }
    }

    #[test]
    fn zscored_blocks_are_centered_and_scaled() {
        let a = random_rep("a", 50, 3, 3);
        let b = random_rep("b", 50, 2, 4);
        let cat = concatenate(&[&a, &b], &vocab_of(&a), BlockScaling::PerBlockColumnZscore)
            .unwrap();
        for j in 0..5 {
            let col: Vec<f64> = (0..50).map(|i| cat.matrix()[[i, j]]).collect();
            let mean: f64 = col.iter().sum::<f64>() / 50.0;
            let var: f64 = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / 50.0;
            assert!(mean.abs() <= 1e-12, "col {j} mean {mean}");
            assert!((var - 1.0).abs() <= 1e-9, "col {j} var {var}");
        }
    }

    #[test]
    fn constant_column_zscores_to_zero() {
        let rows: Vec<(String, Vec<f64>)> = (0..6)
            .map(|i| (format!("w{i}"), vec![4.0, i as f64]))
            .collect();
        let a = Representation::new("a".into(), DataType::Text, rows.clone()).unwrap();
        let b = Representation::new("b".into(), DataType::Text, rows).unwrap();
        let cat = concatenate(&[&a, &b], &vocab_of(&a), BlockScaling::PerBlockColumnZscore)
            .unwrap();
        for i in 0..6 {
            assert_eq!(cat.matrix()[[i, 0]], 0.0);
            assert_eq!(cat.matrix()[[i, 2]], 0.0);
        }
    }

    #[test]
    fn foreign_vocabulary_is_rejected() {
        let a = random_rep("a", 10, 2, 1);
        let v = VocabSet::new(vec!["zzz".to_string()]);
        assert!(concatenate(&[&a], &v, BlockScaling::None).is_err());
    }

    #[test]
    fn ensemble_span_contains_member_spans() {
        // with no penalty, training residuals can only shrink when features
        // are pooled
        let a = random_rep("a", 40, 3, 5);
        let b = random_rep("b", 40, 3, 6);
        let vocab = vocab_of(&a);
        let cat = concatenate(&[&a, &b], &vocab, BlockScaling::None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let y: Vec<f64> = (0..40)
            .map(|i| {
                a.matrix()[[i, 0]] - 0.5 * b.matrix()[[i, 1]] + 0.1 * rng.gen_range(-1.0..1.0)
            })
            .collect();
        let residual = |rep: &Representation| {
            let model = ridge_fit(rep.matrix(), &y, 0.0).unwrap();
            let y_hat = model.predict(rep.matrix()).unwrap();
            y.iter()
                .zip(&y_hat)
                .map(|(t, p)| (t - p) * (t - p))
                .sum::<f64>()
        };
        let r_cat = residual(&cat);
        assert!(r_cat <= residual(&a) + 1e-9);
        assert!(r_cat <= residual(&b) + 1e-9);
    }

    #[test]
    fn duplicated_features_do_not_hurt_training_fit() {
        let a = random_rep("a", 40, 3, 8);
        let vocab = vocab_of(&a);
        let dup = {
            let b = a.clone().with_name("b".into());
            concatenate(&[&a, &b], &vocab, BlockScaling::None).unwrap()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let y: Vec<f64> = (0..40)
            .map(|i| a.matrix()[[i, 0]] + 0.3 * rng.gen_range(-1.0..1.0))
            .collect();
        let train_r2 = |rep: &Representation| {
            let model = ridge_fit(rep.matrix(), &y, 1e-3).unwrap();
            let y_hat = model.predict(rep.matrix()).unwrap();
            crate::kernels::r2_score(&y, &y_hat).unwrap()
        };
        assert!(train_r2(&dup) >= train_r2(&a) - 1e-6);
    }

    fn numeric_norm(name: &str, values: Vec<(String, f64)>) -> NormTable {
        NormTable::new(
            name.into(),
            "test".into(),
            NormKind::Numeric,
            Vec::new(),
            values
                .into_iter()
                .map(|(w, v)| (w, NormValue::Numeric(v)))
                .collect(),
            0,
        )
        .unwrap()
    }

    fn two_block_fixture() -> (Representation, Representation, Vec<NormTable>) {
        let n = 130;
        let a = random_rep("a", n, 4, 11);
        let b = random_rep("b", n, 4, 12);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut a_only = Vec::new();
        let mut both = Vec::new();
        for i in 0..n {
            let word = format!("w{i:04}");
            let fa = a.matrix()[[i, 0]] + 0.5 * a.matrix()[[i, 1]];
            let fb = b.matrix()[[i, 2]] - 0.8 * b.matrix()[[i, 3]];
            let noise = 0.05 * rng.gen_range(-1.0..1.0);
            a_only.push((word.clone(), fa + noise));
            both.push((word, fa + fb + noise));
        }
        (
            a,
            b,
            vec![
                numeric_norm("a-only", a_only),
                numeric_norm("both", both),
            ],
        )
    }

    #[test]
    fn ensemble_matches_solo_when_one_block_is_idle() {
        let (a, b, norms) = two_block_fixture();
        let spec = EnsembleSpec {
            members: vec!["a".into(), "b".into()],
            block_scaling: BlockScaling::PerBlockColumnZscore,
            label: "a&b".into(),
        };
        let cfg = ProbeConfig::default();
        let profiles = ensemble_rca(&[spec], &[a, b], &norms[..1], &cfg).unwrap();
        let ens = profiles[0].scores["a-only"].mean_score;
        let solo_a = profiles[1].scores["a-only"].mean_score;
        assert_eq!(profiles[0].representation, "a&b");
        assert_eq!(profiles[1].representation, "a");
        assert!(
            (ens - solo_a).abs() <= 0.03,
            "ensemble {ens} vs solo {solo_a}"
        );
    }

    #[test]
    fn ensemble_beats_solos_on_a_two_block_target() {
        let (a, b, norms) = two_block_fixture();
        let spec = EnsembleSpec {
            members: vec!["a".into(), "b".into()],
            block_scaling: BlockScaling::PerBlockColumnZscore,
            label: "a&b".into(),
        };
        let cfg = ProbeConfig::default();
        let profiles = ensemble_rca(&[spec], &[a, b], &norms[1..], &cfg).unwrap();
        let ens = profiles[0].scores["both"].mean_score;
        let solo_a = profiles[1].scores["both"].mean_score;
        let solo_b = profiles[2].scores["both"].mean_score;
        assert!(ens >= solo_a + 0.05, "ensemble {ens} solo a {solo_a}");
        assert!(ens >= solo_b + 0.05, "ensemble {ens} solo b {solo_b}");
    }

    #[test]
    fn repeated_spec_gives_identical_profiles() {
        let (a, b, norms) = two_block_fixture();
        let spec = EnsembleSpec {
            members: vec!["a".into(), "b".into()],
            block_scaling: BlockScaling::PerBlockColumnZscore,
            label: "a&b".into(),
        };
        let cfg = ProbeConfig::default();
        let profiles =
            ensemble_rca(&[spec.clone(), spec], &[a, b], &norms, &cfg).unwrap();
        for (norm, r) in &profiles[0].scores {
            assert_eq!(r, &profiles[1].scores[norm]);
        }
    }

    #[test]
    fn shared_folds_are_asserted() {
        let (a, b, norms) = two_block_fixture();
        let spec = EnsembleSpec {
            members: vec!["a".into(), "b".into()],
            block_scaling: BlockScaling::None,
            label: "a&b".into(),
        };
        let cfg = ProbeConfig::default();
        let profiles = ensemble_rca(&[spec], &[a, b], &norms, &cfg).unwrap();
        let digest = profiles[0].scores["both"].fold_digest;
        for p in &profiles {
            assert_eq!(p.scores["both"].fold_digest, digest);
        }
    }

    #[test]
    fn tiny_collective_vocabulary_is_rejected() {
        let a = random_rep("a", 30, 2, 1);
        let b = random_rep("b", 30, 2, 2);
        let spec = EnsembleSpec {
            members: vec!["a".into(), "b".into()],
            block_scaling: BlockScaling::None,
            label: "a&b".into(),
        };
        let norms = vec![numeric_norm(
            "n",
            (0..30).map(|i| (format!("w{i:04}"), i as f64)).collect(),
        )];
        match ensemble_rca(&[spec], &[a, b], &norms, &ProbeConfig::default()) {
            Err(Error::CommonVocabularyTooSmall { size, required }) => {
                assert_eq!(size, 30);
                assert_eq!(required, 100);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    fn result_with(rep: &str, norm: &str, mean: f64) -> ProbeResult {
        ProbeResult {
            representation: rep.into(),
            norm: norm.into(),
            per_fold_scores: vec![mean; 5],
            mean_score: mean,
            chosen_penalties: vec![1.0; 5],
            n_samples: 100,
            skipped: false,
            skip_reason: None,
            fold_digest: 42,
        }
    }

    fn profile_of(rep: &str, results: Vec<ProbeResult>) -> ContentProfile {
        ContentProfile {
            representation: rep.into(),
            scores: results.into_iter().map(|r| (r.norm.clone(), r)).collect(),
        }
    }

    fn five_norm_fixture() -> (ContentProfile, ContentProfile, BTreeMap<String, String>) {
        let names = ["n1", "n2", "n3", "n4", "n5"];
        let a_scores = [0.5, 0.5, 0.6, 0.45, 0.55];
        let diffs = [0.1, 0.1, 0.2, 0.05, 0.15];
        let a = profile_of(
            "a",
            names
                .iter()
                .zip(a_scores)
                .map(|(n, s)| result_with("a", n, s))
                .collect(),
        );
        let b = profile_of(
            "b",
            names
                .iter()
                .zip(a_scores.iter().zip(diffs))
                .map(|(n, (s, d))| result_with("b", n, s - d))
                .collect(),
        );
        let map = names
            .iter()
            .map(|n| (n.to_string(), "size".to_string()))
            .collect();
        (a, b, map)
    }

    #[test]
    fn hand_difference_report() {
        let (a, b, map) = five_norm_fixture();
        let report = paired_difference_report(&a, &b, &map).unwrap();
        assert_eq!(report.rows.len(), 1);
        let row = &report.rows[0];
        assert_eq!(row.category, "size");
        assert_eq!(row.n_norms, 5);
        assert!((row.median_diff.unwrap() - 0.1).abs() < 1e-12);
        let test = row.test.as_ref().unwrap();
        assert_eq!(test.p_value, 0.0625);
    }

    #[test]
    fn reversed_report_negates_medians_with_same_p() {
        let (a, b, map) = five_norm_fixture();
        let ab = paired_difference_report(&a, &b, &map).unwrap();
        let ba = paired_difference_report(&b, &a, &map).unwrap();
        for (ra, rb) in ab.rows.iter().zip(&ba.rows) {
            assert_eq!(ra.median_diff.unwrap(), -rb.median_diff.unwrap());
            assert_eq!(
                ra.test.as_ref().unwrap().p_value,
                rb.test.as_ref().unwrap().p_value
            );
        }
    }

    #[test]
    fn identical_profiles_report_zero_without_p() {
        let (a, _, map) = five_norm_fixture();
        let report = paired_difference_report(&a, &a, &map).unwrap();
        let row = &report.rows[0];
        assert_eq!(row.median_diff, Some(0.0));
        assert!(row.test.is_none());
    }

    #[test]
    fn two_norm_category_gets_no_p_value() {
        let a = profile_of(
            "a",
            vec![result_with("a", "n1", 0.5), result_with("a", "n2", 0.6)],
        );
        let b = profile_of(
            "b",
            vec![result_with("b", "n1", 0.4), result_with("b", "n2", 0.45)],
        );
        let map: BTreeMap<String, String> = [
            ("n1".to_string(), "size".to_string()),
            ("n2".to_string(), "size".to_string()),
        ]
        .into();
        let report = paired_difference_report(&a, &b, &map).unwrap();
        let row = &report.rows[0];
        assert_eq!(row.n_norms, 2);
        assert!(row.median_diff.is_some());
        assert!(row.test.is_none());
    }

    #[test]
    fn mismatched_norm_sets_are_rejected() {
        let a = profile_of("a", vec![result_with("a", "n1", 0.5)]);
        let b = profile_of("b", vec![result_with("b", "n2", 0.5)]);
        let map: BTreeMap<String, String> = [
            ("n1".to_string(), "size".to_string()),
            ("n2".to_string(), "size".to_string()),
        ]
        .into();
        assert!(matches!(
            paired_difference_report(&a, &b, &map),
            Err(Error::MismatchedProfiles(_))
        ));
    }

    #[test]
    fn skipped_norms_drop_out_of_pairs() {
        let (a, mut b, map) = five_norm_fixture();
        let r = b.scores.get_mut("n3").unwrap();
        r.skipped = true;
        r.skip_reason = Some("rare-class".into());
        let report = paired_difference_report(&a, &b, &map).unwrap();
        assert_eq!(report.rows[0].n_norms, 4);
    }

    #[test]
    fn diff_csv_layout() {
        let (a, b, map) = five_norm_fixture();
        let report = paired_difference_report(&a, &b, &map).unwrap();
        let csv = report.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "category,n_norms,median_diff,wilcoxon_stat,p_value");
        assert!(lines[1].starts_with("size,5,"));
        assert!(lines[1].ends_with(",0,0.0625"));
    }
}
