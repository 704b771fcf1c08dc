//! The subcommands as plain functions over a resolved run context, so
//! integration tests can exercise full runs without spawning the binary.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context as _, Result};
use ndarray::Array2;
use serde_json::{json, Map, Value};

use wordprobe_core::{
    aggregate_by_category, aggregate_similarity, build_base_vocabulary, content_profile,
    coverage, ensemble_rca, load_embeddings, load_norm_tables, mds_projection,
    paired_difference_report, pairwise_rsa, ppmi_svd_embed, profiles_to_csv, render_diff_table,
    render_mds, render_rca, render_rsa, same_type_neighbor_affinity, sg_softmax_train,
    similarity_svd_embed, within_between_summary, write_embeddings, CategoryTable,
    ContentProfile, CueResponseCounts, DataType, DiffReport, DiffRow, EmbeddingFormat,
    FrequencyTable, NormTable, ProbeConfig, RenderSpec, Representation, RsaMatrix,
    SimilarityJudgments, TestResult, VocabSet,
};

use crate::config::LoadedConfig;

/// A loaded config with the command-line overrides applied.
pub struct Ctx {
    pub cfg: LoadedConfig,
    pub out_dir: PathBuf,
    pub seed: u64,
}

impl Ctx {
    pub fn new(cfg: LoadedConfig, seed_override: Option<u64>, out_override: Option<PathBuf>) -> Ctx {
        let seed = seed_override.unwrap_or(cfg.run.seed);
        let out_dir = out_override.unwrap_or_else(|| cfg.resolve(&cfg.run.output_dir));
        Ctx { cfg, out_dir, seed }
    }
}

/// Maps a display name onto something safe for a file name.
pub fn file_slug(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || matches!(c, '-' | '.' | '_') {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn write_text(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn json_line(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn ensure_out(ctx: &Ctx) -> Result<()> {
    fs::create_dir_all(&ctx.out_dir)
        .with_context(|| format!("creating output directory {}", ctx.out_dir.display()))
}

fn load_representations(ctx: &Ctx) -> Result<Vec<Representation>> {
    if ctx.cfg.run.representations.is_empty() {
        bail!("config lists no representations");
    }
    let mut reps = Vec::with_capacity(ctx.cfg.run.representations.len());
    for entry in &ctx.cfg.run.representations {
        let path = ctx.cfg.resolve(&entry.path);
        let rep = load_embeddings(&path, entry.format, entry.name.clone(), entry.data_type)
            .with_context(|| format!("loading representation {:?}", entry.name))?;
        reps.push(rep);
    }
    Ok(reps)
}

fn load_norms(ctx: &Ctx) -> Result<Vec<NormTable>> {
    let Some(rel) = &ctx.cfg.run.norms else {
        bail!("config sets no norm manifest; add `norms = \"...\"`");
    };
    let path = ctx.cfg.resolve(rel);
    Ok(load_norm_tables(&path)?)
}

fn categories_of(norms: &[NormTable]) -> BTreeMap<String, String> {
    norms
        .iter()
        .map(|n| (n.name().to_string(), n.category().to_string()))
        .collect()
}

fn rca_render_spec(ctx: &Ctx) -> RenderSpec {
    let mut spec = RenderSpec::rca_default();
    let report = &ctx.cfg.run.report;
    if let Some(v) = report.rca_color_min {
        spec.color_min = v;
    }
    if let Some(v) = report.rca_color_max {
        spec.color_max = v;
    }
    if let Some(reference) = &report.order_by {
        spec.order_by = Some(reference.clone());
    }
    spec
}

/// Category table json plus a `data_types` array aligned with the rows, so
/// the table can be re-rendered without the embedding files.
fn table_json(table: &CategoryTable, type_of: &BTreeMap<String, DataType>) -> Value {
    let mut v = table.to_json();
    if let Value::Object(map) = &mut v {
        let types: Vec<String> = table
            .representations()
            .iter()
            .map(|r| {
                type_of
                    .get(r)
                    .expect("every table row has a data type")
                    .to_string()
            })
            .collect();
        map.insert("data_types".into(), json!(types));
    }
    v
}

// ---------------------------------------------------------------------------
// validate

/// Returns one message per problem; empty means the config is usable.
pub fn cmd_validate(config_path: &Path) -> Vec<String> {
    match LoadedConfig::load(config_path) {
        Err(msg) => vec![msg],
        Ok(cfg) => cfg.validate(),
    }
}

// ---------------------------------------------------------------------------
// train

pub fn cmd_train_ppmi_svd(counts_path: &Path, k: usize, out: &Path) -> Result<()> {
    let counts = CueResponseCounts::from_csv(counts_path)?;
    let rep = ppmi_svd_embed(&counts, k)?;
    write_embeddings(&rep, out, EmbeddingFormat::HeaderText)?;
    println!(
        "ppmi-svd: k={}, vocabulary={}, wrote {}",
        k,
        rep.len(),
        out.display()
    );
    Ok(())
}

pub fn cmd_train_sim_svd(ratings: &[PathBuf], k: usize, out: &Path) -> Result<()> {
    if ratings.is_empty() {
        bail!("sim-svd needs at least one ratings file");
    }
    let mut datasets = Vec::with_capacity(ratings.len());
    for path in ratings {
        let name = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("ratings")
            .to_string();
        datasets.push(SimilarityJudgments::from_csv(path, name)?);
    }
    let mut vocab = datasets[0].words();
    for d in &datasets[1..] {
        vocab = vocab.union(&d.words());
    }
    let agg = aggregate_similarity(&datasets, &vocab)?;
    let (rep, imputed) = similarity_svd_embed(&agg, k)?;
    write_embeddings(&rep, out, EmbeddingFormat::HeaderText)?;
    println!(
        "sim-svd: k={}, vocabulary={}, imputed_pairs={}, wrote {}",
        k,
        rep.len(),
        imputed,
        out.display()
    );
    Ok(())
}

pub fn cmd_train_sg_softmax(
    counts_path: &Path,
    dim: usize,
    epochs: usize,
    learning_rate: f64,
    seed: u64,
    out: &Path,
    responses_out: Option<&Path>,
) -> Result<()> {
    let counts = CueResponseCounts::from_csv(counts_path)?;
    let pairs = counts.to_pairs()?;
    let outcome = sg_softmax_train(&pairs, dim, epochs, learning_rate, seed)?;
    write_embeddings(&outcome.input, out, EmbeddingFormat::HeaderText)?;
    if let Some(path) = responses_out {
        write_embeddings(&outcome.output, path, EmbeddingFormat::HeaderText)?;
    }
    let final_loss = outcome.epoch_losses.last().copied().unwrap_or(f64::NAN);
    println!(
        "sg-softmax: dim={}, vocabulary={}, final_loss={}, wrote {}",
        dim,
        outcome.input.len(),
        final_loss,
        out.display()
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// rsa

pub fn cmd_rsa(ctx: &Ctx) -> Result<Vec<PathBuf>> {
    let reps = load_representations(ctx)?;
    if reps.len() < 2 {
        bail!("rsa needs at least two representations, got {}", reps.len());
    }
    ensure_out(ctx)?;
    let rsa = pairwise_rsa(&reps)?;

    let mut written = Vec::new();
    written.push(write_text(&ctx.out_dir, "rsa.csv", &rsa.to_csv())?);
    written.push(write_text(&ctx.out_dir, "rsa.json", &json_line(&rsa.to_json()))?);
    written.push(write_text(
        &ctx.out_dir,
        "rsa.svg",
        &render_rsa(&rsa, &RenderSpec::rsa_default())?,
    )?);

    let mut wb = Map::new();
    for ((a, b), v) in within_between_summary(&rsa) {
        wb.insert(format!("{a}-{b}"), json!(v));
    }
    written.push(write_text(
        &ctx.out_dir,
        "within_between.json",
        &json_line(&Value::Object(wb)),
    )?);

    if rsa.is_complete() {
        let k = 3.min(rsa.len() - 1).max(1);
        let mut fractions = Map::new();
        for (t, v) in same_type_neighbor_affinity(&rsa, k)? {
            fractions.insert(t.to_string(), json!(v));
        }
        written.push(write_text(
            &ctx.out_dir,
            "affinity.json",
            &json_line(&json!({ "k": k, "same_type_fraction": fractions })),
        )?);

        let coords = mds_projection(&rsa, 2)?;
        let mut csv = String::from("name,data_type,x,y\n");
        for i in 0..rsa.len() {
            csv.push_str(&format!(
                "{},{},{},{}\n",
                rsa.names()[i],
                rsa.labels()[i],
                coords[[i, 0]],
                coords[[i, 1]]
            ));
        }
        written.push(write_text(&ctx.out_dir, "mds.csv", &csv)?);
        let coord_rows: Vec<Vec<f64>> = (0..rsa.len())
            .map(|i| vec![coords[[i, 0]], coords[[i, 1]]])
            .collect();
        written.push(write_text(
            &ctx.out_dir,
            "mds.json",
            &json_line(&json!({
                "names": rsa.names(),
                "labels": rsa.labels().iter().map(|l| l.to_string()).collect::<Vec<_>>(),
                "coords": coord_rows,
            })),
        )?);
        written.push(write_text(
            &ctx.out_dir,
            "mds.svg",
            &render_mds(&coords, rsa.names(), rsa.labels())?,
        )?);
    } else {
        eprintln!(
            "warning: {} pair(s) share too little vocabulary; skipping mds and affinity outputs",
            rsa.missing_pairs().len()
        );
    }

    println!(
        "rsa: {} representations, wrote {} files to {}",
        reps.len(),
        written.len(),
        ctx.out_dir.display()
    );
    Ok(written)
}

// ---------------------------------------------------------------------------
// probe / ensemble

fn vocabulary_summary(
    ctx: &Ctx,
    reps: &[Representation],
    norms: &[NormTable],
) -> Result<Value> {
    let norm_vocabs: Vec<VocabSet> = norms.iter().map(|n| n.vocab().clone()).collect();
    let behavior: Vec<VocabSet> = reps
        .iter()
        .filter(|r| r.data_type() == DataType::Behavior)
        .map(|r| r.vocab().clone())
        .collect();
    let brain: Vec<VocabSet> = reps
        .iter()
        .filter(|r| r.data_type() == DataType::Brain)
        .map(|r| r.vocab().clone())
        .collect();
    let base = if !norm_vocabs.is_empty() && !behavior.is_empty() && !brain.is_empty() {
        Some(build_base_vocabulary(&norm_vocabs, &behavior, &brain)?)
    } else {
        None
    };

    let mut out = Map::new();
    out.insert(
        "base_size".into(),
        base.as_ref().map_or(Value::Null, |v| json!(v.len())),
    );
    if let Some(rel) = &ctx.cfg.run.frequencies {
        let freq = FrequencyTable::from_csv(&ctx.cfg.resolve(rel))?;
        let mut cov = Map::new();
        for rep in reps {
            cov.insert(rep.name().to_string(), json!(coverage(rep.vocab(), &freq)));
        }
        out.insert("coverage".into(), Value::Object(cov));
        if let Some(b) = &base {
            out.insert("base_coverage".into(), json!(coverage(b, &freq)));
        }
    }
    Ok(Value::Object(out))
}

fn run_summary(
    ctx: &Ctx,
    command: &str,
    cfg: &ProbeConfig,
    reps: &[Representation],
    norms: &[NormTable],
    profiles: &[ContentProfile],
) -> Result<Value> {
    let mut results = Vec::new();
    let mut skipped = Vec::new();
    for profile in profiles {
        for r in profile.scores.values() {
            results.push(json!({
                "representation": r.representation,
                "norm": r.norm,
                "n_samples": r.n_samples,
                "mean_score": if r.skipped { Value::Null } else { json!(r.mean_score) },
                "per_fold_scores": r.per_fold_scores,
                "chosen_penalties": r.chosen_penalties,
                "skip_reason": r.skip_reason,
            }));
            if r.skipped {
                skipped.push(json!({
                    "representation": r.representation,
                    "norm": r.norm,
                    "reason": r.skip_reason,
                }));
            }
        }
    }

    Ok(json!({
        "command": command,
        "versions": {
            "wordprobe-cli": env!("CARGO_PKG_VERSION"),
            "wordprobe-core": wordprobe_core::VERSION,
        },
        "seed": cfg.seed,
        "probe": {
            "outer_folds": cfg.outer_folds,
            "inner_folds": cfg.inner_folds,
            "alpha_grid": cfg.alpha_grid,
            "min_test_samples": cfg.min_test_samples,
            "standardize": cfg.standardize,
        },
        "representations": reps.iter().map(|r| json!({
            "name": r.name(),
            "data_type": r.data_type().to_string(),
            "words": r.len(),
            "dim": r.dim(),
        })).collect::<Vec<_>>(),
        "norms": norms.iter().map(|n| json!({
            "name": n.name(),
            "category": n.category(),
            "kind": n.kind().to_string(),
            "words": n.len(),
            "dropped_rows": n.dropped_rows(),
        })).collect::<Vec<_>>(),
        "vocabulary": vocabulary_summary(ctx, reps, norms)?,
        "results": results,
        "skipped": skipped,
    }))
}

fn count_skipped(profiles: &[ContentProfile]) -> usize {
    profiles
        .iter()
        .flat_map(|p| p.scores.values())
        .filter(|r| r.skipped)
        .count()
}

pub fn cmd_probe(ctx: &Ctx) -> Result<Vec<PathBuf>> {
    let reps = load_representations(ctx)?;
    let norms = load_norms(ctx)?;
    ensure_out(ctx)?;
    let cfg = ctx.cfg.probe_config(ctx.seed);
    let category_map = categories_of(&norms);

    let mut profiles = Vec::with_capacity(reps.len());
    for rep in &reps {
        profiles.push(content_profile(rep, &norms, &cfg)?);
    }

    let mut written = Vec::new();
    for profile in &profiles {
        let name = format!("profile_{}.csv", file_slug(&profile.representation));
        let csv = profiles_to_csv(std::slice::from_ref(profile), &category_map)?;
        written.push(write_text(&ctx.out_dir, &name, &csv)?);
    }

    let table = aggregate_by_category(&profiles, &category_map)?;
    let type_of: BTreeMap<String, DataType> = reps
        .iter()
        .map(|r| (r.name().to_string(), r.data_type()))
        .collect();
    written.push(write_text(&ctx.out_dir, "category_table.csv", &table.to_csv())?);
    written.push(write_text(
        &ctx.out_dir,
        "category_table.json",
        &json_line(&table_json(&table, &type_of)),
    )?);
    written.push(write_text(
        &ctx.out_dir,
        "rca.svg",
        &render_rca(&table, &type_of, &rca_render_spec(ctx))?,
    )?);

    let summary = run_summary(ctx, "probe", &cfg, &reps, &norms, &profiles)?;
    written.push(write_text(
        &ctx.out_dir,
        "run_summary.json",
        &json_line(&summary),
    )?);

    println!(
        "probe: {} representations x {} norms, {} probe(s) skipped, wrote {} files to {}",
        reps.len(),
        norms.len(),
        count_skipped(&profiles),
        written.len(),
        ctx.out_dir.display()
    );
    Ok(written)
}

pub fn cmd_ensemble(ctx: &Ctx) -> Result<Vec<PathBuf>> {
    let specs = &ctx.cfg.run.ensembles;
    if specs.is_empty() {
        bail!("config lists no ensembles; add an [[ensembles]] entry");
    }
    let reps = load_representations(ctx)?;
    let norms = load_norms(ctx)?;
    ensure_out(ctx)?;
    let cfg = ctx.cfg.probe_config(ctx.seed);
    let category_map = categories_of(&norms);

    let profiles = ensemble_rca(specs, &reps, &norms, &cfg)?;

    let mut written = Vec::new();
    for profile in &profiles {
        let name = format!("profile_{}.csv", file_slug(&profile.representation));
        let csv = profiles_to_csv(std::slice::from_ref(profile), &category_map)?;
        written.push(write_text(&ctx.out_dir, &name, &csv)?);
    }

    let mut type_of: BTreeMap<String, DataType> = reps
        .iter()
        .map(|r| (r.name().to_string(), r.data_type()))
        .collect();
    let by_name: BTreeMap<&str, &Representation> =
        reps.iter().map(|r| (r.name(), r)).collect();
    for spec in specs {
        let first = by_name
            .get(spec.members[0].as_str())
            .with_context(|| format!("ensemble {:?} has no loadable first member", spec.label))?;
        type_of.insert(spec.label.clone(), first.data_type());
    }

    let table = aggregate_by_category(&profiles, &category_map)?;
    written.push(write_text(&ctx.out_dir, "category_table.csv", &table.to_csv())?);
    written.push(write_text(
        &ctx.out_dir,
        "category_table.json",
        &json_line(&table_json(&table, &type_of)),
    )?);
    written.push(write_text(
        &ctx.out_dir,
        "rca.svg",
        &render_rca(&table, &type_of, &rca_render_spec(ctx))?,
    )?);

    let by_label: BTreeMap<&str, &ContentProfile> = profiles
        .iter()
        .map(|p| (p.representation.as_str(), p))
        .collect();
    let mut n_diffs = 0usize;
    for spec in specs {
        let profile_a = by_label
            .get(spec.label.as_str())
            .with_context(|| format!("no profile for ensemble {:?}", spec.label))?;
        for member in &spec.members {
            let profile_b = by_label
                .get(member.as_str())
                .with_context(|| format!("no profile for member {:?}", member))?;
            let report = paired_difference_report(profile_a, profile_b, &category_map)?;
            let stem = format!("diff_{}_vs_{}", file_slug(&spec.label), file_slug(member));
            written.push(write_text(&ctx.out_dir, &format!("{stem}.csv"), &report.to_csv())?);
            written.push(write_text(
                &ctx.out_dir,
                &format!("{stem}.json"),
                &json_line(&report.to_json()),
            )?);
            written.push(write_text(
                &ctx.out_dir,
                &format!("{stem}.svg"),
                &render_diff_table(&report)?,
            )?);
            n_diffs += 1;
        }
    }

    let summary = run_summary(ctx, "ensemble", &cfg, &reps, &norms, &profiles)?;
    written.push(write_text(
        &ctx.out_dir,
        "run_summary.json",
        &json_line(&summary),
    )?);

    println!(
        "ensemble: {} spec(s), {} profiles, {} diff reports, wrote {} files to {}",
        specs.len(),
        profiles.len(),
        n_diffs,
        written.len(),
        ctx.out_dir.display()
    );
    Ok(written)
}

// ---------------------------------------------------------------------------
// report: re-render svgs from the json artifacts of an earlier run

fn read_json(path: &Path) -> Result<Value> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn json_strings(v: &Value, key: &str, path: &Path) -> Result<Vec<String>> {
    let arr = v
        .get(key)
        .and_then(Value::as_array)
        .with_context(|| format!("{}: missing array {key:?}", path.display()))?;
    arr.iter()
        .map(|s| {
            s.as_str()
                .map(str::to_string)
                .with_context(|| format!("{}: {key:?} holds a non-string", path.display()))
        })
        .collect()
}

fn parse_types(labels: &[String], path: &Path) -> Result<Vec<DataType>> {
    labels
        .iter()
        .map(|s| {
            s.parse::<DataType>()
                .with_context(|| format!("{}: bad data type {s:?}", path.display()))
        })
        .collect()
}

fn rsa_from_json(v: &Value, path: &Path) -> Result<RsaMatrix> {
    let names = json_strings(v, "names", path)?;
    let labels = parse_types(&json_strings(v, "labels", path)?, path)?;
    let n = names.len();
    if labels.len() != n {
        bail!("{}: names and labels disagree in length", path.display());
    }
    let rows = v
        .get("rho")
        .and_then(Value::as_array)
        .with_context(|| format!("{}: missing array \"rho\"", path.display()))?;
    let mut rho = Vec::with_capacity(n * n);
    for row in rows {
        let row = row
            .as_array()
            .with_context(|| format!("{}: rho rows must be arrays", path.display()))?;
        for cell in row {
            rho.push(cell.as_f64());
        }
    }
    if rho.len() != n * n {
        bail!("{}: rho is not {n}x{n}", path.display());
    }
    let sizes = match v.get("pair_vocab_sizes").and_then(Value::as_array) {
        Some(rows) => {
            let mut sizes = Vec::with_capacity(n * n);
            for row in rows {
                let row = row.as_array().with_context(|| {
                    format!("{}: pair_vocab_sizes rows must be arrays", path.display())
                })?;
                for cell in row {
                    sizes.push(cell.as_u64().unwrap_or(0) as usize);
                }
            }
            if sizes.len() != n * n {
                bail!("{}: pair_vocab_sizes is not {n}x{n}", path.display());
            }
            sizes
        }
        None => vec![0; n * n],
    };
    Ok(RsaMatrix::from_parts(names, labels, rho, sizes))
}

fn mds_from_json(v: &Value, path: &Path) -> Result<(Array2<f64>, Vec<String>, Vec<DataType>)> {
    let names = json_strings(v, "names", path)?;
    let labels = parse_types(&json_strings(v, "labels", path)?, path)?;
    let rows = v
        .get("coords")
        .and_then(Value::as_array)
        .with_context(|| format!("{}: missing array \"coords\"", path.display()))?;
    if names.len() != labels.len() || names.len() != rows.len() {
        bail!("{}: names, labels, and coords disagree in length", path.display());
    }
    let mut coords = Array2::zeros((names.len(), 2));
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .filter(|r| r.len() >= 2)
            .with_context(|| format!("{}: coords rows need two numbers", path.display()))?;
        for (j, cell) in row.iter().take(2).enumerate() {
            coords[[i, j]] = cell
                .as_f64()
                .with_context(|| format!("{}: non-numeric coordinate", path.display()))?;
        }
    }
    Ok((coords, names, labels))
}

fn table_from_json(
    v: &Value,
    path: &Path,
) -> Result<(CategoryTable, BTreeMap<String, DataType>)> {
    let categories = json_strings(v, "categories", path)?;
    let types = parse_types(&json_strings(v, "data_types", path)?, path)?;
    let rows = v
        .get("rows")
        .and_then(Value::as_array)
        .with_context(|| format!("{}: missing array \"rows\"", path.display()))?;
    if types.len() != rows.len() {
        bail!("{}: data_types and rows disagree in length", path.display());
    }
    let mut reps = Vec::with_capacity(rows.len());
    let mut cells = Vec::with_capacity(rows.len() * categories.len());
    let mut type_of = BTreeMap::new();
    for (row, t) in rows.iter().zip(&types) {
        let name = row
            .get("representation")
            .and_then(Value::as_str)
            .with_context(|| format!("{}: row without representation", path.display()))?
            .to_string();
        let scores = row
            .get("scores")
            .and_then(Value::as_object)
            .with_context(|| format!("{}: row without scores", path.display()))?;
        for c in &categories {
            cells.push(scores.get(c).and_then(Value::as_f64));
        }
        type_of.insert(name.clone(), *t);
        reps.push(name);
    }
    Ok((CategoryTable::from_parts(reps, categories, cells), type_of))
}

fn diff_from_json(v: &Value, path: &Path) -> Result<DiffReport> {
    let label_a = v
        .get("a")
        .and_then(Value::as_str)
        .with_context(|| format!("{}: missing \"a\"", path.display()))?
        .to_string();
    let label_b = v
        .get("b")
        .and_then(Value::as_str)
        .with_context(|| format!("{}: missing \"b\"", path.display()))?
        .to_string();
    let rows_v = v
        .get("rows")
        .and_then(Value::as_array)
        .with_context(|| format!("{}: missing array \"rows\"", path.display()))?;
    let mut rows = Vec::with_capacity(rows_v.len());
    for r in rows_v {
        let category = r
            .get("category")
            .and_then(Value::as_str)
            .with_context(|| format!("{}: row without category", path.display()))?
            .to_string();
        let n_norms = r
            .get("n_norms")
            .and_then(Value::as_u64)
            .with_context(|| format!("{}: row without n_norms", path.display()))?
            as usize;
        let median_diff = r.get("median_diff").and_then(Value::as_f64);
        // json carries only statistic and p; the non-serialized tie count is
        // irrelevant for rendering, so n_norms stands in.
        let test = match (
            r.get("wilcoxon_stat").and_then(Value::as_f64),
            r.get("p_value").and_then(Value::as_f64),
        ) {
            (Some(statistic), Some(p_value)) => Some(TestResult {
                statistic,
                p_value,
                n: n_norms,
            }),
            _ => None,
        };
        rows.push(DiffRow {
            category,
            n_norms,
            median_diff,
            test,
        });
    }
    Ok(DiffReport {
        label_a,
        label_b,
        rows,
    })
}

pub fn cmd_report(ctx: &Ctx) -> Result<Vec<PathBuf>> {
    let dir = ctx.out_dir.clone();
    if !dir.is_dir() {
        bail!(
            "output directory {} does not exist; run an analysis first",
            dir.display()
        );
    }
    let mut written = Vec::new();

    let rsa_path = dir.join("rsa.json");
    if rsa_path.is_file() {
        let rsa = rsa_from_json(&read_json(&rsa_path)?, &rsa_path)?;
        written.push(write_text(
            &dir,
            "rsa.svg",
            &render_rsa(&rsa, &RenderSpec::rsa_default())?,
        )?);
    }

    let mds_path = dir.join("mds.json");
    if mds_path.is_file() {
        let (coords, names, labels) = mds_from_json(&read_json(&mds_path)?, &mds_path)?;
        written.push(write_text(&dir, "mds.svg", &render_mds(&coords, &names, &labels)?)?);
    }

    let table_path = dir.join("category_table.json");
    if table_path.is_file() {
        let (table, type_of) = table_from_json(&read_json(&table_path)?, &table_path)?;
        written.push(write_text(
            &dir,
            "rca.svg",
            &render_rca(&table, &type_of, &rca_render_spec(ctx))?,
        )?);
    }

    let mut diff_files: Vec<String> = fs::read_dir(&dir)
        .with_context(|| format!("listing {}", dir.display()))?
        .filter_map(|e| e.ok())
        .filter_map(|e| e.file_name().into_string().ok())
        .filter(|n| n.starts_with("diff_") && n.ends_with(".json"))
        .collect();
    diff_files.sort();
    for name in diff_files {
        let path = dir.join(&name);
        let report = diff_from_json(&read_json(&path)?, &path)?;
        let svg_name = format!("{}.svg", name.trim_end_matches(".json"));
        written.push(write_text(&dir, &svg_name, &render_diff_table(&report)?)?);
    }

    if written.is_empty() {
        bail!(
            "no analysis artifacts (rsa.json, mds.json, category_table.json, diff_*.json) in {}",
            dir.display()
        );
    }
    println!(
        "report: re-rendered {} svg file(s) in {}",
        written.len(),
        dir.display()
    );
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slugs_keep_safe_characters_only() {
        assert_eq!(file_slug("cbow-google.news_300"), "cbow-google.news_300");
        assert_eq!(file_slug("text+behavior"), "text_behavior");
        assert_eq!(file_slug("a b/c"), "a_b_c");
    }

    #[test]
    fn diff_report_round_trips_through_json() {
        let report = DiffReport {
            label_a: "duo".into(),
            label_b: "solo".into(),
            rows: vec![
                DiffRow {
                    category: "size".into(),
                    n_norms: 5,
                    median_diff: Some(0.12),
                    test: Some(TestResult {
                        statistic: 0.0,
                        p_value: 0.0625,
                        n: 5,
                    }),
                },
                DiffRow {
                    category: "valence".into(),
                    n_norms: 2,
                    median_diff: Some(-0.01),
                    test: None,
                },
            ],
        };
        let path = Path::new("mem.json");
        let back = diff_from_json(&report.to_json(), path).unwrap();
        assert_eq!(back.label_a, "duo");
        assert_eq!(back.rows.len(), 2);
        assert_eq!(back.rows[0].median_diff, Some(0.12));
        assert_eq!(back.rows[0].test.unwrap().p_value, 0.0625);
        assert!(back.rows[1].test.is_none());
        assert_eq!(
            render_diff_table(&report).unwrap(),
            render_diff_table(&back).unwrap()
        );
    }

    #[test]
    fn rsa_json_round_trip_preserves_missing_cells() {
        let rsa = RsaMatrix::from_parts(
            vec!["a".into(), "b".into()],
            vec![DataType::Text, DataType::Brain],
            vec![Some(1.0), None, None, Some(1.0)],
            vec![9, 0, 0, 9],
        );
        let back = rsa_from_json(&rsa.to_json(), Path::new("mem.json")).unwrap();
        assert_eq!(back.rho(0, 1), None);
        assert_eq!(back.rho(1, 1), Some(1.0));
        assert_eq!(back.pair_vocab_size(0, 0), 9);
        assert_eq!(rsa.to_csv(), back.to_csv());
    }
}
