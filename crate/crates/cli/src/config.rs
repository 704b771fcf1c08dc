//! Run configuration: a single TOML file describing representations, norms,
//! probe settings, ensembles, and output rules for one analysis run.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use wordprobe_core::{
    default_alpha_grid, load_norm_manifest, DataType, EmbeddingFormat, EnsembleSpec,
    FrequencyTable, ProbeConfig,
};

/// One embedding file to load.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepresentationEntry {
    /// Path to the embedding file, relative to the config file.
    pub path: String,
    pub format: EmbeddingFormat,
    pub name: String,
    pub data_type: DataType,
}

/// `[probe]` section; every field has a default, the whole section may be
/// omitted.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProbeSection {
    pub outer_folds: usize,
    pub inner_folds: usize,
    /// Regularization grid, ascending. The 10^-5..10^5 ladder when absent.
    pub alpha_grid: Option<Vec<f64>>,
    pub min_test_samples: usize,
    pub standardize: bool,
}

impl Default for ProbeSection {
    fn default() -> Self {
        ProbeSection {
            outer_folds: 5,
            inner_folds: 5,
            alpha_grid: None,
            min_test_samples: 20,
            standardize: false,
        }
    }
}

/// `[report]` section: rendering overrides.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReportSection {
    pub rca_color_min: Option<f64>,
    pub rca_color_max: Option<f64>,
    /// Representation (or ensemble label) whose scores order the columns of
    /// the rca heatmap.
    pub order_by: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    /// Where all command outputs land, relative to the config file.
    pub output_dir: String,
    /// Norm manifest path (TOML with `[[norms]]` entries).
    #[serde(default)]
    pub norms: Option<String>,
    /// Optional `word,count` csv used for coverage statistics.
    #[serde(default)]
    pub frequencies: Option<String>,
    #[serde(default)]
    pub representations: Vec<RepresentationEntry>,
    #[serde(default)]
    pub probe: ProbeSection,
    #[serde(default)]
    pub ensembles: Vec<EnsembleSpec>,
    #[serde(default)]
    pub report: ReportSection,
}

/// A parsed config plus the directory its relative paths resolve against.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub run: RunConfig,
    pub base_dir: PathBuf,
    pub path: PathBuf,
}

impl LoadedConfig {
    /// Parses a config file. Error strings carry the file path and, for
    /// schema problems, the line and column from the TOML parser.
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let run: RunConfig =
            toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        let base_dir = path
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_else(|| PathBuf::from("."));
        Ok(LoadedConfig {
            run,
            base_dir,
            path: path.to_path_buf(),
        })
    }

    pub fn resolve(&self, rel: &str) -> PathBuf {
        let p = Path::new(rel);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    /// The probe settings with the grid default filled in and a seed
    /// substituted (configs hold one seed; `--seed` may override it).
    pub fn probe_config(&self, seed: u64) -> ProbeConfig {
        let p = &self.run.probe;
        ProbeConfig {
            outer_folds: p.outer_folds,
            inner_folds: p.inner_folds,
            alpha_grid: p.alpha_grid.clone().unwrap_or_else(default_alpha_grid),
            min_test_samples: p.min_test_samples,
            seed,
            standardize: p.standardize,
        }
    }

    /// Checks everything that can be checked without loading embeddings:
    /// referenced files exist and parse, names are unique, sections are
    /// internally consistent. Returns one message per problem.
    pub fn validate(&self) -> Vec<String> {
        let mut issues = Vec::new();
        let run = &self.run;

        let mut seen = BTreeSet::new();
        for entry in &run.representations {
            if !seen.insert(entry.name.as_str()) {
                issues.push(format!("duplicate representation name {:?}", entry.name));
            }
            let path = self.resolve(&entry.path);
            if !path.is_file() {
                issues.push(format!(
                    "representation {:?}: no file at {}",
                    entry.name,
                    path.display()
                ));
            }
        }

        if let Some(rel) = &run.norms {
            let path = self.resolve(rel);
            if !path.is_file() {
                issues.push(format!("norm manifest: no file at {}", path.display()));
            } else if let Err(e) = load_norm_manifest(&path) {
                issues.push(format!("norm manifest: {e}"));
            }
        }

        if let Some(rel) = &run.frequencies {
            let path = self.resolve(rel);
            if !path.is_file() {
                issues.push(format!("frequency table: no file at {}", path.display()));
            } else if let Err(e) = FrequencyTable::from_csv(&path) {
                issues.push(format!("frequency table: {e}"));
            }
        }

        if let Err(e) = self.probe_config(run.seed).validate() {
            issues.push(format!("probe section: {e}"));
        }

        let rep_names: BTreeSet<&str> = run
            .representations
            .iter()
            .map(|e| e.name.as_str())
            .collect();
        let mut labels = BTreeSet::new();
        for spec in &run.ensembles {
            if let Err(e) = spec.validate() {
                issues.push(format!("ensemble {:?}: {e}", spec.label));
            }
            if !labels.insert(spec.label.as_str()) {
                issues.push(format!("duplicate ensemble label {:?}", spec.label));
            }
            if rep_names.contains(spec.label.as_str()) {
                issues.push(format!(
                    "ensemble label {:?} collides with a representation name",
                    spec.label
                ));
            }
            for member in &spec.members {
                if !rep_names.contains(member.as_str()) {
                    issues.push(format!(
                        "ensemble {:?}: unknown member {:?}",
                        spec.label, member
                    ));
                }
            }
        }

        if let (Some(lo), Some(hi)) = (run.report.rca_color_min, run.report.rca_color_max) {
            if !(lo < hi) {
                issues.push(format!(
                    "report: color bounds [{lo}, {hi}] are not increasing"
                ));
            }
        }
        if let Some(reference) = &run.report.order_by {
            let known = rep_names.contains(reference.as_str())
                || run.ensembles.iter().any(|s| &s.label == reference);
            if !known {
                issues.push(format!(
                    "report: order_by references unknown representation {:?}",
                    reference
                ));
            }
        }

        issues
    }
}
