//! Representations, norm tables, and every on-disk format they use.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vocab::{csv_error, VocabSet};

/// Source modality of a representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DataType {
    Text,
    Behavior,
    Brain,
}

impl fmt::Display for DataType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DataType::Text => "text",
            DataType::Behavior => "behavior",
            DataType::Brain => "brain",
        };
        f.write_str(s)
    }
}

impl FromStr for DataType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(DataType::Text),
            "behavior" => Ok(DataType::Behavior),
            "brain" => Ok(DataType::Brain),
            other => Err(Error::InvalidArgument(format!(
                "unknown data type {other:?} (expected text, behavior, or brain)"
            ))),
        }
    }
}

/// Measurement scale of a norm table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    Numeric,
    Binary,
    Multiclass,
}

impl NormKind {
    pub fn is_categorical(self) -> bool {
        !matches!(self, NormKind::Numeric)
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NormKind::Numeric => "numeric",
            NormKind::Binary => "binary",
            NormKind::Multiclass => "multiclass",
        };
        f.write_str(s)
    }
}

/// On-disk embedding layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EmbeddingFormat {
    #[serde(rename = "header-text")]
    HeaderText,
    #[serde(rename = "csv")]
    Csv,
}

impl FromStr for EmbeddingFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "header-text" => Ok(EmbeddingFormat::HeaderText),
            "csv" => Ok(EmbeddingFormat::Csv),
            other => Err(Error::InvalidArgument(format!(
                "unknown embedding format {other:?} (expected header-text or csv)"
            ))),
        }
    }
}

/// A word-indexed dense matrix with source metadata. Rows follow the
/// lexicographically sorted vocabulary.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    name: String,
    data_type: DataType,
    vocab: VocabSet,
    matrix: Array2<f64>,
}

impl Representation {
    /// Validates and sorts (word, vector) rows into a representation.
    pub fn new(
        name: String,
        data_type: DataType,
        mut rows: Vec<(String, Vec<f64>)>,
    ) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "representation {name:?} has no rows"
            )));
        }
        let dim = rows[0].1.len();
        if dim == 0 {
            return Err(Error::InvalidArgument(format!(
                "representation {name:?} has zero-width rows"
            )));
        }
        rows.sort_by(|a, b| a.0.cmp(&b.0));
        for pair in rows.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::DuplicateWord {
                    word: pair[0].0.clone(),
                    context: format!("representation {name:?}"),
                });
            }
        }
        let mut matrix = Array2::zeros((rows.len(), dim));
        for (i, (word, values)) in rows.iter().enumerate() {
            if values.len() != dim {
                return Err(Error::DimensionMismatch {
                    path: format!("representation {name:?}"),
                    line: 0,
                    word: word.clone(),
                    expected: dim,
                    found: values.len(),
                });
            }
            for (j, &v) in values.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFinite {
                        word: word.clone(),
                        context: format!("representation {name:?}"),
                    });
                }
                matrix[[i, j]] = v;
            }
        }
        let vocab = VocabSet::from_sorted(rows.into_iter().map(|(w, _)| w).collect());
        Ok(Representation {
            name,
            data_type,
            vocab,
            matrix,
        })
    }

    /// Builds a representation from a matrix whose rows parallel `words`.
    pub fn from_matrix(
        name: String,
        data_type: DataType,
        words: Vec<String>,
        matrix: Array2<f64>,
    ) -> Result<Self> {
        if words.len() != matrix.nrows() {
            return Err(Error::InvalidArgument(format!(
                "{} words for a matrix with {} rows",
                words.len(),
                matrix.nrows()
            )));
        }
        let rows = words
            .into_iter()
            .enumerate()
            .map(|(i, w)| (w, matrix.row(i).to_vec()))
            .collect();
        Representation::new(name, data_type, rows)
    }

    /// Trusted constructor for pre-validated parts (sorted vocab, matching
    /// matrix). Used by subsetting and training code inside the crate.
    pub(crate) fn from_parts(
        name: String,
        data_type: DataType,
        vocab: VocabSet,
        matrix: Array2<f64>,
    ) -> Self {
        debug_assert_eq!(vocab.len(), matrix.nrows());
        Representation {
            name,
            data_type,
            vocab,
            matrix,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn data_type(&self) -> DataType {
        self.data_type
    }

    pub fn vocab(&self) -> &VocabSet {
        &self.vocab
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn len(&self) -> usize {
        self.vocab.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vocab.is_empty()
    }

    pub fn with_name(mut self, name: String) -> Self {
        self.name = name;
        self
    }
}

/// A single word's norm measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormValue {
    Numeric(f64),
    /// Index into the table's label list.
    Class(usize),
}

/// A word → value mapping for one psycholinguistic norm.
#[derive(Debug, Clone, PartialEq)]
pub struct NormTable {
    name: String,
    category: String,
    kind: NormKind,
    labels: Vec<String>,
    entries: BTreeMap<String, NormValue>,
    vocab: VocabSet,
    dropped: usize,
}

impl NormTable {
    /// Validates entries into a norm table. `labels` must be empty for
    /// numeric norms and list ≥ 2 distinct class names otherwise; class
    /// values index into it.
    pub fn new(
        name: String,
        category: String,
        kind: NormKind,
        labels: Vec<String>,
        entries: Vec<(String, NormValue)>,
        dropped: usize,
    ) -> Result<Self> {
        match kind {
            NormKind::Numeric => {
                if !labels.is_empty() {
                    return Err(Error::InvalidArgument(format!(
                        "numeric norm {name:?} must not declare labels"
                    )));
                }
            }
            NormKind::Binary => {
                if labels.len() != 2 {
                    return Err(Error::InvalidArgument(format!(
                        "binary norm {name:?} needs exactly 2 labels, got {}",
                        labels.len()
                    )));
                }
            }
            NormKind::Multiclass => {
                if labels.len() < 2 {
                    return Err(Error::InvalidArgument(format!(
                        "multiclass norm {name:?} needs at least 2 labels, got {}",
                        labels.len()
                    )));
                }
            }
        }
        let mut distinct = labels.clone();
        distinct.sort();
        distinct.dedup();
        if distinct.len() != labels.len() {
            return Err(Error::InvalidArgument(format!(
                "norm {name:?} has duplicate labels"
            )));
        }

        let mut map = BTreeMap::new();
        for (word, value) in entries {
            match (kind, value) {
                (NormKind::Numeric, NormValue::Numeric(v)) => {
                    if !v.is_finite() {
                        return Err(Error::NonFinite {
                            word,
                            context: format!("norm {name:?}"),
                        });
                    }
                }
                (NormKind::Binary | NormKind::Multiclass, NormValue::Class(c)) => {
                    if c >= labels.len() {
                        return Err(Error::UnknownLabel {
                            norm: name.clone(),
                            word,
                            value: format!("class index {c}"),
                        });
                    }
                }
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "norm {name:?} value for {word:?} does not match kind {kind}"
                    )));
                }
            }
            if map.insert(word.clone(), value).is_some() {
                return Err(Error::DuplicateWord {
                    word,
                    context: format!("norm {name:?}"),
                });
            }
        }
        if map.is_empty() {
            return Err(Error::EmptyTable { norm: name });
        }
        let vocab = VocabSet::from_sorted(map.keys().cloned().collect());
        Ok(NormTable {
            name,
            category,
            kind,
            labels,
            entries: map,
            vocab,
            dropped,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn category(&self) -> &str {
        &self.category
    }

    pub fn kind(&self) -> NormKind {
        self.kind
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vocab(&self) -> &VocabSet {
        &self.vocab
    }

    pub fn value(&self, word: &str) -> Option<NormValue> {
        self.entries.get(word).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Rows dropped at load time for missing or non-finite values.
    pub fn dropped_rows(&self) -> usize {
        self.dropped
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }
}

/// One norm listed in a manifest, with its file path resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub file: PathBuf,
    pub name: String,
    pub category: String,
    pub kind: NormKind,
    pub labels: Vec<String>,
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Loads an embedding file. `header-text` files start with a "V D" line
/// followed by V space-separated "word v1 … vD" rows; `csv` files carry a
/// "word,d0,…,d{D-1}" header. Rows are re-sorted lexicographically.
pub fn load_embeddings(
    path: &Path,
    format: EmbeddingFormat,
    name: impl Into<String>,
    data_type: DataType,
) -> Result<Representation> {
    let rows = match format {
        EmbeddingFormat::HeaderText => parse_header_text(path)?,
        EmbeddingFormat::Csv => parse_embedding_csv(path)?,
    };
    Representation::new(name.into(), data_type, rows).map_err(|e| match e {
        // attach the file path to errors detected after parsing
        Error::DuplicateWord { word, .. } => Error::DuplicateWord {
            word,
            context: path.display().to_string(),
        },
        Error::NonFinite { word, .. } => Error::NonFinite {
            word,
            context: path.display().to_string(),
        },
        other => other,
    })
}

fn parse_header_text(path: &Path) -> Result<Vec<(String, Vec<f64>)>> {
    let text = read_file(path)?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| Error::MalformedLine {
        path: path.display().to_string(),
        line: 1,
        detail: "empty file".into(),
    })?;
    let mut parts = header.split_whitespace();
    let (v, d) = match (parts.next(), parts.next(), parts.next()) {
        (Some(v), Some(d), None) => {
            let v: usize = v.parse().map_err(|_| malformed(path, 1, header))?;
            let d: usize = d.parse().map_err(|_| malformed(path, 1, header))?;
            (v, d)
        }
        _ => return Err(malformed(path, 1, header)),
    };

    let mut rows = Vec::with_capacity(v);
    for (idx, line) in lines {
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let mut tokens = line.split_whitespace();
        let word = tokens
            .next()
            .ok_or_else(|| malformed(path, lineno, line))?
            .to_string();
        let values: Vec<f64> = tokens
            .map(|t| t.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| malformed(path, lineno, line))?;
        if values.len() != d {
            return Err(Error::DimensionMismatch {
                path: path.display().to_string(),
                line: lineno,
                word,
                expected: d,
                found: values.len(),
            });
        }
        rows.push((word, values));
    }
    if rows.len() != v {
        return Err(Error::MalformedLine {
            path: path.display().to_string(),
            line: 1,
            detail: format!("header declares {} rows, file has {}", v, rows.len()),
        });
    }
    Ok(rows)
}

fn malformed(path: &Path, line: usize, content: &str) -> Error {
    let mut shown: String = content.chars().take(60).collect();
    if shown.len() < content.len() {
        shown.push('…');
    }
    Error::MalformedLine {
        path: path.display().to_string(),
        line,
        detail: format!("cannot parse {shown:?}"),
    }
}

fn parse_embedding_csv(path: &Path) -> Result<Vec<(String, Vec<f64>)>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    if headers.is_empty() || &headers[0] != "word" || headers.len() < 2 {
        return Err(Error::MalformedLine {
            path: path.display().to_string(),
            line: 1,
            detail: format!("expected header \"word,d0,…\", found {:?}", headers),
        });
    }
    for (j, h) in headers.iter().skip(1).enumerate() {
        if h != format!("d{j}") {
            return Err(Error::MalformedLine {
                path: path.display().to_string(),
                line: 1,
                detail: format!("dimension column {} is named {:?}, expected \"d{}\"", j, h, j),
            });
        }
    }
    let d = headers.len() - 1;
    let mut rows = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let lineno = idx + 2;
        let word = record.get(0).unwrap_or("").to_string();
        if record.len() != d + 1 {
            return Err(Error::DimensionMismatch {
                path: path.display().to_string(),
                line: lineno,
                word,
                expected: d,
                found: record.len().saturating_sub(1),
            });
        }
        let values: Vec<f64> = record
            .iter()
            .skip(1)
            .map(|t| t.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| malformed(path, lineno, &record.iter().collect::<Vec<_>>().join(",")))?;
        rows.push((word, values));
    }
    Ok(rows)
}

/// Writes a representation in the requested format. Values print in the
/// shortest form that parses back to the identical 64-bit float, so a
/// write/load round trip is bit-exact.
pub fn write_embeddings(
    rep: &Representation,
    path: &Path,
    format: EmbeddingFormat,
) -> Result<()> {
    let io_err = |source: std::io::Error| Error::Io {
        path: path.display().to_string(),
        source,
    };
    let file = std::fs::File::create(path).map_err(io_err)?;
    let mut out = std::io::BufWriter::new(file);
    let (n, d) = rep.matrix.dim();
    match format {
        EmbeddingFormat::HeaderText => {
            writeln!(out, "{} {}", n, d).map_err(io_err)?;
            for (i, word) in rep.vocab.iter().enumerate() {
                write!(out, "{}", word).map_err(io_err)?;
                for j in 0..d {
                    write!(out, " {}", rep.matrix[[i, j]]).map_err(io_err)?;
                }
                writeln!(out).map_err(io_err)?;
            }
        }
        EmbeddingFormat::Csv => {
            let header: Vec<String> = std::iter::once("word".to_string())
                .chain((0..d).map(|j| format!("d{j}")))
                .collect();
            writeln!(out, "{}", header.join(",")).map_err(io_err)?;
            for (i, word) in rep.vocab.iter().enumerate() {
                write!(out, "{}", word).map_err(io_err)?;
                for j in 0..d {
                    write!(out, ",{}", rep.matrix[[i, j]]).map_err(io_err)?;
                }
                writeln!(out).map_err(io_err)?;
            }
        }
    }
    out.flush().map_err(io_err)
}

fn is_missing_numeric(raw: &str) -> bool {
    raw.is_empty() || raw.eq_ignore_ascii_case("na") || raw.eq_ignore_ascii_case("nan")
}

/// Loads one norm csv ("word,value") according to its manifest entry.
/// Numeric rows whose value is empty, NA, NaN, or non-finite are dropped
/// and counted; categorical rows must use a declared label (empty values
/// are dropped as missing).
pub fn load_norm_table(path: &Path, entry: &ManifestEntry) -> Result<NormTable> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    if headers.len() != 2 || &headers[0] != "word" || &headers[1] != "value" {
        return Err(Error::MalformedLine {
            path: path.display().to_string(),
            line: 1,
            detail: format!("expected header \"word,value\", found {:?}", headers),
        });
    }

    let mut entries = Vec::new();
    let mut dropped = 0usize;
    for (idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let lineno = idx + 2;
        let word = record.get(0).unwrap_or("").to_string();
        let raw = record.get(1).unwrap_or("").trim();
        match entry.kind {
            NormKind::Numeric => {
                if is_missing_numeric(raw) {
                    dropped += 1;
                    continue;
                }
                let value: f64 = raw.parse().map_err(|_| malformed(path, lineno, raw))?;
                if !value.is_finite() {
                    dropped += 1;
                    continue;
                }
                entries.push((word, NormValue::Numeric(value)));
            }
            NormKind::Binary | NormKind::Multiclass => {
                if raw.is_empty() {
                    dropped += 1;
                    continue;
                }
                let class = entry
                    .labels
                    .iter()
                    .position(|l| l == raw)
                    .ok_or_else(|| Error::UnknownLabel {
                        norm: entry.name.clone(),
                        word: word.clone(),
                        value: raw.to_string(),
                    })?;
                entries.push((word, NormValue::Class(class)));
            }
        }
    }
    NormTable::new(
        entry.name.clone(),
        entry.category.clone(),
        entry.kind,
        entry.labels.clone(),
        entries,
        dropped,
    )
}

#[derive(Debug, Deserialize)]
struct RawManifest {
    norms: Vec<RawManifestEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifestEntry {
    file: String,
    name: String,
    category: String,
    kind: NormKind,
    #[serde(default)]
    labels: Vec<String>,
}

/// Parses a TOML norm manifest. Each `[[norms]]` entry lists file, name,
/// category, kind, and (for categorical kinds) labels; file paths resolve
/// relative to the manifest's directory and must exist.
pub fn load_norm_manifest(path: &Path) -> Result<Vec<ManifestEntry>> {
    let text = read_file(path)?;
    let raw: RawManifest = toml::from_str(&text).map_err(|e| Error::Manifest {
        path: path.display().to_string(),
        detail: e.to_string(),
    })?;
    let dir = path.parent().unwrap_or_else(|| Path::new("."));

    let mut seen = std::collections::HashSet::new();
    let mut entries = Vec::with_capacity(raw.norms.len());
    for raw_entry in raw.norms {
        if !seen.insert(raw_entry.name.clone()) {
            return Err(Error::Manifest {
                path: path.display().to_string(),
                detail: format!("duplicate norm name {:?}", raw_entry.name),
            });
        }
        match raw_entry.kind {
            NormKind::Numeric if !raw_entry.labels.is_empty() => {
                return Err(Error::Manifest {
                    path: path.display().to_string(),
                    detail: format!("numeric norm {:?} must not list labels", raw_entry.name),
                });
            }
            NormKind::Binary if raw_entry.labels.len() != 2 => {
                return Err(Error::Manifest {
                    path: path.display().to_string(),
                    detail: format!(
                        "binary norm {:?} needs exactly 2 labels, got {}",
                        raw_entry.name,
                        raw_entry.labels.len()
                    ),
                });
            }
            NormKind::Multiclass if raw_entry.labels.len() < 2 => {
                return Err(Error::Manifest {
                    path: path.display().to_string(),
                    detail: format!("multiclass norm {:?} needs at least 2 labels", raw_entry.name),
                });
            }
            _ => {}
        }
        let file = dir.join(&raw_entry.file);
        if !file.is_file() {
            return Err(Error::Manifest {
                path: path.display().to_string(),
                detail: format!(
                    "norm {:?} points at missing file {}",
                    raw_entry.name,
                    file.display()
                ),
            });
        }
        entries.push(ManifestEntry {
            file,
            name: raw_entry.name,
            category: raw_entry.category,
            kind: raw_entry.kind,
            labels: raw_entry.labels,
        });
    }
    Ok(entries)
}

/// Loads every table listed in a manifest, in manifest order.
pub fn load_norm_tables(manifest_path: &Path) -> Result<Vec<NormTable>> {
    load_norm_manifest(manifest_path)?
        .iter()
        .map(|entry| load_norm_table(&entry.file, entry))
        .collect()
}
