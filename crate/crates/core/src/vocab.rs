//! Vocabulary algebra: ordered word sets, base-vocabulary construction,
//! representation subsetting, and frequency coverage.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::store::Representation;

/// An ordered, deduplicated set of words. All set operations return sets
/// that keep the sorted-unique invariant, so results compose freely.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VocabSet {
    words: Vec<String>,
}

impl VocabSet {
    /// Builds a set from arbitrary words, sorting and deduplicating.
    pub fn new<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut words: Vec<String> = words.into_iter().map(Into::into).collect();
        words.sort();
        words.dedup();
        VocabSet { words }
    }

    pub fn empty() -> Self {
        VocabSet { words: Vec::new() }
    }

    /// Wraps a vector that is already sorted and deduplicated.
    /// Panics in debug builds if the invariant does not hold.
    pub(crate) fn from_sorted(words: Vec<String>) -> Self {
        debug_assert!(words.windows(2).all(|w| w[0] < w[1]));
        VocabSet { words }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.binary_search_by(|w| w.as_str().cmp(word)).is_ok()
    }

    /// Position of `word` in sorted order, if present.
    pub fn index_of(&self, word: &str) -> Option<usize> {
        self.words.binary_search_by(|w| w.as_str().cmp(word)).ok()
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }

    pub fn union(&self, other: &VocabSet) -> VocabSet {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.words.len() && j < other.words.len() {
            match self.words[i].cmp(&other.words[j]) {
                std::cmp::Ordering::Less => {
                    out.push(self.words[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.words[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(self.words[i].clone());
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.words[i..]);
        out.extend_from_slice(&other.words[j..]);
        VocabSet { words: out }
    }

    pub fn intersection(&self, other: &VocabSet) -> VocabSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.words.len() && j < other.words.len() {
            match self.words[i].cmp(&other.words[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(self.words[i].clone());
                    i += 1;
                    j += 1;
                }
            }
        }
        VocabSet { words: out }
    }

    pub fn is_subset_of(&self, other: &VocabSet) -> bool {
        self.words.iter().all(|w| other.contains(w))
    }
}

impl<'a> IntoIterator for &'a VocabSet {
    type Item = &'a String;
    type IntoIter = std::slice::Iter<'a, String>;

    fn into_iter(self) -> Self::IntoIter {
        self.words.iter()
    }
}

/// Word occurrence counts with a cached total, for coverage statistics.
#[derive(Debug, Clone)]
pub struct FrequencyTable {
    counts: HashMap<String, f64>,
    total: f64,
}

impl FrequencyTable {
    /// Builds a table from (word, count) pairs. Counts must be nonnegative
    /// and finite, and their sum must be positive.
    pub fn new<I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (String, f64)>,
    {
        let mut counts = HashMap::new();
        let mut total = 0.0;
        for (word, count) in entries {
            if !count.is_finite() || count < 0.0 {
                return Err(Error::NonFinite {
                    word,
                    context: "frequency table".into(),
                });
            }
            if counts.insert(word.clone(), count).is_some() {
                return Err(Error::DuplicateWord {
                    word,
                    context: "frequency table".into(),
                });
            }
            total += count;
        }
        if total <= 0.0 {
            return Err(Error::InvalidArgument(
                "frequency table total must be positive".into(),
            ));
        }
        Ok(FrequencyTable { counts, total })
    }

    /// Reads a csv file with columns `word,count`.
    pub fn from_csv(path: &Path) -> Result<Self> {
        let mut reader = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
        let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
        if headers.len() != 2 || &headers[0] != "word" || &headers[1] != "count" {
            return Err(Error::MalformedLine {
                path: path.display().to_string(),
                line: 1,
                detail: format!("expected header \"word,count\", found {:?}", headers),
            });
        }
        let mut entries = Vec::new();
        for (idx, record) in reader.records().enumerate() {
            let record = record.map_err(|e| csv_error(path, e))?;
            let word = record.get(0).unwrap_or("").to_string();
            let count: f64 = record.get(1).unwrap_or("").parse().map_err(|_| {
                Error::MalformedLine {
                    path: path.display().to_string(),
                    line: idx + 2,
                    detail: format!("count {:?} is not a number", record.get(1).unwrap_or("")),
                }
            })?;
            entries.push((word, count));
        }
        FrequencyTable::new(entries)
    }

    pub fn count(&self, word: &str) -> f64 {
        self.counts.get(word).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.total
    }
}

pub(crate) fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::Io {
            path: path.display().to_string(),
            source,
        },
        other => Error::MalformedLine {
            path: path.display().to_string(),
            line: 0,
            detail: format!("{:?}", other),
        },
    }
}

/// Base vocabulary: words covered by at least one norm AND by at least one
/// behavior or brain representation.
pub fn build_base_vocabulary(
    norm_vocabs: &[VocabSet],
    behavior_vocabs: &[VocabSet],
    brain_vocabs: &[VocabSet],
) -> Result<VocabSet> {
    if norm_vocabs.is_empty() {
        return Err(Error::InvalidArgument("no norm vocabularies given".into()));
    }
    if behavior_vocabs.is_empty() && brain_vocabs.is_empty() {
        return Err(Error::InvalidArgument(
            "no behavior or brain vocabularies given".into(),
        ));
    }
    let norm_union = norm_vocabs
        .iter()
        .fold(VocabSet::empty(), |acc, v| acc.union(v));
    let grounding_union = behavior_vocabs
        .iter()
        .chain(brain_vocabs.iter())
        .fold(VocabSet::empty(), |acc, v| acc.union(v));
    Ok(norm_union.intersection(&grounding_union))
}

/// Restricts a representation to `base`, keeping metadata. The resulting
/// vocabulary is the intersection of the original vocabulary with `base`.
pub fn subset_representation(rep: &Representation, base: &VocabSet) -> Result<Representation> {
    let common = rep.vocab().intersection(base);
    if common.is_empty() {
        return Err(Error::EmptySubset);
    }
    if common.len() == rep.vocab().len() {
        return Ok(rep.clone());
    }
    let dim = rep.dim();
    let mut matrix = ndarray::Array2::<f64>::zeros((common.len(), dim));
    for (row, word) in common.iter().enumerate() {
        let src = rep.vocab().index_of(word).expect("word from intersection");
        matrix.row_mut(row).assign(&rep.matrix().row(src));
    }
    Ok(Representation::from_parts(
        rep.name().to_string(),
        rep.data_type(),
        common,
        matrix,
    ))
}

/// Fraction of total word occurrences covered by `vocab`. Words absent from
/// the frequency table contribute zero mass.
pub fn coverage(vocab: &VocabSet, freq: &FrequencyTable) -> f64 {
    let covered: f64 = vocab.iter().map(|w| freq.count(w)).sum();
    covered / freq.total()
}

/// Intersection of all given vocabularies.
pub fn common_vocabulary(vocabs: &[VocabSet]) -> Result<VocabSet> {
    let (first, rest) = vocabs
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("no vocabularies given".into()))?;
    Ok(rest.iter().fold(first.clone(), |acc, v| acc.intersection(v)))
}
