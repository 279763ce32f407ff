//! Dossier ingestion, tokenization, price-derived targets and labels,
//! dataset splits, and corpus statistics.
//!
//! A corpus file is UTF-8 with one JSON record per line; field names match
//! [`ProjectDossier`]. `price_at` is keyed by integer day offsets since the
//! ICO.

mod synth;

pub use synth::{generate_synthetic, write_labeled_bios, GroundTruth, SynthConfig, SynthProject};

use std::collections::BTreeMap;
use std::collections::HashSet;
use std::io::{BufRead, BufReader};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::sigmoid;

/// One ICO project's raw inputs and price history.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ProjectDossier {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub white_paper: Option<String>,
    /// (person name, bio text) pairs for the founding team.
    #[serde(default)]
    pub team_bios: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub website_text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub github: Option<GithubMeta>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub platform: Option<String>,
    /// Token units; nonnegative when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total_supply: Option<f64>,
    #[serde(default)]
    pub cap_unlimited: bool,
    pub price_series: PriceSeries,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GithubMeta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub readme_text: Option<String>,
    #[serde(default)]
    pub n_branches: u64,
    #[serde(default)]
    pub n_commits: u64,
    #[serde(default)]
    pub loc_total: u64,
    #[serde(default)]
    pub n_files: u64,
}

/// ICO price plus prices at later horizons (days since ICO).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PriceSeries {
    pub ico_price: f64,
    #[serde(default)]
    pub price_at: BTreeMap<u32, f64>,
}

impl PriceSeries {
    /// price(t) / price(0) for horizon `t` days.
    pub fn ratio(&self, horizon: u32) -> Result<f64> {
        let p = self
            .price_at
            .get(&horizon)
            .ok_or(Error::MissingHorizon { horizon })?;
        Ok(p / self.ico_price)
    }

    fn validate(&self, id: &str) -> Result<()> {
        if !(self.ico_price > 0.0) {
            return Err(Error::InvalidDossier {
                id: id.to_string(),
                message: format!("ico_price must be > 0, got {}", self.ico_price),
            });
        }
        for (t, p) in &self.price_at {
            if !(*p > 0.0) {
                return Err(Error::InvalidDossier {
                    id: id.to_string(),
                    message: format!("price_at[{t}] must be > 0, got {p}"),
                });
            }
        }
        Ok(())
    }
}

/// A document split into sentences of tokens. Original casing is preserved;
/// use [`TokenizedDoc::lowercased`] where a case-folded view is needed.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TokenizedDoc {
    pub sentences: Vec<Vec<String>>,
}

impl TokenizedDoc {
    pub fn n_sentences(&self) -> usize {
        self.sentences.len()
    }

    pub fn n_tokens(&self) -> usize {
        self.sentences.iter().map(|s| s.len()).sum()
    }

    pub fn sentence_lengths(&self) -> Vec<usize> {
        self.sentences.iter().map(|s| s.len()).collect()
    }

    pub fn lowercased(&self) -> TokenizedDoc {
        TokenizedDoc {
            sentences: self
                .sentences
                .iter()
                .map(|s| s.iter().map(|t| t.to_lowercase()).collect())
                .collect(),
        }
    }

    /// All tokens in order, sentence boundaries dropped.
    pub fn flat_tokens(&self) -> Vec<String> {
        self.sentences.iter().flatten().cloned().collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Dev,
    Test,
}

/// How a price ratio maps to the regression target c.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum TargetMode {
    /// c = sigmoid(ln ratio); full-range targets, the default.
    #[default]
    Log,
    /// c = sigmoid(ratio); maps [0, inf) into [0.5, 1).
    Literal,
}

impl TargetMode {
    /// The target value a given price ratio maps to.
    pub fn transform(&self, ratio: f64) -> f64 {
        match self {
            TargetMode::Log => sigmoid(ratio.ln()),
            TargetMode::Literal => sigmoid(ratio),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LabeledExample {
    pub dossier_id: String,
    /// Regression target in (0, 1).
    pub target: f64,
    /// 1 iff the project is a scam under the bar used to derive it.
    pub label: u8,
    pub split: Split,
}

/// Load a corpus from a line-delimited JSON file. Errors carry the 1-based
/// line number; duplicate ids are rejected.
pub fn load_corpus(path: impl AsRef<Path>) -> Result<Vec<ProjectDossier>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let reader = BufReader::new(file);
    let mut dossiers = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::io(path.display().to_string(), e))?;
        if line.trim().is_empty() {
            continue;
        }
        let dossier: ProjectDossier =
            serde_json::from_str(&line).map_err(|e| Error::MalformedRecord {
                line: line_no,
                message: e.to_string(),
            })?;
        validate_dossier(&dossier).map_err(|e| match e {
            Error::InvalidDossier { id, message } => Error::MalformedRecord {
                line: line_no,
                message: format!("dossier {id}: {message}"),
            },
            other => other,
        })?;
        if !seen.insert(dossier.id.clone()) {
            return Err(Error::DuplicateId { id: dossier.id });
        }
        dossiers.push(dossier);
    }
    Ok(dossiers)
}

fn validate_dossier(d: &ProjectDossier) -> Result<()> {
    if d.id.is_empty() {
        return Err(Error::InvalidDossier {
            id: "<empty>".to_string(),
            message: "id must be nonempty".to_string(),
        });
    }
    if let Some(supply) = d.total_supply {
        if !(supply >= 0.0) {
            return Err(Error::InvalidDossier {
                id: d.id.clone(),
                message: format!("total_supply must be >= 0, got {supply}"),
            });
        }
    }
    d.price_series.validate(&d.id)
}

/// Write a corpus as line-delimited JSON.
pub fn save_corpus(path: impl AsRef<Path>, dossiers: &[ProjectDossier]) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    for d in dossiers {
        out.push_str(&serde_json::to_string(d).expect("dossier serializes"));
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Split text into sentences of tokens.
///
/// Sentences end at `.`, `!` or `?` followed by whitespace or end of text.
/// Tokens are maximal alphanumeric runs; punctuation separates tokens and is
/// dropped. Abbreviations are not special-cased.
pub fn tokenize(text: &str) -> Result<TokenizedDoc> {
    let mut sentences = Vec::new();
    let mut sentence: Vec<String> = Vec::new();
    let mut token = String::new();
    let chars: Vec<char> = text.chars().collect();
    for (i, &ch) in chars.iter().enumerate() {
        if ch.is_alphanumeric() {
            token.push(ch);
            continue;
        }
        if !token.is_empty() {
            sentence.push(std::mem::take(&mut token));
        }
        if matches!(ch, '.' | '!' | '?') {
            let next_ws = chars
                .get(i + 1)
                .map(|c| c.is_whitespace())
                .unwrap_or(true);
            if next_ws && !sentence.is_empty() {
                sentences.push(std::mem::take(&mut sentence));
            }
        }
    }
    if !token.is_empty() {
        sentence.push(token);
    }
    if !sentence.is_empty() {
        sentences.push(sentence);
    }
    if sentences.is_empty() {
        return Err(Error::EmptyText);
    }
    Ok(TokenizedDoc { sentences })
}

/// Regression target for a price series at horizon `t` days.
pub fn derive_target(series: &PriceSeries, horizon: u32, mode: TargetMode) -> Result<f64> {
    Ok(mode.transform(series.ratio(horizon)?))
}

/// Scam label: 1 iff price(t)/price(0) <= m (inclusive).
pub fn derive_label(series: &PriceSeries, horizon: u32, m: f64) -> Result<u8> {
    Ok(u8::from(series.ratio(horizon)? <= m))
}

/// Deterministic train/dev/test assignment in a 0.8/0.1/0.1 ratio:
/// floor(0.8 n) train, floor(0.1 n) dev, remainder test.
pub fn split_assignment(n: usize, seed: u64) -> Result<Vec<Split>> {
    if n < 10 {
        return Err(Error::TooFewExamples { needed: 10, got: n });
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let n_train = (n as f64 * 0.8).floor() as usize;
    let n_dev = (n as f64 * 0.1).floor() as usize;
    let mut splits = vec![Split::Test; n];
    for (rank, &idx) in order.iter().enumerate() {
        splits[idx] = if rank < n_train {
            Split::Train
        } else if rank < n_train + n_dev {
            Split::Dev
        } else {
            Split::Test
        };
    }
    Ok(splits)
}

/// Assign splits in place over a slice of examples.
pub fn split_dataset(examples: &mut [LabeledExample], seed: u64) -> Result<()> {
    let splits = split_assignment(examples.len(), seed)?;
    for (ex, s) in examples.iter_mut().zip(splits) {
        ex.split = s;
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct StatRow {
    pub total: u64,
    pub mean: f64,
    pub std: f64,
    pub max: u64,
    pub min: u64,
}

impl StatRow {
    fn from_counts(counts: &[u64]) -> StatRow {
        let n = counts.len() as f64;
        let total: u64 = counts.iter().sum();
        let mean = total as f64 / n;
        let var = counts
            .iter()
            .map(|&c| {
                let d = c as f64 - mean;
                d * d
            })
            .sum::<f64>()
            / n;
        StatRow {
            total,
            mean,
            std: var.sqrt(),
            max: *counts.iter().max().unwrap(),
            min: *counts.iter().min().unwrap(),
        }
    }
}

/// Per-document word and sentence count statistics.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CorpusStats {
    pub n_docs: usize,
    pub words: StatRow,
    pub sentences: StatRow,
    /// Std deviation divides by n (population), not n-1.
    pub std_definition: String,
}

pub fn corpus_stats(docs: &[TokenizedDoc]) -> Result<CorpusStats> {
    if docs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let words: Vec<u64> = docs.iter().map(|d| d.n_tokens() as u64).collect();
    let sents: Vec<u64> = docs.iter().map(|d| d.n_sentences() as u64).collect();
    Ok(CorpusStats {
        n_docs: docs.len(),
        words: StatRow::from_counts(&words),
        sentences: StatRow::from_counts(&sents),
        std_definition: "population".to_string(),
    })
}
