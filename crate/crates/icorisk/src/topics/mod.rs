//! Latent Dirichlet Allocation trained by collapsed Gibbs sampling.
//!
//! θ and φ are integrated out; each sweep resamples every token's topic
//! assignment from the count statistics. φ is estimated from the final
//! sample with β smoothing, so rows are strictly positive distributions.
//! New documents are folded in against the fixed φ.

mod stopwords;

use std::collections::{HashMap, HashSet};
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::artifact;
use crate::corpus::TokenizedDoc;
use crate::error::{Error, Result};

pub use stopwords::STOPWORDS;

pub const TOPIC_MODEL_FORMAT: &str = "topic-model";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LdaConfig {
    pub k: usize,
    /// Dirichlet prior on document-topic mixtures; defaults to 50/K.
    pub alpha: Option<f64>,
    /// Dirichlet prior on topic-word distributions.
    pub beta: f64,
    pub iterations: usize,
    /// Tokens appearing fewer times than this are dropped from the vocabulary.
    pub min_count: usize,
    pub filter_stopwords: bool,
}

impl Default for LdaConfig {
    fn default() -> Self {
        LdaConfig {
            k: 50,
            alpha: None,
            beta: 0.01,
            iterations: 100,
            min_count: 3,
            filter_stopwords: true,
        }
    }
}

impl LdaConfig {
    pub fn effective_alpha(&self) -> f64 {
        self.alpha.unwrap_or(50.0 / self.k as f64)
    }
}

/// Trained topic model: K × V topic-word matrix plus vocabulary.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(from = "TopicModelData", into = "TopicModelData")]
pub struct TopicModel {
    pub k: usize,
    pub vocab: Vec<String>,
    /// K rows, each a distribution over the vocabulary.
    pub phi: Vec<Vec<f64>>,
    pub alpha: f64,
    pub beta: f64,
    /// Number of training documents.
    pub n_train_docs: usize,
    word_index: HashMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
struct TopicModelData {
    k: usize,
    vocab: Vec<String>,
    phi: Vec<Vec<f64>>,
    alpha: f64,
    beta: f64,
    n_train_docs: usize,
}

impl From<TopicModelData> for TopicModel {
    fn from(d: TopicModelData) -> Self {
        let word_index = d
            .vocab
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        TopicModel {
            k: d.k,
            vocab: d.vocab,
            phi: d.phi,
            alpha: d.alpha,
            beta: d.beta,
            n_train_docs: d.n_train_docs,
            word_index,
        }
    }
}

impl From<TopicModel> for TopicModelData {
    fn from(m: TopicModel) -> Self {
        TopicModelData {
            k: m.k,
            vocab: m.vocab,
            phi: m.phi,
            alpha: m.alpha,
            beta: m.beta,
            n_train_docs: m.n_train_docs,
        }
    }
}

impl TopicModel {
    pub fn vocab_size(&self) -> usize {
        self.vocab.len()
    }

    pub fn word_index(&self, word: &str) -> Option<usize> {
        self.word_index.get(word).copied()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        artifact::save(path, TOPIC_MODEL_FORMAT, self)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        artifact::load(path, TOPIC_MODEL_FORMAT)
    }
}

/// Per-document topic mixture θ.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DocTopicMixture {
    pub theta: Vec<f64>,
}

/// Collapsed Gibbs state over a fixed corpus of word-id documents.
///
/// Exposed so tests can check count conservation sweep by sweep.
pub struct GibbsSampler {
    k: usize,
    v: usize,
    alpha: f64,
    beta: f64,
    docs: Vec<Vec<usize>>,
    z: Vec<Vec<usize>>,
    n_dk: Vec<Vec<u32>>,
    n_kv: Vec<Vec<u32>>,
    n_k: Vec<u32>,
    rng: ChaCha8Rng,
}

impl GibbsSampler {
    pub fn new(docs: Vec<Vec<usize>>, k: usize, v: usize, alpha: f64, beta: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut n_dk = vec![vec![0u32; k]; docs.len()];
        let mut n_kv = vec![vec![0u32; v]; k];
        let mut n_k = vec![0u32; k];
        let mut z = Vec::with_capacity(docs.len());
        for (d, doc) in docs.iter().enumerate() {
            let mut zd = Vec::with_capacity(doc.len());
            for &w in doc {
                let t = rng.gen_range(0..k);
                zd.push(t);
                n_dk[d][t] += 1;
                n_kv[t][w] += 1;
                n_k[t] += 1;
            }
            z.push(zd);
        }
        GibbsSampler {
            k,
            v,
            alpha,
            beta,
            docs,
            z,
            n_dk,
            n_kv,
            n_k,
            rng,
        }
    }

    /// One full pass resampling every token's topic.
    pub fn sweep(&mut self) {
        let v_beta = self.v as f64 * self.beta;
        let mut weights = vec![0.0f64; self.k];
        for d in 0..self.docs.len() {
            for i in 0..self.docs[d].len() {
                let w = self.docs[d][i];
                let old = self.z[d][i];
                self.n_dk[d][old] -= 1;
                self.n_kv[old][w] -= 1;
                self.n_k[old] -= 1;

                let mut total = 0.0;
                for t in 0..self.k {
                    let p = (self.n_dk[d][t] as f64 + self.alpha)
                        * (self.n_kv[t][w] as f64 + self.beta)
                        / (self.n_k[t] as f64 + v_beta);
                    weights[t] = p;
                    total += p;
                }
                let new = sample_categorical(&mut self.rng, &weights, total);

                self.z[d][i] = new;
                self.n_dk[d][new] += 1;
                self.n_kv[new][w] += 1;
                self.n_k[new] += 1;
            }
        }
    }

    /// φ[k][v] = (n(k,v) + β) / (n(k) + Vβ).
    pub fn phi(&self) -> Vec<Vec<f64>> {
        let v_beta = self.v as f64 * self.beta;
        self.n_kv
            .iter()
            .zip(&self.n_k)
            .map(|(row, &nk)| {
                row.iter()
                    .map(|&c| (c as f64 + self.beta) / (nk as f64 + v_beta))
                    .collect()
            })
            .collect()
    }

    pub fn doc_topic_counts(&self) -> &[Vec<u32>] {
        &self.n_dk
    }

    pub fn doc_len(&self, d: usize) -> usize {
        self.docs[d].len()
    }

    pub fn n_docs(&self) -> usize {
        self.docs.len()
    }

    /// Recompute all count matrices from the raw assignments and compare.
    pub fn counts_consistent(&self) -> bool {
        let mut n_dk = vec![vec![0u32; self.k]; self.docs.len()];
        let mut n_kv = vec![vec![0u32; self.v]; self.k];
        let mut n_k = vec![0u32; self.k];
        for (d, doc) in self.docs.iter().enumerate() {
            for (i, &w) in doc.iter().enumerate() {
                let t = self.z[d][i];
                n_dk[d][t] += 1;
                n_kv[t][w] += 1;
                n_k[t] += 1;
            }
        }
        n_dk == self.n_dk && n_kv == self.n_kv && n_k == self.n_k
    }
}

fn sample_categorical(rng: &mut ChaCha8Rng, weights: &[f64], total: f64) -> usize {
    let r = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        acc += w;
        if r < acc {
            return i;
        }
    }
    weights.len() - 1
}

/// Lowercased vocabulary over the corpus after min-count and stopword
/// filtering, in first-seen order, plus each document as word ids
/// (out-of-vocabulary tokens dropped).
pub fn build_vocabulary(
    docs: &[TokenizedDoc],
    config: &LdaConfig,
) -> Result<(Vec<String>, Vec<Vec<usize>>)> {
    let stop: HashSet<&str> = if config.filter_stopwords {
        STOPWORDS.iter().copied().collect()
    } else {
        HashSet::new()
    };
    let mut counts: HashMap<String, usize> = HashMap::new();
    let lowered: Vec<Vec<String>> = docs
        .iter()
        .map(|d| {
            d.flat_tokens()
                .iter()
                .map(|t| t.to_lowercase())
                .collect::<Vec<_>>()
        })
        .collect();
    for doc in &lowered {
        for tok in doc {
            *counts.entry(tok.clone()).or_insert(0) += 1;
        }
    }
    let mut vocab = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut id_docs = Vec::with_capacity(docs.len());
    for doc in &lowered {
        let mut ids = Vec::with_capacity(doc.len());
        for tok in doc {
            if stop.contains(tok.as_str()) || counts[tok] < config.min_count {
                continue;
            }
            let id = *index.entry(tok.clone()).or_insert_with(|| {
                vocab.push(tok.clone());
                vocab.len() - 1
            });
            ids.push(id);
        }
        id_docs.push(ids);
    }
    if vocab.is_empty() {
        return Err(Error::EmptyVocabulary);
    }
    Ok((vocab, id_docs))
}

/// Train a topic model with `config.iterations` full Gibbs sweeps.
pub fn fit_lda(docs: &[TokenizedDoc], config: &LdaConfig, seed: u64) -> Result<TopicModel> {
    if config.k < 2 {
        return Err(Error::InvalidConfig {
            field: "lda.k".to_string(),
            message: "need at least 2 topics".to_string(),
        });
    }
    if docs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let (vocab, id_docs) = build_vocabulary(docs, config)?;
    let alpha = config.effective_alpha();
    let mut sampler = GibbsSampler::new(
        id_docs,
        config.k,
        vocab.len(),
        alpha,
        config.beta,
        seed,
    );
    for _ in 0..config.iterations {
        sampler.sweep();
    }
    let phi = sampler.phi();
    Ok(TopicModel::from(TopicModelData {
        k: config.k,
        vocab,
        phi,
        alpha,
        beta: config.beta,
        n_train_docs: docs.len(),
    }))
}

/// Fold a new document in against fixed φ and return its smoothed mixture.
pub fn infer_mixture(
    model: &TopicModel,
    doc: &TokenizedDoc,
    fold_in_iterations: usize,
    seed: u64,
) -> Result<DocTopicMixture> {
    let ids: Vec<usize> = doc
        .flat_tokens()
        .iter()
        .filter_map(|t| model.word_index(&t.to_lowercase()))
        .collect();
    if ids.is_empty() {
        return Err(Error::NoInVocabToken);
    }
    let k = model.k;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z: Vec<usize> = Vec::with_capacity(ids.len());
    let mut n_local = vec![0u32; k];
    for _ in &ids {
        let t = rng.gen_range(0..k);
        z.push(t);
        n_local[t] += 1;
    }
    let mut weights = vec![0.0f64; k];
    for _ in 0..fold_in_iterations {
        for (i, &w) in ids.iter().enumerate() {
            let old = z[i];
            n_local[old] -= 1;
            let mut total = 0.0;
            for t in 0..k {
                let p = (n_local[t] as f64 + model.alpha) * model.phi[t][w];
                weights[t] = p;
                total += p;
            }
            let new = sample_categorical(&mut rng, &weights, total);
            z[i] = new;
            n_local[new] += 1;
        }
    }
    let denom = ids.len() as f64 + k as f64 * model.alpha;
    let theta = n_local
        .iter()
        .map(|&c| (c as f64 + model.alpha) / denom)
        .collect();
    Ok(DocTopicMixture { theta })
}

/// The `n` highest-probability words of topic `topic`, ties broken by
/// vocabulary index.
pub fn top_words(model: &TopicModel, topic: usize, n: usize) -> Result<Vec<(String, f64)>> {
    if topic >= model.k {
        return Err(Error::IndexOutOfRange {
            what: "topic",
            index: topic,
            max: model.k - 1,
        });
    }
    if n > model.vocab_size() {
        return Err(Error::IndexOutOfRange {
            what: "top-word count",
            index: n,
            max: model.vocab_size(),
        });
    }
    let row = &model.phi[topic];
    let mut order: Vec<usize> = (0..row.len()).collect();
    order.sort_by(|&a, &b| {
        row[b]
            .partial_cmp(&row[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    Ok(order
        .into_iter()
        .take(n)
        .map(|i| (model.vocab[i].clone(), row[i]))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    fn doc_of(words: &[&str]) -> TokenizedDoc {
        TokenizedDoc {
            sentences: vec![words.iter().map(|s| s.to_string()).collect()],
        }
    }

    /// Two disjoint word sets; each doc draws 30 words, 90% from its own set.
    fn planted_corpus(n_docs: usize, seed: u64) -> (Vec<TokenizedDoc>, Vec<Vec<String>>) {
        let sets: Vec<Vec<String>> = vec![
            (0..20).map(|i| format!("alpha{i:02}")).collect(),
            (0..20).map(|i| format!("beta{i:02}")).collect(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let docs = (0..n_docs)
            .map(|d| {
                let own = d % 2;
                let words: Vec<String> = (0..30)
                    .map(|_| {
                        let set = if rng.gen::<f64>() < 0.9 { own } else { 1 - own };
                        sets[set][rng.gen_range(0..20)].clone()
                    })
                    .collect();
                TokenizedDoc {
                    sentences: vec![words],
                }
            })
            .collect();
        (docs, sets)
    }

    fn purity(model: &TopicModel, planted: &[Vec<String>]) -> f64 {
        let mut worst: f64 = 1.0;
        for t in 0..model.k {
            let tops = top_words(model, t, 20).unwrap();
            let best = planted
                .iter()
                .map(|set| tops.iter().filter(|(w, _)| set.contains(w)).count())
                .max()
                .unwrap();
            worst = worst.min(best as f64 / 20.0);
        }
        worst
    }

    #[test]
    fn defaults_match_reported_settings() {
        let cfg = LdaConfig::default();
        assert_eq!(cfg.k, 50);
        assert_eq!(cfg.iterations, 100);
        assert_eq!(cfg.beta, 0.01);
        assert_eq!(cfg.effective_alpha(), 1.0);
    }

    #[test]
    fn single_word_vocabulary_degenerates() {
        let docs = vec![doc_of(&["token"; 10])];
        let cfg = LdaConfig {
            k: 2,
            iterations: 20,
            min_count: 1,
            ..LdaConfig::default()
        };
        let model = fit_lda(&docs, &cfg, 3).unwrap();
        assert_eq!(model.vocab_size(), 1);
        for row in &model.phi {
            assert!((row[0] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_vocabulary_is_an_error() {
        // All tokens are stopwords.
        let docs = vec![doc_of(&["the", "and", "of", "the", "and", "of"])];
        let cfg = LdaConfig {
            k: 2,
            min_count: 1,
            ..LdaConfig::default()
        };
        assert!(matches!(
            fit_lda(&docs, &cfg, 3).unwrap_err(),
            Error::EmptyVocabulary
        ));
    }

    #[test]
    fn recovers_planted_topics() {
        let (docs, sets) = planted_corpus(60, 5);
        let cfg = LdaConfig {
            k: 2,
            iterations: 60,
            min_count: 1,
            ..LdaConfig::default()
        };
        let model = fit_lda(&docs, &cfg, 11).unwrap();
        assert!(
            purity(&model, &sets) >= 0.9,
            "purity {} below 0.9",
            purity(&model, &sets)
        );
    }

    #[test]
    fn phi_rows_are_distributions() {
        let (docs, _) = planted_corpus(20, 9);
        let cfg = LdaConfig {
            k: 3,
            iterations: 10,
            min_count: 1,
            ..LdaConfig::default()
        };
        let model = fit_lda(&docs, &cfg, 2).unwrap();
        for row in &model.phi {
            let sum: f64 = row.iter().sum();
            assert!((sum - 1.0).abs() < 1e-9);
            assert!(row.iter().all(|&p| p > 0.0));
        }
    }

    #[test]
    fn counts_conserved_each_sweep() {
        let (docs, _) = planted_corpus(10, 1);
        let cfg = LdaConfig {
            k: 4,
            min_count: 1,
            ..LdaConfig::default()
        };
        let (vocab, id_docs) = build_vocabulary(&docs, &cfg).unwrap();
        let lens: Vec<usize> = id_docs.iter().map(|d| d.len()).collect();
        let mut sampler = GibbsSampler::new(id_docs, 4, vocab.len(), 1.0, 0.01, 7);
        for _ in 0..10 {
            sampler.sweep();
            assert!(sampler.counts_consistent());
            for (d, &len) in lens.iter().enumerate() {
                let row_sum: u32 = sampler.doc_topic_counts()[d].iter().sum();
                assert_eq!(row_sum as usize, len);
            }
        }
    }

    #[test]
    fn infer_mixture_concentrates_on_planted_topic() {
        let (docs, sets) = planted_corpus(60, 5);
        let cfg = LdaConfig {
            k: 2,
            iterations: 60,
            min_count: 1,
            ..LdaConfig::default()
        };
        let model = fit_lda(&docs, &cfg, 11).unwrap();
        // Which trained topic matches planted set 0?
        let tops0 = top_words(&model, 0, 20).unwrap();
        let hits0 = tops0.iter().filter(|(w, _)| sets[0].contains(w)).count();
        let matched = if hits0 >= 10 { 0 } else { 1 };
        let pure_doc = doc_of(&[
            "alpha00", "alpha01", "alpha02", "alpha03", "alpha04", "alpha05", "alpha06", "alpha07",
            "alpha08", "alpha09", "alpha10", "alpha11", "alpha12", "alpha13", "alpha14", "alpha15",
            "alpha00", "alpha01", "alpha02", "alpha03", "alpha04", "alpha05", "alpha06", "alpha07",
            "alpha08", "alpha09", "alpha10", "alpha11", "alpha12", "alpha13", "alpha14", "alpha15",
        ]);
        let mix = infer_mixture(&model, &pure_doc, 50, 21).unwrap();
        assert!(
            mix.theta[matched] >= 0.8,
            "theta {:?} not concentrated on topic {matched}",
            mix.theta
        );
    }

    #[test]
    fn uniform_phi_gives_near_uniform_mixture() {
        // Hand-built model with uniform rows; alpha large enough (default
        // 50/K) that a single fold-in draw concentrates near uniform.
        let v = 10usize;
        let vocab: Vec<String> = (0..v).map(|i| format!("w{i}")).collect();
        let model = TopicModel::from(TopicModelData {
            k: 2,
            vocab,
            phi: vec![vec![1.0 / v as f64; v]; 2],
            alpha: 25.0,
            beta: 0.01,
            n_train_docs: 1,
        });
        let words: Vec<&str> = (0..100).map(|i| ["w0", "w1", "w2", "w3"][i % 4]).collect();
        let doc = doc_of(&words);
        let mix = infer_mixture(&model, &doc, 50, 13).unwrap();
        for &t in &mix.theta {
            assert!((t - 0.5).abs() < 0.2, "theta {:?}", mix.theta);
        }
        let sum: f64 = mix.theta.iter().sum();
        assert!((sum - 1.0).abs() < 1e-9);
    }

    #[test]
    fn infer_mixture_is_deterministic() {
        let (docs, _) = planted_corpus(30, 5);
        let cfg = LdaConfig {
            k: 2,
            iterations: 30,
            min_count: 1,
            ..LdaConfig::default()
        };
        let model = fit_lda(&docs, &cfg, 11).unwrap();
        let m1 = infer_mixture(&model, &docs[0], 40, 17).unwrap();
        let m2 = infer_mixture(&model, &docs[0], 40, 17).unwrap();
        assert_eq!(m1.theta, m2.theta);
    }

    #[test]
    fn infer_mixture_rejects_oov_doc() {
        let (docs, _) = planted_corpus(30, 5);
        let cfg = LdaConfig {
            k: 2,
            iterations: 10,
            min_count: 1,
            ..LdaConfig::default()
        };
        let model = fit_lda(&docs, &cfg, 11).unwrap();
        let doc = doc_of(&["zzz", "yyy"]);
        assert!(matches!(
            infer_mixture(&model, &doc, 10, 1).unwrap_err(),
            Error::NoInVocabToken
        ));
    }

    #[test]
    fn doc_permutation_recovers_same_topics() {
        let (docs, _) = planted_corpus(60, 5);
        let cfg = LdaConfig {
            k: 2,
            iterations: 60,
            min_count: 1,
            ..LdaConfig::default()
        };
        let model_a = fit_lda(&docs, &cfg, 11).unwrap();
        let mut reversed = docs.clone();
        reversed.reverse();
        let model_b = fit_lda(&reversed, &cfg, 11).unwrap();
        let set_of = |m: &TopicModel, t: usize| -> std::collections::BTreeSet<String> {
            top_words(m, t, 20)
                .unwrap()
                .into_iter()
                .map(|(w, _)| w)
                .collect()
        };
        let a0 = set_of(&model_a, 0);
        let a1 = set_of(&model_a, 1);
        let b0 = set_of(&model_b, 0);
        let b1 = set_of(&model_b, 1);
        assert!(
            (a0 == b0 && a1 == b1) || (a0 == b1 && a1 == b0),
            "top-word sets differ beyond relabeling"
        );
    }

    #[test]
    fn top_words_tie_break_and_bounds() {
        let model = TopicModel::from(TopicModelData {
            k: 2,
            vocab: vec!["a".into(), "b".into(), "c".into()],
            phi: vec![vec![0.4, 0.4, 0.2], vec![0.2, 0.4, 0.4]],
            alpha: 1.0,
            beta: 0.01,
            n_train_docs: 1,
        });
        let tops = top_words(&model, 0, 3).unwrap();
        // Tie between "a" and "b" broken by vocabulary index.
        assert_eq!(tops[0].0, "a");
        assert_eq!(tops[1].0, "b");
        let single = top_words(&model, 1, 1).unwrap();
        assert_eq!(single[0].0, "b");
        assert!(top_words(&model, 2, 1).is_err());
        assert!(top_words(&model, 0, 4).is_err());
    }

    #[test]
    fn model_roundtrips_bit_exactly() {
        let (docs, _) = planted_corpus(20, 3);
        let cfg = LdaConfig {
            k: 2,
            iterations: 15,
            min_count: 1,
            ..LdaConfig::default()
        };
        let model = fit_lda(&docs, &cfg, 4).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("topic_model.json");
        model.save(&path).unwrap();
        let back = TopicModel::load(&path).unwrap();
        assert_eq!(model.vocab, back.vocab);
        assert_eq!(model.k, back.k);
        for (ra, rb) in model.phi.iter().zip(&back.phi) {
            for (a, b) in ra.iter().zip(rb) {
                assert_eq!(a.to_bits(), b.to_bits());
            }
        }
        assert_eq!(back.word_index("alpha00"), model.word_index("alpha00"));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn phi_rows_valid_for_random_corpora(seed in 0u64..1000, k in 2usize..5) {
            let (docs, _) = planted_corpus(8, seed);
            let cfg = LdaConfig { k, iterations: 5, min_count: 1, ..LdaConfig::default() };
            let model = fit_lda(&docs, &cfg, seed).unwrap();
            for row in &model.phi {
                let sum: f64 = row.iter().sum();
                prop_assert!((sum - 1.0).abs() < 1e-9);
                prop_assert!(row.iter().all(|&p| p > 0.0));
            }
        }
    }
}
