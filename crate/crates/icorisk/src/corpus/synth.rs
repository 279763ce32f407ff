//! Synthetic corpus generator.
//!
//! Emits dossiers whose white papers mix planted topic word-sets, whose team
//! bios follow known tag patterns, and whose price ratios correlate with a
//! planted feature profile. The companion ground-truth file records all
//! planted structure, so topic recovery, tagger accuracy, and end-to-end
//! discrimination are all checkable against it.

use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{save_corpus, GithubMeta, PriceSeries, ProjectDossier};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SynthConfig {
    pub n_projects: usize,
    /// Planted topic word sets; white papers are mixtures over these.
    pub topic_words: Vec<Vec<String>>,
    /// Index of the topic whose dominance marks the scam feature profile.
    pub scam_topic: usize,
    /// 0 = features independent of labels, 1 = perfectly aligned.
    pub signal_strength: f64,
    pub scam_fraction: f64,
    /// Inclusive range of sentences per white paper.
    pub sentences_per_doc: (usize, usize),
    /// Inclusive range of words per sentence.
    pub words_per_sentence: (usize, usize),
    pub horizon: u32,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n_projects: 200,
            topic_words: default_topic_words(),
            scam_topic: 0,
            signal_strength: 0.9,
            scam_fraction: 0.5,
            sentences_per_doc: (4, 8),
            words_per_sentence: (5, 10),
            horizon: 365,
        }
    }
}

/// Two disjoint 20-word sets: a gambling-flavored topic and an
/// infrastructure-flavored one.
pub fn default_topic_words() -> Vec<Vec<String>> {
    let gambling = [
        "casino",
        "poker",
        "jackpot",
        "wager",
        "betting",
        "roulette",
        "slots",
        "dice",
        "lottery",
        "payout",
        "bonus",
        "spins",
        "cards",
        "tournament",
        "prize",
        "odds",
        "stakes",
        "gamers",
        "arcade",
        "leaderboard",
    ];
    let infra = [
        "ledger",
        "consensus",
        "validator",
        "sharding",
        "throughput",
        "latency",
        "protocol",
        "nodes",
        "staking",
        "encryption",
        "wallet",
        "interoperability",
        "scalability",
        "governance",
        "auditing",
        "compliance",
        "custody",
        "settlement",
        "gateways",
        "bridges",
    ];
    vec![
        gambling.iter().map(|s| s.to_string()).collect(),
        infra.iter().map(|s| s.to_string()).collect(),
    ]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SynthProject {
    pub id: String,
    /// Ground-truth scam flag; the price ratio follows it exactly.
    pub scam: bool,
    /// Whether the feature profile agrees with the scam flag.
    pub aligned: bool,
    pub dominant_topic: usize,
    pub ratio: f64,
}

/// A generated bio with gold BIO tags aligned to [`super::tokenize`] output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LabeledBio {
    pub person: String,
    pub tokens: Vec<String>,
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroundTruth {
    pub seed: u64,
    pub config: SynthConfig,
    pub scam_topic: usize,
    /// Aspects carrying planted signal, strongest first.
    pub signal_aspects: Vec<String>,
    pub company_pool: Vec<String>,
    pub university_pool: Vec<String>,
    pub projects: Vec<SynthProject>,
    pub labeled_bios: Vec<LabeledBio>,
}

const FIRST_NAMES: &[&str] = &[
    "Justin", "Alice", "Wei", "Elena", "Rajat", "Mina", "Oleg", "Sara", "Tom", "Lucia", "Chen",
    "Amara", "Felix", "Nadia", "Ivan",
];
const LAST_NAMES: &[&str] = &[
    "Sun", "Zhang", "Rivera", "Novak", "Patel", "Kim", "Okafor", "Larsson", "Moreau", "Tanaka",
    "Silva", "Haddad", "Petrov", "Nakamura", "Keller",
];
const UNIVERSITIES: &[&str] = &[
    "Peking University",
    "Stanford University",
    "University of Pennsylvania",
    "Tsinghua University",
    "Oxford University",
    "Harvard University",
    "National University of Singapore",
    "ETH Zurich",
];
const COMPANIES: &[&str] = &[
    "Ripple",
    "Alibaba Group",
    "Deutsche Bank",
    "Binance Labs",
    "Goldman Sachs",
    "Tencent",
    "ConsenSys",
    "Digital Asset Holdings",
];
/// Companies deliberately absent from the shipped dictionary.
const UNKNOWN_COMPANIES: &[&str] = &[
    "Moonrise Capital",
    "Apex Ventures",
    "Nebula Holdings",
    "Vertex Partners",
];
const AWARDS: &[&str] = &[
    "Forbes 30 Under 30",
    "Davos Global Shaper",
    "Best Paper Award",
    "Hackathon Grand Prize",
    "Innovator of the Year",
];
const DEGREES: &[&str] = &["bachelor", "master", "phd", "mba", "doctorate"];
const FILLERS: &[&str] = &[
    "a passionate engineer",
    "leads the product team",
    "writes about distributed systems",
    "an early adopter of smart contracts",
    "speaks at industry meetups",
];
const PLATFORMS: &[&str] = &["ethereum", "waves", "neo", "stellar", "eos", "ownchain"];

fn pick<'a, T>(rng: &mut ChaCha8Rng, pool: &'a [T]) -> &'a T {
    &pool[rng.gen_range(0..pool.len())]
}

fn range_sample(rng: &mut ChaCha8Rng, range: (usize, usize)) -> usize {
    rng.gen_range(range.0..=range.1)
}

/// (token, label) pairs making up part of a clause.
type Tagged = Vec<(String, String)>;

fn o_words(words: &str) -> Tagged {
    words
        .split_whitespace()
        .map(|w| (w.to_string(), "O".to_string()))
        .collect()
}

fn entity(words: &str, category: &str) -> Tagged {
    words
        .split_whitespace()
        .enumerate()
        .map(|(i, w)| {
            let label = if i == 0 {
                format!("B-{category}")
            } else {
                format!("I-{category}")
            };
            (w.to_string(), label)
        })
        .collect()
}

struct BioBuilder {
    tokens: Vec<String>,
    labels: Vec<String>,
    text: String,
}

impl BioBuilder {
    fn new() -> Self {
        BioBuilder {
            tokens: Vec::new(),
            labels: Vec::new(),
            text: String::new(),
        }
    }

    /// Append one clause; parts are joined with spaces, clauses with ", ".
    /// The tokenizer drops commas, so text and tags stay aligned.
    fn clause(&mut self, parts: &[Tagged]) {
        if !self.text.is_empty() {
            self.text.push_str(", ");
        }
        let words: Vec<&str> = parts
            .iter()
            .flatten()
            .map(|(w, _)| w.as_str())
            .collect();
        self.text.push_str(&words.join(" "));
        for (w, l) in parts.iter().flatten() {
            self.tokens.push(w.clone());
            self.labels.push(l.clone());
        }
    }
}

/// Generate one bio. `rich` profiles carry degree/company/award patterns;
/// sparse ones mostly filler.
fn gen_bio(rng: &mut ChaCha8Rng, rich: bool) -> (String, String, LabeledBio) {
    let person = format!("{} {}", pick(rng, FIRST_NAMES), pick(rng, LAST_NAMES));
    let mut b = BioBuilder::new();
    b.clause(&[o_words(&person)]);

    let p_born = if rich { 0.8 } else { 0.4 };
    if rng.gen::<f64>() < p_born {
        let year = rng.gen_range(1960..=1995).to_string();
        b.clause(&[o_words("born in"), entity(&year, "born-date")]);
    }
    let p_degree = if rich { 0.85 } else { 0.2 };
    if rng.gen::<f64>() < p_degree {
        let degree = if rich {
            *pick(rng, &DEGREES[1..])
        } else {
            DEGREES[0]
        };
        let univ = *pick(rng, UNIVERSITIES);
        if rng.gen::<f64>() < 0.5 {
            b.clause(&[
                entity(degree, "degree"),
                o_words("of"),
                entity(univ, "university"),
            ]);
        } else {
            b.clause(&[
                o_words("holds a"),
                entity(degree, "degree"),
                o_words("degree from"),
                entity(univ, "university"),
            ]);
        }
    }
    let p_company = if rich { 0.9 } else { 0.5 };
    if rng.gen::<f64>() < p_company {
        let known = rich || rng.gen::<f64>() < 0.3;
        let comp = if known {
            *pick(rng, COMPANIES)
        } else {
            *pick(rng, UNKNOWN_COMPANIES)
        };
        let lead = match rng.gen_range(0..3u8) {
            0 => "worked at",
            1 => "founder and ceo of",
            _ => "former engineer at",
        };
        b.clause(&[o_words(lead), entity(comp, "company")]);
    }
    let p_award = if rich { 0.4 } else { 0.05 };
    if rng.gen::<f64>() < p_award {
        let award = *pick(rng, AWARDS);
        let lead = if rng.gen::<f64>() < 0.5 {
            "won the"
        } else {
            "received the"
        };
        b.clause(&[o_words(lead), entity(award, "award")]);
    }
    b.clause(&[o_words(pick(rng, FILLERS))]);

    let mut text = b.text.clone();
    text.push('.');
    (
        person.clone(),
        text,
        LabeledBio {
            person,
            tokens: b.tokens,
            labels: b.labels,
        },
    )
}

fn gen_topic_text(
    rng: &mut ChaCha8Rng,
    topics: &[Vec<String>],
    dominant: usize,
    sentences: usize,
    words_range: (usize, usize),
) -> String {
    let mut out = String::new();
    for s in 0..sentences {
        if s > 0 {
            out.push(' ');
        }
        let n_words = range_sample(rng, words_range);
        let mut sentence = Vec::with_capacity(n_words);
        for _ in 0..n_words {
            let set = if topics.len() == 1 || rng.gen::<f64>() < 0.9 {
                &topics[dominant]
            } else {
                let mut other = rng.gen_range(0..topics.len() - 1);
                if other >= dominant {
                    other += 1;
                }
                &topics[other]
            };
            sentence.push(pick(rng, set).clone());
        }
        out.push_str(&sentence.join(" "));
        out.push('.');
    }
    out
}

/// Generate a synthetic corpus plus its ground truth, writing both files and
/// returning the ground truth for in-process use.
pub fn generate_synthetic(
    config: &SynthConfig,
    seed: u64,
    corpus_path: impl AsRef<Path>,
    truth_path: impl AsRef<Path>,
) -> Result<GroundTruth> {
    if config.n_projects == 0 {
        return Err(Error::InvalidConfig {
            field: "synth.n_projects".to_string(),
            message: "must be > 0".to_string(),
        });
    }
    if config.topic_words.len() < 2 {
        return Err(Error::InvalidConfig {
            field: "synth.topic_words".to_string(),
            message: "need at least 2 planted topics".to_string(),
        });
    }
    if config.scam_topic >= config.topic_words.len() {
        return Err(Error::InvalidConfig {
            field: "synth.scam_topic".to_string(),
            message: "index out of range".to_string(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_topics = config.topic_words.len();
    let align_p = 0.5 + 0.5 * config.signal_strength.clamp(0.0, 1.0);

    let mut dossiers = Vec::with_capacity(config.n_projects);
    let mut projects = Vec::with_capacity(config.n_projects);
    let mut labeled_bios = Vec::new();

    for i in 0..config.n_projects {
        let id = format!("proj{i:04}");
        let scam = rng.gen::<f64>() < config.scam_fraction;
        let aligned = rng.gen::<f64>() < align_p;
        // The feature profile drives everything observable; the price ratio
        // follows the scam flag, so at signal 0 features carry no label info.
        let scam_profile = if aligned { scam } else { !scam };

        let dominant_topic = if scam_profile {
            config.scam_topic
        } else {
            let mut t = rng.gen_range(0..n_topics - 1);
            if t >= config.scam_topic {
                t += 1;
            }
            t
        };

        let n_sents = range_sample(&mut rng, config.sentences_per_doc);
        let white_paper = gen_topic_text(
            &mut rng,
            &config.topic_words,
            dominant_topic,
            n_sents,
            config.words_per_sentence,
        );

        let has_repo = rng.gen::<f64>() < if scam_profile { 0.3 } else { 0.95 };
        let github = if has_repo {
            let (commits, branches, loc, files) = if scam_profile {
                (
                    rng.gen_range(1..=20),
                    rng.gen_range(1..=3),
                    rng.gen_range(50..=2000),
                    rng.gen_range(2..=20),
                )
            } else {
                (
                    rng.gen_range(80..=800),
                    rng.gen_range(2..=15),
                    rng.gen_range(5_000..=200_000),
                    rng.gen_range(30..=300),
                )
            };
            let readme = gen_topic_text(
                &mut rng,
                &config.topic_words,
                dominant_topic,
                2,
                config.words_per_sentence,
            );
            Some(GithubMeta {
                readme_text: Some(readme),
                n_branches: branches,
                n_commits: commits,
                loc_total: loc,
                n_files: files,
            })
        } else {
            None
        };

        let has_bios = rng.gen::<f64>() < if scam_profile { 0.5 } else { 0.95 };
        let mut team_bios = Vec::new();
        if has_bios {
            let n_people = rng.gen_range(1..=3);
            for _ in 0..n_people {
                let (person, text, labeled) = gen_bio(&mut rng, !scam_profile);
                team_bios.push((person, text));
                labeled_bios.push(labeled);
            }
        }

        let has_website = rng.gen::<f64>() < if scam_profile { 0.35 } else { 0.9 };
        let website_text = has_website.then(|| {
            gen_topic_text(
                &mut rng,
                &config.topic_words,
                dominant_topic,
                3,
                config.words_per_sentence,
            )
        });

        let platform = (rng.gen::<f64>() < 0.9).then(|| pick(&mut rng, PLATFORMS).to_string());
        let total_supply =
            (rng.gen::<f64>() < 0.95).then(|| 10f64.powf(rng.gen_range(6.0..10.0)).round());
        let cap_unlimited = rng.gen::<f64>() < 0.15;

        // Log-uniform ratios: scams end below 1, survivors above it.
        let ratio = if scam {
            let lo = 0.0005f64.ln();
            let hi = 0.9f64.ln();
            (lo + rng.gen::<f64>() * (hi - lo)).exp()
        } else {
            let lo = 1.05f64.ln();
            let hi = 8.0f64.ln();
            (lo + rng.gen::<f64>() * (hi - lo)).exp()
        };
        let ico_price = rng.gen_range(0.01..5.0);
        let price_series = PriceSeries {
            ico_price,
            price_at: [(config.horizon, ico_price * ratio)].into_iter().collect(),
        };

        dossiers.push(ProjectDossier {
            id: id.clone(),
            white_paper: Some(white_paper),
            team_bios,
            website_text,
            github,
            platform,
            total_supply,
            cap_unlimited,
            price_series,
        });
        projects.push(SynthProject {
            id,
            scam,
            aligned,
            dominant_topic,
            ratio,
        });
    }

    let truth = GroundTruth {
        seed,
        config: config.clone(),
        scam_topic: config.scam_topic,
        signal_aspects: vec!["whitepaper".to_string(), "github".to_string()],
        company_pool: COMPANIES.iter().map(|s| s.to_lowercase()).collect(),
        university_pool: UNIVERSITIES.iter().map(|s| s.to_lowercase()).collect(),
        projects,
        labeled_bios,
    };

    save_corpus(corpus_path, &dossiers)?;
    let truth_path = truth_path.as_ref();
    let json = serde_json::to_string_pretty(&truth).expect("ground truth serializes");
    std::fs::write(truth_path, json)
        .map_err(|e| Error::io(truth_path.display().to_string(), e))?;
    Ok(truth)
}

/// Write labeled bios in the tagger's sequence file format
/// (token TAB pos TAB ner TAB label, blank line between sequences).
pub fn write_labeled_bios(path: impl AsRef<Path>, bios: &[LabeledBio]) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    for (i, bio) in bios.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for (tok, label) in bio.tokens.iter().zip(&bio.labels) {
            out.push_str(&format!("{tok}\t-\t-\t{label}\n"));
        }
    }
    std::fs::write(path, out).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Standalone labeled-bio generator for tagger tests: `frac_rich` of the bios
/// use the information-dense profile. Returns the bios plus the company and
/// university pools (lowercased) for dictionary fixtures.
pub fn generate_labeled_bios(
    n: usize,
    frac_rich: f64,
    seed: u64,
) -> (Vec<LabeledBio>, Vec<String>, Vec<String>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bios = (0..n)
        .map(|_| {
            let rich = rng.gen::<f64>() < frac_rich;
            gen_bio(&mut rng, rich).2
        })
        .collect();
    (
        bios,
        COMPANIES.iter().map(|s| s.to_lowercase()).collect(),
        UNIVERSITIES.iter().map(|s| s.to_lowercase()).collect(),
    )
}
