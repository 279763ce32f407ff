//! ICO risk scoring pipeline.
//!
//! Takes a corpus of ICO project dossiers (white papers, founding-team bios,
//! websites, GitHub metadata, token economics, price history) and learns to
//! flag projects whose token price collapses after launch. The pipeline is:
//!
//! 1. [`corpus`] — ingestion, tokenization, price-derived targets and labels,
//!    dataset splits, and a synthetic-corpus generator used as a test oracle.
//! 2. [`topics`] — LDA trained with collapsed Gibbs sampling; per-document
//!    topic mixtures become white-paper features.
//! 3. [`tagger`] — a linear-chain CRF that extracts born-date / university /
//!    degree / company / award spans from team bios.
//! 4. [`encoder`] — a hierarchical document encoder (word embeddings, four
//!    stacked LSTM layers, end-state sentence vectors, mean-pooled document
//!    vectors) pretrained with a skip-thought neighbor-prediction objective.
//! 5. [`features`] — per-aspect sub-vectors fused into one feature vector
//!    with a span registry for later explanation.
//! 6. [`model`] — sigmoid-linear regression of the price-change target,
//!    minibatch SGD with L2, scam classification under a bar `m`, P/R/F1.
//! 7. [`explain`] — first-derivative saliency, feature erasure influence,
//!    and topic risk ranking.
//! 8. [`pipeline`] — config, versioned artifacts, and stage orchestration
//!    behind the CLI.
//!
//! All randomness flows through explicit seeds; every stage is deterministic
//! and every artifact round-trips bit-exactly.

pub mod artifact;
pub mod corpus;
pub mod encoder;
pub mod error;
pub mod explain;
pub mod features;
pub mod math;
pub mod model;
pub mod pipeline;
pub mod tagger;
pub mod topics;

pub use error::{Error, Result};
