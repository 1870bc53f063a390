//! Evaluation harness: edit-distance and embedding minimality, n-gram
//! perplexity as the plausibility proxy, label-flip rates, and runtime.

mod benchmark;
mod levenshtein;
mod ngram;
mod report;

pub use benchmark::{run_benchmark, run_benchmark_with_report, BenchmarkResources, Method};
pub use levenshtein::{levenshtein, levenshtein_chars, levenshtein_tokens};
pub use ngram::{train_ngram, NgramLm};
pub use report::{
    records_from_jsonl, records_to_jsonl, Aggregate, ConfigEcho, EvaluationReport, MethodAggregate,
    MetricRecord, Normalization, Timing,
};

use thiserror::Error;

use crate::embed::VectorStore;
use crate::text::Document;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("document is empty")]
    EmptyDocument,
    #[error("n-gram order must be 2 or 3 (got {0})")]
    InvalidOrder(usize),
    #[error("no targets to evaluate")]
    EmptyTargets,
    #[error("malformed record: {0}")]
    Format(String),
}

/// Cosine distance between mean-pooled sentence vectors, in `[0, 2]`;
/// documents with no in-vocabulary token at all score a neutral 1.
pub fn embedding_distance(store: &VectorStore, a: &Document, b: &Document) -> f64 {
    let va = store.sentence_vector(a);
    let vb = store.sentence_vector(b);
    match va.cosine(&vb) {
        Some(cos) => 1.0 - cos,
        None => 1.0,
    }
}
