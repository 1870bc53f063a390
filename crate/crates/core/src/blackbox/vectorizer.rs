//! Token-count and tf-idf vectorization of documents into sparse features.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::text::Document;

use super::{BlackBoxError, LabeledCorpus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VectorizerMode {
    Count,
    Tfidf,
}

impl std::fmt::Display for VectorizerMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            VectorizerMode::Count => "count",
            VectorizerMode::Tfidf => "tfidf",
        })
    }
}

/// Maps documents to sparse `column -> value` features over a fixed
/// vocabulary. Unseen tokens are dropped at transform time.
#[derive(Debug, Clone)]
pub struct Vectorizer {
    mode: VectorizerMode,
    vocab: Vec<String>,
    lookup: HashMap<String, usize>,
    idf: Vec<f64>,
}

/// Learns the vocabulary (every training token, sorted for stable column
/// ids) and, in tf-idf mode, smoothed inverse document frequencies
/// `ln((1 + N) / (1 + df)) + 1`.
pub fn fit_vectorizer(
    corpus: &LabeledCorpus,
    mode: VectorizerMode,
) -> Result<Vectorizer, BlackBoxError> {
    if corpus.is_empty() {
        return Err(BlackBoxError::EmptyCorpus);
    }
    let vocab = corpus.vocabulary();
    let lookup: HashMap<String, usize> = vocab
        .iter()
        .enumerate()
        .map(|(i, w)| (w.clone(), i))
        .collect();

    let idf = match mode {
        VectorizerMode::Count => Vec::new(),
        VectorizerMode::Tfidf => {
            let mut df = vec![0usize; vocab.len()];
            for doc in corpus.documents() {
                let mut seen: Vec<usize> = doc
                    .tokens()
                    .iter()
                    .filter_map(|t| lookup.get(t).copied())
                    .collect();
                seen.sort_unstable();
                seen.dedup();
                for col in seen {
                    df[col] += 1;
                }
            }
            let n = corpus.len() as f64;
            df.iter()
                .map(|&d| ((1.0 + n) / (1.0 + d as f64)).ln() + 1.0)
                .collect()
        }
    };

    Ok(Vectorizer {
        mode,
        vocab,
        lookup,
        idf,
    })
}

impl Vectorizer {
    pub(crate) fn from_parts(
        mode: VectorizerMode,
        vocab: Vec<String>,
        idf: Vec<f64>,
    ) -> Vectorizer {
        let lookup = vocab
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        Vectorizer {
            mode,
            vocab,
            lookup,
            idf,
        }
    }

    pub fn mode(&self) -> VectorizerMode {
        self.mode
    }

    pub fn vocab(&self) -> &[String] {
        &self.vocab
    }

    pub fn idf(&self) -> &[f64] {
        &self.idf
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab.len()
    }

    /// Sparse features for one document: raw counts, or L2-normalized
    /// `count * idf` in tf-idf mode.
    pub fn transform(&self, doc: &Document) -> BTreeMap<usize, f64> {
        let mut counts: BTreeMap<usize, f64> = BTreeMap::new();
        for token in doc.tokens() {
            if let Some(&col) = self.lookup.get(token) {
                *counts.entry(col).or_insert(0.0) += 1.0;
            }
        }
        if self.mode == VectorizerMode::Tfidf {
            for (col, value) in counts.iter_mut() {
                *value *= self.idf[*col];
            }
            let norm = counts.values().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 0.0 {
                for value in counts.values_mut() {
                    *value /= norm;
                }
            }
        }
        counts
    }
}
