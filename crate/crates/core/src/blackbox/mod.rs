//! Classifier abstraction plus self-contained reference classifiers, so the
//! search methods can be exercised without any external ML stack.

mod logreg;
mod naive_bayes;
mod persist;
mod vectorizer;

pub use logreg::{logistic_loss_and_gradient, train_logreg, LogRegModel, LogRegOptions};
pub use naive_bayes::{train_naive_bayes, NaiveBayesModel};
pub use persist::{load_model, save_model, LoadedModel};
pub use vectorizer::{fit_vectorizer, Vectorizer, VectorizerMode};

use rand::seq::SliceRandom;

use thiserror::Error;

use crate::rng::{mix_seed, seeded_rng};
use crate::text::{Document, PosLexicon};

#[derive(Debug, Error)]
pub enum BlackBoxError {
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("class '{0}' has no training documents")]
    EmptyClass(String),
    #[error("need at least two classes, found {0}")]
    NotEnoughClasses(usize),
    #[error("classifier requires a binary corpus, found {0} classes")]
    NotBinary(usize),
    #[error("could not produce a split with every class on both sides")]
    CannotStratify,
    #[error("train fraction must be strictly between 0 and 1 (got {0})")]
    BadFraction(f64),
    #[error("model file error: {0}")]
    ModelFile(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Documents with parallel dense class labels.
#[derive(Debug, Clone)]
pub struct LabeledCorpus {
    documents: Vec<Document>,
    labels: Vec<usize>,
    classes: Vec<String>,
}

impl LabeledCorpus {
    /// Builds a corpus from `(text, label)` rows. Class names are sorted so
    /// label ids are stable regardless of row order; an optional lexicon
    /// tags the tokenized documents.
    pub fn from_rows<S1: AsRef<str>, S2: AsRef<str>>(
        rows: &[(S1, S2)],
        lexicon: Option<&dyn PosLexicon>,
    ) -> Result<LabeledCorpus, BlackBoxError> {
        if rows.is_empty() {
            return Err(BlackBoxError::EmptyCorpus);
        }
        let mut classes: Vec<String> = rows
            .iter()
            .map(|(_, label)| label.as_ref().to_string())
            .collect();
        classes.sort();
        classes.dedup();
        let mut documents = Vec::with_capacity(rows.len());
        let mut labels = Vec::with_capacity(rows.len());
        for (text, label) in rows {
            let doc = Document::tokenize(text.as_ref());
            let doc = match lexicon {
                Some(lex) => doc.pos_tag(lex),
                None => doc,
            };
            documents.push(doc);
            labels.push(
                classes
                    .binary_search(&label.as_ref().to_string())
                    .expect("label collected above"),
            );
        }
        Ok(LabeledCorpus {
            documents,
            labels,
            classes,
        })
    }

    pub fn from_parts(
        documents: Vec<Document>,
        labels: Vec<usize>,
        classes: Vec<String>,
    ) -> LabeledCorpus {
        assert_eq!(documents.len(), labels.len());
        LabeledCorpus {
            documents,
            labels,
            classes,
        }
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn class_count(&self, label: usize) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }

    /// Sorted unique tokens across all documents.
    pub fn vocabulary(&self) -> Vec<String> {
        let mut vocab: Vec<String> = self
            .documents
            .iter()
            .flat_map(|d| d.tokens().iter().cloned())
            .collect();
        vocab.sort();
        vocab.dedup();
        vocab
    }
}

/// Per-document classifier output. When scores are present the label is
/// their argmax (first index on ties).
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    label: usize,
    scores: Option<Vec<f64>>,
}

impl Prediction {
    pub fn from_scores(scores: Vec<f64>) -> Prediction {
        let label = argmax(&scores);
        Prediction {
            label,
            scores: Some(scores),
        }
    }

    pub fn label_only(label: usize) -> Prediction {
        Prediction {
            label,
            scores: None,
        }
    }

    pub fn label(&self) -> usize {
        self.label
    }

    pub fn scores(&self) -> Option<&[f64]> {
        self.scores.as_deref()
    }
}

pub(crate) fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

/// A trained classifier as seen by the explanation methods: a label for any
/// document, optional per-class scores, and a declaration of whether
/// concurrent prediction is allowed.
pub trait BlackBox: Send + Sync {
    fn predict(&self, doc: &Document) -> Prediction;

    fn class_names(&self) -> &[String];

    /// Whether `predict` may be called from multiple threads at once.
    fn concurrent_predict_safe(&self) -> bool {
        true
    }

    fn label(&self, doc: &Document) -> usize {
        self.predict(doc).label()
    }
}

/// Wrapper that hides scores, forcing score-free search paths.
pub struct LabelOnly<B>(pub B);

impl<B: BlackBox> BlackBox for LabelOnly<B> {
    fn predict(&self, doc: &Document) -> Prediction {
        Prediction::label_only(self.0.predict(doc).label())
    }

    fn class_names(&self) -> &[String] {
        self.0.class_names()
    }

    fn concurrent_predict_safe(&self) -> bool {
        self.0.concurrent_predict_safe()
    }
}

/// Seeded shuffle-and-split keeping at least one document of every class on
/// both sides; nearby seeds are retried up to 100 times before giving up.
pub fn split(
    corpus: &LabeledCorpus,
    train_fraction: f64,
    seed: u64,
) -> Result<(LabeledCorpus, LabeledCorpus), BlackBoxError> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(BlackBoxError::BadFraction(train_fraction));
    }
    if corpus.is_empty() {
        return Err(BlackBoxError::EmptyCorpus);
    }
    let n = corpus.len();
    let train_n = ((train_fraction * n as f64).round() as usize).clamp(1, n.saturating_sub(1));
    let class_total = corpus.classes.len();
    if class_total < 2 {
        return Err(BlackBoxError::CannotStratify);
    }

    for attempt in 0..100u64 {
        let mut order: Vec<usize> = (0..n).collect();
        let mut rng = seeded_rng(mix_seed(seed, &[attempt]));
        order.shuffle(&mut rng);
        let (train_idx, test_idx) = order.split_at(train_n);
        let covered = |idx: &[usize]| {
            let mut seen = vec![false; class_total];
            for &i in idx {
                seen[corpus.labels[i]] = true;
            }
            seen.iter().all(|&s| s)
        };
        if covered(train_idx) && covered(test_idx) {
            let take = |idx: &[usize]| LabeledCorpus {
                documents: idx.iter().map(|&i| corpus.documents[i].clone()).collect(),
                labels: idx.iter().map(|&i| corpus.labels[i]).collect(),
                classes: corpus.classes.clone(),
            };
            return Ok((take(train_idx), take(test_idx)));
        }
    }
    Err(BlackBoxError::CannotStratify)
}
