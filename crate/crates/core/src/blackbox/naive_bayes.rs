//! Multinomial naive Bayes with Laplace smoothing.

use crate::text::Document;

use super::{BlackBox, BlackBoxError, LabeledCorpus, Prediction, Vectorizer};

#[derive(Debug, Clone)]
pub struct NaiveBayesModel {
    classes: Vec<String>,
    log_priors: Vec<f64>,
    /// `log_likelihoods[class][column]`
    log_likelihoods: Vec<Vec<f64>>,
    vectorizer: Vectorizer,
}

/// Trains a multinomial naive Bayes classifier with smoothing `alpha = 1`.
pub fn train_naive_bayes(
    corpus: &LabeledCorpus,
    vectorizer: &Vectorizer,
) -> Result<NaiveBayesModel, BlackBoxError> {
    if corpus.is_empty() {
        return Err(BlackBoxError::EmptyCorpus);
    }
    let classes = corpus.classes().to_vec();
    if classes.len() < 2 {
        return Err(BlackBoxError::NotEnoughClasses(classes.len()));
    }
    for (label, name) in classes.iter().enumerate() {
        if corpus.class_count(label) == 0 {
            return Err(BlackBoxError::EmptyClass(name.clone()));
        }
    }

    let v = vectorizer.vocab_size();
    let mut doc_counts = vec![0usize; classes.len()];
    let mut feature_sums = vec![vec![0.0f64; v]; classes.len()];
    for (doc, &label) in corpus.documents().iter().zip(corpus.labels()) {
        doc_counts[label] += 1;
        for (col, value) in vectorizer.transform(doc) {
            feature_sums[label][col] += value;
        }
    }

    let n = corpus.len() as f64;
    let log_priors = doc_counts.iter().map(|&c| (c as f64 / n).ln()).collect();
    let log_likelihoods = feature_sums
        .iter()
        .map(|sums| {
            let total: f64 = sums.iter().sum();
            let denom = total + v as f64;
            sums.iter().map(|&s| ((s + 1.0) / denom).ln()).collect()
        })
        .collect();

    Ok(NaiveBayesModel {
        classes,
        log_priors,
        log_likelihoods,
        vectorizer: vectorizer.clone(),
    })
}

impl NaiveBayesModel {
    pub(crate) fn from_parts(
        classes: Vec<String>,
        log_priors: Vec<f64>,
        log_likelihoods: Vec<Vec<f64>>,
        vectorizer: Vectorizer,
    ) -> NaiveBayesModel {
        NaiveBayesModel {
            classes,
            log_priors,
            log_likelihoods,
            vectorizer,
        }
    }

    pub fn log_priors(&self) -> &[f64] {
        &self.log_priors
    }

    pub fn log_likelihoods(&self) -> &[Vec<f64>] {
        &self.log_likelihoods
    }

    pub fn vectorizer(&self) -> &Vectorizer {
        &self.vectorizer
    }

    /// Normalized posteriors via log-sum-exp.
    pub fn posteriors(&self, doc: &Document) -> Vec<f64> {
        let features = self.vectorizer.transform(doc);
        let joint: Vec<f64> = (0..self.classes.len())
            .map(|c| {
                let mut lp = self.log_priors[c];
                for (&col, &value) in &features {
                    lp += value * self.log_likelihoods[c][col];
                }
                lp
            })
            .collect();
        let max = joint.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let exps: Vec<f64> = joint.iter().map(|&l| (l - max).exp()).collect();
        let total: f64 = exps.iter().sum();
        exps.into_iter().map(|e| e / total).collect()
    }
}

impl BlackBox for NaiveBayesModel {
    fn predict(&self, doc: &Document) -> Prediction {
        Prediction::from_scores(self.posteriors(doc))
    }

    fn class_names(&self) -> &[String] {
        &self.classes
    }
}
