//! Binary logistic regression trained by full-batch gradient descent.

use std::collections::BTreeMap;

use crate::text::Document;

use super::{BlackBox, BlackBoxError, LabeledCorpus, Prediction, Vectorizer};

#[derive(Debug, Clone, Copy)]
pub struct LogRegOptions {
    pub epochs: usize,
    pub learning_rate: f64,
    pub l2: f64,
}

impl Default for LogRegOptions {
    fn default() -> LogRegOptions {
        LogRegOptions {
            epochs: 300,
            learning_rate: 0.1,
            l2: 1e-4,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LogRegModel {
    classes: Vec<String>,
    weights: Vec<f64>,
    bias: f64,
    vectorizer: Vectorizer,
    loss_history: Vec<f64>,
}

/// Trains on a binary corpus; class id 1 is the positive sigmoid output.
pub fn train_logreg(
    corpus: &LabeledCorpus,
    vectorizer: &Vectorizer,
    options: LogRegOptions,
) -> Result<LogRegModel, BlackBoxError> {
    if corpus.is_empty() {
        return Err(BlackBoxError::EmptyCorpus);
    }
    if corpus.classes().len() != 2 {
        return Err(BlackBoxError::NotBinary(corpus.classes().len()));
    }

    let rows: Vec<BTreeMap<usize, f64>> = corpus
        .documents()
        .iter()
        .map(|d| vectorizer.transform(d))
        .collect();
    let targets: Vec<f64> = corpus.labels().iter().map(|&l| l as f64).collect();

    let mut weights = vec![0.0; vectorizer.vocab_size()];
    let mut bias = 0.0;
    let mut loss_history = Vec::with_capacity(options.epochs);
    for _ in 0..options.epochs {
        let (loss, grad_w, grad_b) =
            logistic_loss_and_gradient(&weights, bias, &rows, &targets, options.l2);
        loss_history.push(loss);
        for (w, g) in weights.iter_mut().zip(&grad_w) {
            *w -= options.learning_rate * g;
        }
        bias -= options.learning_rate * grad_b;
    }

    Ok(LogRegModel {
        classes: corpus.classes().to_vec(),
        weights,
        bias,
        vectorizer: vectorizer.clone(),
        loss_history,
    })
}

/// Mean cross-entropy loss with an L2 penalty on the weights (bias
/// unpenalized), plus its gradient. Exposed so tests can check the analytic
/// gradient against finite differences.
pub fn logistic_loss_and_gradient(
    weights: &[f64],
    bias: f64,
    rows: &[BTreeMap<usize, f64>],
    targets: &[f64],
    l2: f64,
) -> (f64, Vec<f64>, f64) {
    assert_eq!(rows.len(), targets.len());
    let n = rows.len() as f64;
    let mut loss = 0.0;
    let mut grad_w = vec![0.0; weights.len()];
    let mut grad_b = 0.0;
    for (row, &y) in rows.iter().zip(targets) {
        let z = bias + row.iter().map(|(&c, &x)| weights[c] * x).sum::<f64>();
        // log(1 + e^z) - y*z, computed stably
        loss += z.max(0.0) + (-z.abs()).exp().ln_1p() - y * z;
        let p = sigmoid(z);
        let residual = p - y;
        for (&c, &x) in row {
            grad_w[c] += residual * x;
        }
        grad_b += residual;
    }
    loss /= n;
    grad_b /= n;
    for g in &mut grad_w {
        *g /= n;
    }
    for (g, &w) in grad_w.iter_mut().zip(weights) {
        *g += l2 * w;
    }
    loss += 0.5 * l2 * weights.iter().map(|w| w * w).sum::<f64>();
    (loss, grad_w, grad_b)
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

impl LogRegModel {
    pub(crate) fn from_parts(
        classes: Vec<String>,
        weights: Vec<f64>,
        bias: f64,
        vectorizer: Vectorizer,
    ) -> LogRegModel {
        LogRegModel {
            classes,
            weights,
            bias,
            vectorizer,
            loss_history: Vec::new(),
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn vectorizer(&self) -> &Vectorizer {
        &self.vectorizer
    }

    /// Training loss per epoch; empty for models restored from disk.
    pub fn loss_history(&self) -> &[f64] {
        &self.loss_history
    }

    pub fn probability_positive(&self, doc: &Document) -> f64 {
        let features = self.vectorizer.transform(doc);
        let z = self.bias
            + features
                .iter()
                .map(|(&c, &x)| self.weights[c] * x)
                .sum::<f64>();
        sigmoid(z)
    }
}

impl BlackBox for LogRegModel {
    fn predict(&self, doc: &Document) -> Prediction {
        let p = self.probability_positive(doc);
        Prediction::from_scores(vec![1.0 - p, p])
    }

    fn class_names(&self) -> &[String] {
        &self.classes
    }
}
