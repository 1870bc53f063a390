//! Count-based n-gram language model with Laplace smoothing, used as the
//! in-repo fluency proxy for plausibility scoring.

use std::collections::{BTreeSet, HashMap};

use crate::text::Document;

use super::EvalError;

const BOS: &str = "<s>";
const EOS: &str = "</s>";

/// Bigram or trigram model. Every conditional probability is positive
/// thanks to the add-one smoothing floor.
#[derive(Debug, Clone)]
pub struct NgramLm {
    order: usize,
    counts: HashMap<Vec<String>, HashMap<String, u64>>,
    context_totals: HashMap<Vec<String>, u64>,
    vocab: BTreeSet<String>,
}

/// Trains on tokenized sentences with boundary padding.
pub fn train_ngram(corpus: &[Vec<String>], order: usize) -> Result<NgramLm, EvalError> {
    if !(2..=3).contains(&order) {
        return Err(EvalError::InvalidOrder(order));
    }
    if corpus.is_empty() {
        return Err(EvalError::EmptyCorpus);
    }
    let mut lm = NgramLm::uniform(order, &[]);
    for sentence in corpus {
        for token in sentence {
            lm.vocab.insert(token.clone());
        }
        for (context, word) in events(sentence, order) {
            *lm.counts
                .entry(context.clone())
                .or_default()
                .entry(word)
                .or_insert(0) += 1;
            *lm.context_totals.entry(context).or_insert(0) += 1;
        }
    }
    Ok(lm)
}

fn events(tokens: &[String], order: usize) -> Vec<(Vec<String>, String)> {
    let mut padded: Vec<String> = vec![BOS.to_string(); order - 1];
    padded.extend(tokens.iter().cloned());
    padded.push(EOS.to_string());
    (order - 1..padded.len())
        .map(|i| (padded[i - (order - 1)..i].to_vec(), padded[i].clone()))
        .collect()
}

impl NgramLm {
    /// A model with no observations: every word is equally likely given any
    /// context. `extra_vocab` extends the vocabulary beyond the boundary
    /// symbols.
    pub fn uniform(order: usize, extra_vocab: &[String]) -> NgramLm {
        let mut vocab: BTreeSet<String> = extra_vocab.iter().cloned().collect();
        vocab.insert(BOS.to_string());
        vocab.insert(EOS.to_string());
        NgramLm {
            order,
            counts: HashMap::new(),
            context_totals: HashMap::new(),
            vocab,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab.len()
    }

    /// Smoothed conditional probability `(c(ctx, w) + 1) / (c(ctx) + V)`.
    pub fn probability(&self, context: &[String], word: &str) -> f64 {
        let v = self.vocab.len() as f64;
        let joint = self
            .counts
            .get(context)
            .and_then(|words| words.get(word).copied())
            .unwrap_or(0) as f64;
        let total = self.context_totals.get(context).copied().unwrap_or(0) as f64;
        (joint + 1.0) / (total + v)
    }

    /// Exponentiated mean negative log-probability over the padded
    /// positions, including the end-of-sentence prediction.
    pub fn perplexity(&self, doc: &Document) -> Result<f64, EvalError> {
        if doc.is_empty() {
            return Err(EvalError::EmptyDocument);
        }
        let evs = events(doc.tokens(), self.order);
        let total: f64 = evs
            .iter()
            .map(|(context, word)| self.probability(context, word).ln())
            .sum();
        Ok((-total / evs.len() as f64).exp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sent(words: &[&str]) -> Vec<String> {
        words.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn bigram_probability_by_hand() {
        // vocab {a, b, <s>, </s>} so V = 4; c(a) = 1 and c(a, b) = 1
        let lm = train_ngram(&[sent(&["a", "b"])], 2).unwrap();
        assert_eq!(lm.vocab_size(), 4);
        let p = lm.probability(&[String::from("a")], "b");
        assert!((p - 2.0 / 5.0).abs() < 1e-12);
    }

    #[test]
    fn unseen_event_gets_smoothing_floor() {
        let lm = train_ngram(&[sent(&["a", "b"])], 2).unwrap();
        let p = lm.probability(&[String::from("zzz")], "qqq");
        assert!((p - 1.0 / 4.0).abs() < 1e-12);
        assert!(p > 0.0);
    }

    #[test]
    fn probabilities_sum_to_one_per_context() {
        let lm = train_ngram(&[sent(&["a", "b", "a", "c"]), sent(&["b", "b"])], 2).unwrap();
        for context in [
            vec![String::from("a")],
            vec![String::from("b")],
            vec![String::from("no")],
        ] {
            let mut sum = 0.0;
            for word in &lm.vocab {
                sum += lm.probability(&context, word);
            }
            assert!(
                (sum - 1.0).abs() < 1e-9,
                "context {context:?} sums to {sum}"
            );
        }
    }

    #[test]
    fn uniform_model_perplexity_equals_vocab_size() {
        let vocab: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let lm = NgramLm::uniform(2, &vocab);
        let doc = Document::from_tokens(["a", "c", "b"]);
        let ppl = lm.perplexity(&doc).unwrap();
        assert!(
            (ppl - 5.0).abs() < 1e-9,
            "V = 5 including boundaries, got {ppl}"
        );
    }

    #[test]
    fn training_sentence_beats_its_shuffle() {
        let corpus = vec![
            sent(&["the", "film", "was", "truly", "good"]),
            sent(&["the", "story", "was", "truly", "fine"]),
            sent(&["the", "film", "was", "bad"]),
        ];
        let lm = train_ngram(&corpus, 2).unwrap();
        let original = Document::from_tokens(["the", "film", "was", "truly", "good"]);
        let shuffled = Document::from_tokens(["truly", "the", "good", "film", "was"]);
        let p_orig = lm.perplexity(&original).unwrap();
        let p_shuf = lm.perplexity(&shuffled).unwrap();
        assert!(p_orig < p_shuf, "{p_orig} vs {p_shuf}");
    }

    #[test]
    fn trigram_padding_and_errors() {
        let lm = train_ngram(&[sent(&["a", "b", "c"])], 3).unwrap();
        let p = lm.probability(&[BOS.to_string(), BOS.to_string()], "a");
        // c(<s> <s>) = 1, c(<s> <s> a) = 1, V = 5
        assert!((p - 2.0 / 6.0).abs() < 1e-12);

        assert!(matches!(
            lm.perplexity(&Document::tokenize("")),
            Err(EvalError::EmptyDocument)
        ));
        assert!(matches!(train_ngram(&[], 2), Err(EvalError::EmptyCorpus)));
        assert!(matches!(
            train_ngram(&[sent(&["a"])], 4),
            Err(EvalError::InvalidOrder(4))
        ));
    }

    #[test]
    fn unseen_words_are_interchangeable() {
        let lm = train_ngram(&[sent(&["a", "b"])], 2).unwrap();
        let x = lm.perplexity(&Document::from_tokens(["qq", "rr"])).unwrap();
        let y = lm.perplexity(&Document::from_tokens(["ss", "tt"])).unwrap();
        assert_eq!(x, y);
    }
}
