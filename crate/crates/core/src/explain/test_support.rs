//! Shared stubs for exercising the search methods without trained models.

use std::collections::{BTreeSet, HashMap};

use crate::blackbox::{BlackBox, Prediction};
use crate::text::{Document, PosTag};

use super::{ProviderKind, SimwordProvider};

/// Candidate map keyed by word, ignoring POS.
pub(crate) struct FixedProvider {
    pub map: HashMap<String, BTreeSet<String>>,
}

impl FixedProvider {
    pub fn new(entries: &[(&str, &[&str])]) -> FixedProvider {
        FixedProvider {
            map: entries
                .iter()
                .map(|(word, options)| {
                    (
                        word.to_string(),
                        options.iter().map(|o| o.to_string()).collect(),
                    )
                })
                .collect(),
        }
    }
}

impl SimwordProvider for FixedProvider {
    fn kind(&self) -> ProviderKind {
        ProviderKind::WordNet
    }

    fn candidates(&self, word: &str, _pos: PosTag) -> BTreeSet<String> {
        self.map.get(word).cloned().unwrap_or_default()
    }
}

/// Binary classifier: positive exactly when `keyword` is present. Scores
/// are 0/1 indicators unless `scoreless` is set.
pub(crate) struct KeywordBox {
    pub keyword: String,
    pub classes: Vec<String>,
    pub scoreless: bool,
    pub sequential_only: bool,
}

impl KeywordBox {
    pub fn new(keyword: &str) -> KeywordBox {
        KeywordBox {
            keyword: keyword.to_string(),
            classes: vec!["neg".to_string(), "pos".to_string()],
            scoreless: false,
            sequential_only: false,
        }
    }
}

impl BlackBox for KeywordBox {
    fn predict(&self, doc: &Document) -> Prediction {
        let hit = doc.tokens().iter().any(|t| t == &self.keyword);
        let label = usize::from(hit);
        if self.scoreless {
            Prediction::label_only(label)
        } else {
            let p = if hit { 1.0 } else { 0.0 };
            Prediction::from_scores(vec![1.0 - p, p])
        }
    }

    fn class_names(&self) -> &[String] {
        &self.classes
    }

    fn concurrent_predict_safe(&self) -> bool {
        !self.sequential_only
    }
}

/// Classifier driven by an arbitrary label function over token lists.
pub(crate) struct FnBox<F: Fn(&[String]) -> usize + Send + Sync> {
    pub f: F,
    pub classes: Vec<String>,
}

impl<F: Fn(&[String]) -> usize + Send + Sync> FnBox<F> {
    pub fn new(f: F) -> FnBox<F> {
        FnBox {
            f,
            classes: vec!["neg".to_string(), "pos".to_string()],
        }
    }
}

impl<F: Fn(&[String]) -> usize + Send + Sync> BlackBox for FnBox<F> {
    fn predict(&self, doc: &Document) -> Prediction {
        Prediction::label_only((self.f)(doc.tokens()))
    }

    fn class_names(&self) -> &[String] {
        &self.classes
    }
}
