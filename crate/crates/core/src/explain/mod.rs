//! The counterfactual search methods: round-based exploration over
//! per-position candidate words, the WordNet- and embedding-guided variants
//! built on top of it, a greedy masking method, and a uniform-random
//! replacement baseline.

mod explore;
mod methods;
mod sedc;

pub use explore::{explore, ExploreOutcome};
pub use methods::{growing_language, growing_net, random_baseline};
pub use sedc::{sedc, MASK_TOKEN};

use std::collections::BTreeSet;
use std::time::Duration;

use crate::embed::VectorStore;
use crate::text::{Document, PosLexicon, PosTag};
use crate::wordnet::WordNetStore;

/// Search hyperparameters. The defaults are the reference settings:
/// 2000 copies per round, WordNet radius 1, and the embedding threshold
/// schedule 0.9 down to 0.4 in steps of 0.02.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplainConfig {
    /// Fresh copies of the target generated per round (`n`).
    pub copies_per_round: usize,
    /// Maximum lexical-graph distance for WordNet candidates (`t`).
    pub wordnet_radius: u32,
    /// Initial embedding similarity threshold (`theta`).
    pub theta: f64,
    /// Threshold relaxation step (`tau`).
    pub tau: f64,
    /// Relaxation floor (`theta_min`).
    pub theta_min: f64,
    /// Seed for all randomness in the search.
    pub seed: u64,
    /// Optional wall-clock budget; partial results are returned and flagged.
    pub max_runtime: Option<Duration>,
}

impl Default for ExplainConfig {
    fn default() -> ExplainConfig {
        ExplainConfig {
            copies_per_round: 2000,
            wordnet_radius: 1,
            theta: 0.9,
            tau: 0.02,
            theta_min: 0.4,
            seed: 42,
            max_runtime: None,
        }
    }
}

impl ExplainConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.copies_per_round < 1 {
            return Err("copies_per_round must be at least 1".into());
        }
        if self.tau.is_nan() || self.tau <= 0.0 {
            return Err(format!("tau must be positive (got {})", self.tau));
        }
        if !(0.0 <= self.theta_min && self.theta_min <= self.theta && self.theta <= 1.0) {
            return Err(format!(
                "need 0 <= theta_min <= theta <= 1 (got theta_min {} theta {})",
                self.theta_min, self.theta
            ));
        }
        Ok(())
    }

    pub(crate) fn with_seed(&self, seed: u64) -> ExplainConfig {
        ExplainConfig {
            seed,
            ..self.clone()
        }
    }
}

/// Which kind of candidate source filled a [`ReplacementSets`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProviderKind {
    WordNet,
    Embedding,
    Mask,
}

/// Source of similar words for one `(word, POS)` slot.
pub trait SimwordProvider {
    fn kind(&self) -> ProviderKind;

    /// Candidate replacements for `word`; never includes `word` itself.
    fn candidates(&self, word: &str, pos: PosTag) -> BTreeSet<String>;
}

/// WordNet neighborhood provider at a fixed radius. Untagged (OTHER) tokens
/// get no candidates.
pub struct WordNetProvider<'a> {
    store: &'a WordNetStore,
    radius: u32,
}

impl<'a> WordNetProvider<'a> {
    pub fn new(store: &'a WordNetStore, radius: u32) -> WordNetProvider<'a> {
        WordNetProvider { store, radius }
    }
}

impl SimwordProvider for WordNetProvider<'_> {
    fn kind(&self) -> ProviderKind {
        ProviderKind::WordNet
    }

    fn candidates(&self, word: &str, pos: PosTag) -> BTreeSet<String> {
        if pos == PosTag::Other {
            return BTreeSet::new();
        }
        self.store.simwords(word, pos, self.radius)
    }
}

/// Embedding neighborhood provider at a fixed similarity threshold.
pub struct EmbeddingProvider<'a> {
    store: &'a VectorStore,
    tagger: &'a dyn PosLexicon,
    theta: f64,
}

impl<'a> EmbeddingProvider<'a> {
    pub fn new(
        store: &'a VectorStore,
        tagger: &'a dyn PosLexicon,
        theta: f64,
    ) -> EmbeddingProvider<'a> {
        EmbeddingProvider {
            store,
            tagger,
            theta,
        }
    }
}

impl SimwordProvider for EmbeddingProvider<'_> {
    fn kind(&self) -> ProviderKind {
        ProviderKind::Embedding
    }

    fn candidates(&self, word: &str, pos: PosTag) -> BTreeSet<String> {
        self.store
            .simwords(word, pos, self.theta, self.tagger)
            .unwrap_or_default()
    }
}

/// Per-position candidate word lists for one target document.
#[derive(Debug, Clone)]
pub struct ReplacementSets {
    sets: Vec<Vec<String>>,
    kind: ProviderKind,
}

impl ReplacementSets {
    /// Queries the provider once per position. The position's own token is
    /// excluded, as is anything that does not survive tokenization as a
    /// single token (it could not be substituted back into a document).
    pub fn build(target: &Document, provider: &dyn SimwordProvider) -> ReplacementSets {
        let sets = target
            .tokens()
            .iter()
            .zip(target.tags())
            .map(|(token, &tag)| {
                provider
                    .candidates(token, tag)
                    .into_iter()
                    .filter(|w| w != token && is_single_token(w))
                    .collect()
            })
            .collect();
        ReplacementSets {
            sets,
            kind: provider.kind(),
        }
    }

    pub fn kind(&self) -> ProviderKind {
        self.kind
    }

    pub fn sets(&self) -> &[Vec<String>] {
        &self.sets
    }

    pub fn replaceable_positions(&self) -> Vec<usize> {
        self.sets
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.is_empty())
            .map(|(i, _)| i)
            .collect()
    }

    /// Total candidate count over all positions.
    pub fn pool_size(&self) -> usize {
        self.sets.iter().map(Vec::len).sum()
    }
}

fn is_single_token(word: &str) -> bool {
    let doc = Document::tokenize(word);
    doc.len() == 1 && doc.tokens()[0] == word.to_lowercase()
}

/// A perturbed document that flips the classifier, with edit metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterfactual {
    document: Document,
    modified_positions: BTreeSet<usize>,
    original: Document,
    predicted_label: usize,
    round_found: u32,
}

impl Counterfactual {
    pub(crate) fn new(
        document: Document,
        original: Document,
        predicted_label: usize,
        round_found: u32,
    ) -> Counterfactual {
        debug_assert_eq!(document.len(), original.len());
        let modified_positions = document
            .tokens()
            .iter()
            .zip(original.tokens())
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .map(|(i, _)| i)
            .collect::<BTreeSet<_>>();
        debug_assert!(modified_positions.len() <= round_found as usize);
        Counterfactual {
            document,
            modified_positions,
            original,
            predicted_label,
            round_found,
        }
    }

    pub fn document(&self) -> &Document {
        &self.document
    }

    pub fn original(&self) -> &Document {
        &self.original
    }

    /// Positions where the counterfactual differs from the original.
    pub fn modified_positions(&self) -> &BTreeSet<usize> {
        &self.modified_positions
    }

    pub fn predicted_label(&self) -> usize {
        self.predicted_label
    }

    /// The round (edit budget) at which the search produced this document.
    pub fn round_found(&self) -> u32 {
        self.round_found
    }

    pub fn edit_count(&self) -> usize {
        self.modified_positions.len()
    }
}

/// Method result: the chosen counterfactual, if any, plus a flag for runs
/// cut short by the wall-clock budget.
#[derive(Debug, Clone)]
pub struct MethodOutcome {
    pub counterfactual: Option<Counterfactual>,
    pub budget_exceeded: bool,
}

impl MethodOutcome {
    pub(crate) fn empty(budget_exceeded: bool) -> MethodOutcome {
        MethodOutcome {
            counterfactual: None,
            budget_exceeded,
        }
    }

    pub fn found(&self) -> bool {
        self.counterfactual.is_some()
    }
}

#[cfg(test)]
pub(crate) mod test_support;

#[cfg(test)]
mod tests;
