//! The two guided search methods and the uniform-random baseline.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::blackbox::BlackBox;
use crate::embed::VectorStore;
use crate::rng::{mix_seed, seeded_rng};
use crate::text::{Document, PosLexicon};
use crate::wordnet::WordNetStore;

use super::{
    explore, Counterfactual, EmbeddingProvider, ExplainConfig, MethodOutcome, WordNetProvider,
};

const LANGUAGE_NS: u64 = 0x6c61_6e67;
const BASELINE_NS: u64 = 0x6261_7365;

/// Exploration over WordNet neighborhoods; of all flips found, returns the
/// one most similar to the target under sentence-level Wu-Palmer score.
/// Ties go to fewer edits, then lexicographically smaller token sequences.
pub fn growing_net(
    target: &Document,
    blackbox: &dyn BlackBox,
    store: &WordNetStore,
    config: &ExplainConfig,
) -> MethodOutcome {
    let provider = WordNetProvider::new(store, config.wordnet_radius);
    let outcome = explore(target, blackbox, &provider, config);
    let mut best: Option<(f64, Counterfactual)> = None;
    for candidate in outcome.counterfactuals {
        let score = store
            .wu_palmer_sentence(candidate.document(), target)
            .expect("exploration preserves document length");
        let better = match &best {
            None => true,
            Some((best_score, best_cf)) => {
                score > *best_score
                    || (score == *best_score
                        && (candidate.edit_count() < best_cf.edit_count()
                            || (candidate.edit_count() == best_cf.edit_count()
                                && candidate.document().tokens() < best_cf.document().tokens())))
            }
        };
        if better {
            best = Some((score, candidate));
        }
    }
    MethodOutcome {
        counterfactual: best.map(|(_, cf)| cf),
        budget_exceeded: outcome.budget_exceeded,
    }
}

/// Exploration over embedding neighborhoods with threshold relaxation: the
/// threshold starts at `theta` and drops by `tau` until a flip is found or
/// the floor `theta_min` is reached. Of all flips found, returns the one
/// with the fewest edited positions; ties go to the higher sentence cosine
/// similarity, then lexicographically smaller token sequences.
pub fn growing_language(
    target: &Document,
    blackbox: &dyn BlackBox,
    store: &VectorStore,
    tagger: &dyn PosLexicon,
    config: &ExplainConfig,
) -> MethodOutcome {
    let mut step = 0u64;
    let mut last_pool = 0usize;
    loop {
        // stepping from the initial value avoids accumulated float drift
        let theta = config.theta - step as f64 * config.tau;
        if theta <= config.theta_min {
            return MethodOutcome::empty(false);
        }
        let provider = EmbeddingProvider::new(store, tagger, theta);
        let step_config = config.with_seed(mix_seed(config.seed, &[LANGUAGE_NS, step]));
        let outcome = explore(target, blackbox, &provider, &step_config);
        debug_assert!(
            outcome.pool_size >= last_pool,
            "relaxation must not shrink the candidate pool"
        );
        last_pool = outcome.pool_size;
        if !outcome.counterfactuals.is_empty() {
            return MethodOutcome {
                counterfactual: select_sparsest(outcome.counterfactuals, target, store),
                budget_exceeded: outcome.budget_exceeded,
            };
        }
        if outcome.budget_exceeded {
            return MethodOutcome::empty(true);
        }
        step += 1;
    }
}

fn select_sparsest(
    candidates: Vec<Counterfactual>,
    target: &Document,
    store: &VectorStore,
) -> Option<Counterfactual> {
    let target_vec = store.sentence_vector(target);
    let mut best: Option<(usize, f64, Counterfactual)> = None;
    for candidate in candidates {
        let edits = candidate.edit_count();
        let cosine = store
            .sentence_vector(candidate.document())
            .cosine(&target_vec)
            .unwrap_or(-1.0);
        let better = match &best {
            None => true,
            Some((best_edits, best_cos, best_cf)) => {
                edits < *best_edits
                    || (edits == *best_edits
                        && (cosine > *best_cos
                            || (cosine == *best_cos
                                && candidate.document().tokens() < best_cf.document().tokens())))
            }
        };
        if better {
            best = Some((edits, cosine, candidate));
        }
    }
    best.map(|(_, _, cf)| cf)
}

/// Unguided control: replaces one fresh position at a time with a uniformly
/// random vocabulary word, accumulating edits until the label flips.
pub fn random_baseline(
    target: &Document,
    blackbox: &dyn BlackBox,
    vocabulary: &[String],
    config: &ExplainConfig,
) -> MethodOutcome {
    if target.is_empty() || vocabulary.is_empty() {
        return MethodOutcome::empty(false);
    }
    let original_label = blackbox.label(target);
    let deadline = config.max_runtime.map(|budget| Instant::now() + budget);
    let mut rng = seeded_rng(mix_seed(config.seed, &[BASELINE_NS]));
    let mut order: Vec<usize> = (0..target.len()).collect();
    order.shuffle(&mut rng);

    let mut current = target.clone();
    let mut steps = 0u32;
    for &position in &order {
        let token = current.tokens()[position].clone();
        let mut replacement = None;
        for _ in 0..64 {
            let word = &vocabulary[rng.random_range(0..vocabulary.len())];
            if *word != token {
                replacement = Some(word.clone());
                break;
            }
        }
        let Some(replacement) = replacement else {
            continue; // vocabulary is effectively just this token
        };
        current = current
            .substitute(position, &replacement)
            .expect("position within document");
        steps += 1;
        let label = blackbox.label(&current);
        if label != original_label {
            return MethodOutcome {
                counterfactual: Some(Counterfactual::new(current, target.clone(), label, steps)),
                budget_exceeded: false,
            };
        }
        if deadline.is_some_and(|d| Instant::now() >= d) {
            return MethodOutcome::empty(true);
        }
    }
    MethodOutcome::empty(false)
}
