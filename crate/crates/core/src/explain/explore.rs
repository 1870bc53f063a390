//! Round-based random substitution search.
//!
//! Round `r` generates `n` fresh copies of the target, each with exactly `r`
//! distinct replaceable positions rewritten by uniformly drawn candidates,
//! and keeps every copy the classifier labels differently. The first round
//! with a non-empty collection ends the search, so results carry the
//! smallest edit budget the sampler could find.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use crate::blackbox::BlackBox;
use crate::rng::{mix_seed, seeded_rng};
use crate::text::Document;

use super::{Counterfactual, ExplainConfig, ReplacementSets, SimwordProvider};

const CHUNK: usize = 256;

/// Everything a caller may want to know about one exploration run.
#[derive(Debug, Clone)]
pub struct ExploreOutcome {
    /// Deduplicated label-flipping copies, sorted by token sequence.
    pub counterfactuals: Vec<Counterfactual>,
    pub rounds_run: u32,
    pub replaceable_positions: usize,
    /// Total candidate words over all positions.
    pub pool_size: usize,
    pub budget_exceeded: bool,
}

pub fn explore(
    target: &Document,
    blackbox: &dyn BlackBox,
    provider: &dyn SimwordProvider,
    config: &ExplainConfig,
) -> ExploreOutcome {
    let sets = ReplacementSets::build(target, provider);
    explore_with_sets(target, blackbox, &sets, config)
}

pub(crate) fn explore_with_sets(
    target: &Document,
    blackbox: &dyn BlackBox,
    sets: &ReplacementSets,
    config: &ExplainConfig,
) -> ExploreOutcome {
    let replaceable = sets.replaceable_positions();
    let pool_size = sets.pool_size();
    let mut outcome = ExploreOutcome {
        counterfactuals: Vec::new(),
        rounds_run: 0,
        replaceable_positions: replaceable.len(),
        pool_size,
        budget_exceeded: false,
    };
    if replaceable.is_empty() || target.is_empty() {
        return outcome;
    }

    let original_label = blackbox.label(target);
    let deadline = config.max_runtime.map(|budget| Instant::now() + budget);
    let parallel = blackbox.concurrent_predict_safe();
    let max_round = replaceable.len();
    // collected flips deduplicate by token sequence
    let mut found: BTreeMap<Vec<String>, Counterfactual> = BTreeMap::new();

    'rounds: for round in 1..=max_round {
        outcome.rounds_run = round as u32;
        let mut copy = 0usize;
        while copy < config.copies_per_round {
            let chunk_end = (copy + CHUNK).min(config.copies_per_round);
            let copies: Vec<Document> = (copy..chunk_end)
                .map(|j| make_copy(target, sets, &replaceable, round, config.seed, j as u64))
                .collect();
            let labels: Vec<usize> = if parallel {
                copies.par_iter().map(|doc| blackbox.label(doc)).collect()
            } else {
                copies.iter().map(|doc| blackbox.label(doc)).collect()
            };
            for (doc, label) in copies.into_iter().zip(labels) {
                if label != original_label {
                    found.entry(doc.tokens().to_vec()).or_insert_with(|| {
                        Counterfactual::new(doc.clone(), target.clone(), label, round as u32)
                    });
                }
            }
            copy = chunk_end;
            if deadline.is_some_and(|d| Instant::now() >= d) {
                outcome.budget_exceeded = true;
                break 'rounds;
            }
        }
        if !found.is_empty() {
            break;
        }
    }

    // every result is re-checked against the black box before returning
    outcome.counterfactuals = found
        .into_values()
        .filter(|cf| blackbox.label(cf.document()) != original_label)
        .collect();
    outcome
}

fn make_copy(
    target: &Document,
    sets: &ReplacementSets,
    replaceable: &[usize],
    round: usize,
    seed: u64,
    copy_index: u64,
) -> Document {
    let mut rng = seeded_rng(mix_seed(seed, &[round as u64, copy_index]));
    // sample `round` distinct positions by partial shuffle
    let mut positions = replaceable.to_vec();
    let take = round.min(positions.len());
    for k in 0..take {
        let pick = rng.random_range(k..positions.len());
        positions.swap(k, pick);
    }
    let mut doc = target.clone();
    for &position in &positions[..take] {
        let options = &sets.sets()[position];
        let word = &options[rng.random_range(0..options.len())];
        doc = doc
            .substitute(position, word)
            .expect("sampled position is within the document");
    }
    doc
}
