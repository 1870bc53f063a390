//! Greedy sensitivity-based word masking.
//!
//! When the classifier exposes scores, the token whose masking most reduces
//! the original class's score is masked next, until the label flips. For
//! score-free classifiers the method falls back to breadth-first search over
//! mask subsets by increasing size, capped per size by the copies-per-round
//! budget.

use std::collections::BTreeSet;
use std::time::Instant;

use crate::blackbox::BlackBox;
use crate::text::Document;

use super::{Counterfactual, ExplainConfig, MethodOutcome};

pub const MASK_TOKEN: &str = "MASK";

pub fn sedc(target: &Document, blackbox: &dyn BlackBox, config: &ExplainConfig) -> MethodOutcome {
    if target.is_empty() {
        return MethodOutcome::empty(false);
    }
    let prediction = blackbox.predict(target);
    let deadline = config.max_runtime.map(|budget| Instant::now() + budget);
    match prediction.scores() {
        Some(scores) => greedy_by_score(
            target,
            blackbox,
            prediction.label(),
            scores[prediction.label()],
            deadline,
        ),
        None => label_only_search(target, blackbox, prediction.label(), config, deadline),
    }
}

fn greedy_by_score(
    target: &Document,
    blackbox: &dyn BlackBox,
    original_label: usize,
    original_score: f64,
    deadline: Option<Instant>,
) -> MethodOutcome {
    let mut current = target.clone();
    let mut current_score = original_score;
    let mut masked: BTreeSet<usize> = BTreeSet::new();

    while masked.len() < target.len() {
        let mut best: Option<(f64, usize, Document, usize)> = None;
        for position in 0..target.len() {
            if masked.contains(&position) {
                continue;
            }
            let candidate = current
                .substitute(position, MASK_TOKEN)
                .expect("position within document");
            let prediction = blackbox.predict(&candidate);
            let scores = prediction
                .scores()
                .expect("classifier reported scores for the target");
            let drop = current_score - scores[original_label];
            if best.as_ref().is_none_or(|(d, ..)| drop > *d) {
                best = Some((drop, position, candidate, prediction.label()));
            }
            if deadline.is_some_and(|d| Instant::now() >= d) {
                return MethodOutcome::empty(true);
            }
        }
        let (drop, position, candidate, label) = best.expect("unmasked positions remain");
        current = candidate;
        current_score -= drop;
        masked.insert(position);
        if label != original_label {
            return MethodOutcome {
                counterfactual: Some(Counterfactual::new(
                    current,
                    target.clone(),
                    label,
                    masked.len() as u32,
                )),
                budget_exceeded: false,
            };
        }
    }
    MethodOutcome::empty(false)
}

/// Breadth-first over mask subsets in lexicographic order, smallest sets
/// first, evaluating at most `copies_per_round` subsets per size.
fn label_only_search(
    target: &Document,
    blackbox: &dyn BlackBox,
    original_label: usize,
    config: &ExplainConfig,
    deadline: Option<Instant>,
) -> MethodOutcome {
    let d = target.len();
    for size in 1..=d {
        let mut combo: Vec<usize> = (0..size).collect();
        let mut evaluated = 0usize;
        loop {
            let mut candidate = target.clone();
            for &position in &combo {
                candidate = candidate
                    .substitute(position, MASK_TOKEN)
                    .expect("position within document");
            }
            let label = blackbox.label(&candidate);
            if label != original_label {
                return MethodOutcome {
                    counterfactual: Some(Counterfactual::new(
                        candidate,
                        target.clone(),
                        label,
                        size as u32,
                    )),
                    budget_exceeded: false,
                };
            }
            if deadline.is_some_and(|t| Instant::now() >= t) {
                return MethodOutcome::empty(true);
            }
            evaluated += 1;
            if evaluated >= config.copies_per_round || !next_combination(&mut combo, d) {
                break;
            }
        }
    }
    MethodOutcome::empty(false)
}

/// Advances `combo` to the next k-combination of `0..n` in lexicographic
/// order; false when exhausted.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - (k - i) {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
