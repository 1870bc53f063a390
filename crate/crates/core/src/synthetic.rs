//! Deterministic synthetic polarity corpora for benchmarks, demos, and
//! tests. The label of every document is decided by exactly one sentiment
//! adjective, and every adjective has antonyms in the bundled miniature
//! WordNet, so a counterfactual is guaranteed to exist.

use std::io::Write;
use std::path::Path;

use rand::Rng;

use crate::rng::{mix_seed, seeded_rng};

pub const POSITIVE_ADJECTIVES: [&str; 5] = ["good", "great", "fine", "superb", "best"];
pub const NEGATIVE_ADJECTIVES: [&str; 8] = [
    "bad", "poor", "awful", "dreadful", "terrible", "lousy", "worst", "ill",
];
const NOUNS: [&str; 5] = ["film", "movie", "book", "article", "story"];
const SECOND_NOUNS: [&str; 4] = ["dog", "cat", "musician", "quiz"];

/// Slight negative majority: with balanced classes an all-masked document
/// would sit on a prior tie, making mask-based searches degenerate.
const NEGATIVE_FRACTION: f64 = 0.53;

/// Generates `(text, label)` rows with labels `pos` / `neg`. The class
/// counts are exact for a given `docs`, and the row sequence depends only
/// on `seed`.
pub fn polarity_rows(docs: usize, seed: u64) -> Vec<(String, String)> {
    let negatives = (NEGATIVE_FRACTION * docs as f64).round() as usize;
    let mut labels: Vec<bool> = (0..docs).map(|i| i < negatives).collect();
    let mut rng = seeded_rng(mix_seed(seed, &[0x706f_6c61]));
    for i in (1..labels.len()).rev() {
        let j = rng.random_range(0..=i);
        labels.swap(i, j);
    }

    labels
        .into_iter()
        .map(|negative| {
            let adjective = if negative {
                NEGATIVE_ADJECTIVES[rng.random_range(0..NEGATIVE_ADJECTIVES.len())]
            } else {
                POSITIVE_ADJECTIVES[rng.random_range(0..POSITIVE_ADJECTIVES.len())]
            };
            let noun = NOUNS[rng.random_range(0..NOUNS.len())];
            let second = SECOND_NOUNS[rng.random_range(0..SECOND_NOUNS.len())];
            let text = match rng.random_range(0..4) {
                0 => format!("this is a {adjective} {noun}"),
                1 => format!("the {noun} was {adjective}"),
                2 => format!("a truly {adjective} {noun} about a {second}"),
                _ => format!("the {noun} is really {adjective}"),
            };
            let label = if negative { "neg" } else { "pos" };
            (text, label.to_string())
        })
        .collect()
}

/// Writes the rows as a `text,label` CSV with a header row.
pub fn write_polarity_csv(path: &Path, docs: usize, seed: u64) -> std::io::Result<()> {
    let mut file = std::fs::File::create(path)?;
    writeln!(file, "text,label")?;
    for (text, label) in polarity_rows(docs, seed) {
        writeln!(file, "{text},{label}")?;
    }
    Ok(())
}
