use std::collections::BTreeSet;
use std::io::BufReader;
use std::time::Duration;

use super::test_support::{FixedProvider, FnBox, KeywordBox};
use super::*;
use crate::blackbox::{BlackBox, LabelOnly};
use crate::embed::VectorStore;
use crate::eval::levenshtein_tokens;
use crate::wordnet::{load_fixture_reader, WordNetStore};

fn tagged(tokens: &[&str]) -> Document {
    Document::from_tokens(tokens.to_vec())
}

fn small_config(n: usize, seed: u64) -> ExplainConfig {
    ExplainConfig {
        copies_per_round: n,
        seed,
        ..ExplainConfig::default()
    }
}

fn chain_store() -> WordNetStore {
    let lines = r#"
{"id":"00000001-n","pos":"n","lemmas":["entity"],"hypernyms":[],"antonyms":[]}
{"id":"00000002-n","pos":"n","lemmas":["animal"],"hypernyms":["00000001-n"],"antonyms":[]}
{"id":"00000003-n","pos":"n","lemmas":["dog"],"hypernyms":["00000002-n"],"antonyms":[]}
{"id":"00000004-n","pos":"n","lemmas":["cat"],"hypernyms":["00000002-n"],"antonyms":[]}
{"id":"00000005-n","pos":"n","lemmas":["artifact"],"hypernyms":["00000001-n"],"antonyms":[]}
{"id":"00000006-n","pos":"n","lemmas":["film"],"hypernyms":["00000005-n"],"antonyms":[]}
"#;
    load_fixture_reader(BufReader::new(lines.as_bytes()), "inline").unwrap()
}

#[test]
fn default_config_matches_reference_settings() {
    let config = ExplainConfig::default();
    assert_eq!(config.copies_per_round, 2000);
    assert_eq!(config.wordnet_radius, 1);
    assert_eq!(config.theta, 0.9);
    assert_eq!(config.tau, 0.02);
    assert_eq!(config.theta_min, 0.4);
    config.validate().unwrap();
}

#[test]
fn config_validation_rejects_bad_values() {
    let bad = [
        ExplainConfig {
            tau: 0.0,
            ..ExplainConfig::default()
        },
        ExplainConfig {
            theta_min: 0.95,
            ..ExplainConfig::default()
        },
        ExplainConfig {
            copies_per_round: 0,
            ..ExplainConfig::default()
        },
    ];
    for config in bad {
        assert!(config.validate().is_err(), "{config:?} should be invalid");
    }
}

#[test]
fn explore_finds_single_replacement_flip() {
    let x = tagged(&["good", "book"]);
    let f = KeywordBox::new("good");
    let provider = FixedProvider::new(&[("good", &["bad"])]);
    let outcome = explore(&x, &f, &provider, &small_config(50, 1));
    assert_eq!(outcome.replaceable_positions, 1);
    assert_eq!(outcome.rounds_run, 1);
    assert_eq!(outcome.counterfactuals.len(), 1);
    let cf = &outcome.counterfactuals[0];
    assert_eq!(cf.document().tokens(), ["bad", "book"]);
    assert_eq!(cf.modified_positions(), &BTreeSet::from([0]));
    assert_eq!(cf.round_found(), 1);
    assert_eq!(cf.predicted_label(), 0);
}

#[test]
fn explore_with_no_candidates_returns_empty() {
    let x = tagged(&["good", "book"]);
    let f = KeywordBox::new("good");
    let provider = FixedProvider::new(&[]);
    let outcome = explore(&x, &f, &provider, &small_config(50, 1));
    assert!(outcome.counterfactuals.is_empty());
    assert_eq!(outcome.rounds_run, 0);
    assert_eq!(outcome.pool_size, 0);
}

#[test]
fn explore_needs_two_edits_when_one_is_not_enough() {
    // flips only when positions 0 and 2 are both changed
    let x = tagged(&["a0", "b0", "c0"]);
    let f = FnBox::new(|tokens: &[String]| usize::from(!(tokens[0] != "a0" && tokens[2] != "c0")));
    let provider = FixedProvider::new(&[
        ("a0", &["a1", "a2"]),
        ("b0", &["b1", "b2"]),
        ("c0", &["c1", "c2"]),
    ]);
    let outcome = explore(&x, &f, &provider, &small_config(500, 3));
    assert_eq!(outcome.rounds_run, 2);
    assert!(!outcome.counterfactuals.is_empty());
    for cf in &outcome.counterfactuals {
        assert_eq!(cf.round_found(), 2);
        assert_eq!(cf.edit_count(), 2);
        assert!(cf.modified_positions().contains(&0));
        assert!(cf.modified_positions().contains(&2));
        // exactly round-many distinct positions were rewritten
        assert_eq!(
            levenshtein_tokens(x.tokens(), cf.document().tokens()),
            cf.edit_count()
        );
    }
}

#[test]
fn explore_is_deterministic_and_parallel_agnostic() {
    let x = tagged(&["a0", "b0", "c0", "d0"]);
    let provider = FixedProvider::new(&[
        ("a0", &["a1", "a2", "a3"]),
        ("b0", &["b1"]),
        ("c0", &["c1", "c2"]),
    ]);
    let f = FnBox::new(|tokens: &[String]| usize::from(tokens[0] == "a2" || tokens[2] == "c1"));
    let docs = |outcome: ExploreOutcome| -> Vec<Vec<String>> {
        outcome
            .counterfactuals
            .iter()
            .map(|c| c.document().tokens().to_vec())
            .collect()
    };
    // FnBox flips label 0 -> 1 for some substitutions
    let first = docs(explore(&x, &f, &provider, &small_config(300, 9)));
    let second = docs(explore(&x, &f, &provider, &small_config(300, 9)));
    assert_eq!(first, second);
    assert!(!first.is_empty());

    // same seed, concurrency declaration off: identical results
    let f_par = KeywordBox::new("a0");
    let mut f_seq = KeywordBox::new("a0");
    f_seq.sequential_only = true;
    assert!(f_par.concurrent_predict_safe());
    assert!(!f_seq.concurrent_predict_safe());
    let a = docs(explore(&x, &f_par, &provider, &small_config(300, 9)));
    let b = docs(explore(&x, &f_seq, &provider, &small_config(300, 9)));
    assert_eq!(a, b);
}

#[test]
fn explore_respects_zero_budget() {
    let x = tagged(&["a0", "b0"]);
    let provider = FixedProvider::new(&[("a0", &["a1"]), ("b0", &["b1"])]);
    let f = KeywordBox::new("zzz");
    let mut config = small_config(100_000, 4);
    config.max_runtime = Some(Duration::from_millis(0));
    let outcome = explore(&x, &f, &provider, &config);
    assert!(outcome.budget_exceeded);
}

#[test]
fn every_counterfactual_flips_at_return_time() {
    let x = tagged(&["good", "film", "plot"]);
    let f = KeywordBox::new("good");
    let provider = FixedProvider::new(&[
        ("good", &["bad", "fine"]),
        ("film", &["movie"]),
        ("plot", &["story"]),
    ]);
    let outcome = explore(&x, &f, &provider, &small_config(200, 5));
    assert!(!outcome.counterfactuals.is_empty());
    for cf in &outcome.counterfactuals {
        assert_ne!(f.label(cf.document()), f.label(&x));
        assert_ne!(cf.document().tokens()[0], "good");
    }
}

#[test]
fn growing_net_prefers_higher_sentence_similarity() {
    // dog's radius-1 neighborhood is exactly {cat, film}: the hypernym's
    // only lemma is multi-word and gets dropped from candidate sets
    let lines = r#"
{"id":"e-n","pos":"n","lemmas":["entity"],"hypernyms":[],"antonyms":[]}
{"id":"m-n","pos":"n","lemmas":["placental_mammal"],"hypernyms":["e-n"],"antonyms":[]}
{"id":"d-n","pos":"n","lemmas":["dog"],"hypernyms":["m-n"],"antonyms":["c-n","f-n"]}
{"id":"c-n","pos":"n","lemmas":["cat"],"hypernyms":["m-n"],"antonyms":[]}
{"id":"a-n","pos":"n","lemmas":["craftwork"],"hypernyms":["e-n"],"antonyms":[]}
{"id":"f-n","pos":"n","lemmas":["film"],"hypernyms":["a-n"],"antonyms":[]}
"#;
    let store = load_fixture_reader(BufReader::new(lines.as_bytes()), "inline").unwrap();
    assert_eq!(
        store.simwords("dog", crate::text::PosTag::Noun, 1),
        BTreeSet::from(["cat".to_string(), "film".to_string()])
    );

    // dog -> cat scores (3*1 + 2/3)/4 = 11/12; dog -> film scores 5/6
    let x = tagged(&["the", "dog", "was", "here"]).pos_tag(&store);
    let f = FnBox::new(|tokens: &[String]| usize::from(tokens.iter().any(|t| t == "dog")));
    let chosen = growing_net(&x, &f, &store, &small_config(400, 2));
    let cf = chosen.counterfactual.expect("flip exists");
    assert_eq!(cf.document().tokens()[1], "cat");
    let wup_selected = store.wu_palmer_sentence(cf.document(), &x).unwrap();
    assert!((wup_selected - 11.0 / 12.0).abs() < 1e-12);
    let alternative = x.substitute(1, "film").unwrap();
    let wup_other = store.wu_palmer_sentence(&alternative, &x).unwrap();
    assert!((wup_other - 5.0 / 6.0).abs() < 1e-12);
}

#[test]
fn growing_net_selection_maximizes_over_the_found_set() {
    let store = chain_store();
    let x = tagged(&["the", "dog", "was", "here"]).pos_tag(&store);
    let f = FnBox::new(|tokens: &[String]| usize::from(tokens.iter().any(|t| t == "dog")));
    let config = small_config(400, 2);
    let provider = WordNetProvider::new(&store, config.wordnet_radius);
    let all = explore(&x, &f, &provider, &config);
    assert!(!all.counterfactuals.is_empty());
    let best_score = all
        .counterfactuals
        .iter()
        .map(|c| store.wu_palmer_sentence(c.document(), &x).unwrap())
        .fold(f64::MIN, f64::max);
    let chosen = growing_net(&x, &f, &store, &config).counterfactual.unwrap();
    let chosen_score = store.wu_palmer_sentence(chosen.document(), &x).unwrap();
    assert_eq!(chosen_score, best_score);
}

#[test]
fn growing_net_empty_exploration_gives_none() {
    let store = chain_store();
    let x = tagged(&["nothing", "known"]);
    let f = KeywordBox::new("nothing");
    let outcome = growing_net(&x, &f, &store, &small_config(50, 1));
    assert!(!outcome.found());
}

fn relaxation_store() -> VectorStore {
    let text = "good 1 0\n\
                great 0.92 0.39191835884530846\n\
                bad 0.85 0.5267827061871579\n\
                poor 0.845 0.534814452562288\n";
    VectorStore::load_reader(BufReader::new(text.as_bytes()), "inline").unwrap()
}

struct NoLexicon;

impl crate::text::PosLexicon for NoLexicon {
    fn has_pos(&self, _word: &str, _pos: crate::text::PosTag) -> bool {
        false
    }
}

#[test]
fn growing_language_relaxes_until_flip() {
    let store = relaxation_store();
    // flips only on "bad" or "poor", both below the initial threshold
    let f = FnBox::new(|tokens: &[String]| {
        usize::from(!tokens.iter().any(|t| t == "bad" || t == "poor"))
    });
    let x = tagged(&["good"]);
    let outcome = growing_language(&x, &f, &store, &NoLexicon, &small_config(100, 6));
    let cf = outcome.counterfactual.expect("reachable after relaxation");
    // ties on edit count resolve toward the higher sentence cosine
    assert_eq!(cf.document().tokens(), ["bad"]);
    assert_eq!(cf.edit_count(), 1);

    // a floor above the needed threshold leaves the flip unreachable
    let mut strict = small_config(100, 6);
    strict.theta_min = 0.86;
    let outcome = growing_language(&x, &f, &store, &NoLexicon, &strict);
    assert!(!outcome.found());
}

#[test]
fn growing_language_pool_grows_monotonically() {
    let store = relaxation_store();
    let x = tagged(&["good"]);
    let mut last = 0usize;
    let mut theta = 0.9;
    while theta > 0.4 {
        let provider = EmbeddingProvider::new(&store, &NoLexicon, theta);
        let sets = ReplacementSets::build(&x, &provider);
        assert!(sets.pool_size() >= last, "pool shrank at theta {theta}");
        last = sets.pool_size();
        theta -= 0.02;
    }
    assert!(last >= 3);
}

#[test]
fn sedc_single_mask_on_decisive_token() {
    let f = KeywordBox::new("good");
    let x = tagged(&["this", "is", "good"]);
    let outcome = sedc(&x, &f, &ExplainConfig::default());
    let cf = outcome.counterfactual.expect("masking flips");
    assert_eq!(cf.document().tokens(), ["this", "is", "mask"]);
    assert_eq!(cf.document().surface()[2], MASK_TOKEN);
    assert!(cf.document().raw().contains("MASK"));
    assert_eq!(cf.edit_count(), 1);
    assert_eq!(cf.round_found(), 1);
}

#[test]
fn sedc_label_path_finds_minimal_mask_pair() {
    // scoreless classifier flips only when both keywords are gone
    let f = LabelOnly(FnBox::new(|tokens: &[String]| {
        usize::from(tokens.iter().any(|t| t == "aa") || tokens.iter().any(|t| t == "bb"))
    }));
    let x = tagged(&["aa", "xx", "bb", "yy"]);
    let outcome = sedc(&x, &f, &ExplainConfig::default());
    let cf = outcome.counterfactual.expect("full mask always flips");
    assert_eq!(cf.edit_count(), 2);
    assert_eq!(cf.modified_positions(), &BTreeSet::from([0, 2]));

    // exhaustive subset check: no single mask flips
    for j in 0..x.len() {
        let masked = x.substitute(j, MASK_TOKEN).unwrap();
        assert_eq!(f.label(&masked), f.label(&x));
    }
}

#[test]
fn sedc_no_flip_returns_none() {
    let f = KeywordBox::new("absent");
    let x = tagged(&["plain", "words"]);
    let outcome = sedc(&x, &f, &ExplainConfig::default());
    assert!(!outcome.found());
}

#[test]
fn random_baseline_accumulates_edits_until_flip() {
    let f = KeywordBox::new("good");
    let x = tagged(&["good", "film", "today"]);
    let vocab: Vec<String> = ["awful", "bad", "dull", "grim"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let outcome = random_baseline(&x, &f, &vocab, &small_config(100, 11));
    let cf = outcome.counterfactual.expect("replacing good always flips");
    assert!(cf.edit_count() >= 1);
    assert_ne!(cf.document().tokens()[0], "good");
    assert_eq!(f.label(cf.document()), 0);

    // determinism
    let again = random_baseline(&x, &f, &vocab, &small_config(100, 11));
    assert_eq!(
        cf.document().tokens(),
        again.counterfactual.unwrap().document().tokens()
    );
}

#[test]
fn replacement_sets_exclude_self_and_multi_token_words() {
    let provider = FixedProvider::new(&[("good", &["good", "very good", "bad", "so-so"])]);
    let x = tagged(&["good"]);
    let sets = ReplacementSets::build(&x, &provider);
    assert_eq!(sets.sets()[0], vec!["bad".to_string()]);
}
