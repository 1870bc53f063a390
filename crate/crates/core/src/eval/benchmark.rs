//! Runs the explanation methods over a target set, recording the four
//! evaluation axes: minimality, plausibility, label flip, and runtime.

use std::time::Instant;

use rayon::prelude::*;

use crate::blackbox::BlackBox;
use crate::embed::VectorStore;
use crate::explain::{
    growing_language, growing_net, random_baseline, sedc, ExplainConfig, MethodOutcome,
};
use crate::rng::mix_seed;
use crate::text::Document;
use crate::wordnet::WordNetStore;

use super::{
    embedding_distance, levenshtein_chars, levenshtein_tokens, ConfigEcho, EvalError,
    EvaluationReport, MetricRecord, NgramLm, Timing,
};

/// The explanation methods a benchmark can exercise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    GrowingNet,
    GrowingLanguage,
    Sedc,
    RandomBaseline,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::GrowingNet,
        Method::GrowingLanguage,
        Method::Sedc,
        Method::RandomBaseline,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::GrowingNet => "growing-net",
            Method::GrowingLanguage => "growing-language",
            Method::Sedc => "sedc",
            Method::RandomBaseline => "random-baseline",
        }
    }

    pub fn parse(name: &str) -> Option<Method> {
        Method::ALL.into_iter().find(|m| m.name() == name)
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Everything a benchmark run reads besides the black box itself.
pub struct BenchmarkResources<'a> {
    pub wordnet: &'a WordNetStore,
    pub vectors: &'a VectorStore,
    pub ngram: &'a NgramLm,
    /// Vocabulary pool for the uniform-random baseline.
    pub baseline_vocabulary: &'a [String],
}

impl BenchmarkResources<'_> {
    pub fn run_method(
        &self,
        method: Method,
        target: &Document,
        blackbox: &dyn BlackBox,
        config: &ExplainConfig,
    ) -> MethodOutcome {
        match method {
            Method::GrowingNet => growing_net(target, blackbox, self.wordnet, config),
            Method::GrowingLanguage => {
                growing_language(target, blackbox, self.vectors, self.wordnet, config)
            }
            Method::Sedc => sedc(target, blackbox, config),
            Method::RandomBaseline => {
                random_baseline(target, blackbox, self.baseline_vocabulary, config)
            }
        }
    }
}

/// One record per `method x target`. Per-target seeds derive from the config
/// seed and the target id, so record content does not depend on scheduling;
/// targets run in parallel when the black box allows it.
pub fn run_benchmark(
    methods: &[Method],
    targets: &[Document],
    blackbox: &dyn BlackBox,
    resources: &BenchmarkResources<'_>,
    config: &ExplainConfig,
) -> Result<Vec<MetricRecord>, EvalError> {
    if targets.is_empty() {
        return Err(EvalError::EmptyTargets);
    }
    let mut records = Vec::with_capacity(methods.len() * targets.len());
    for &method in methods {
        let run_one = |(target_id, target): (usize, &Document)| -> MetricRecord {
            let target_config = config.with_seed(mix_seed(config.seed, &[target_id as u64]));
            let started = Instant::now();
            let outcome = resources.run_method(method, target, blackbox, &target_config);
            let runtime_ms = started.elapsed().as_millis() as u64;
            build_record(method, target_id, target, outcome, resources, runtime_ms)
        };
        if blackbox.concurrent_predict_safe() {
            records.par_extend(targets.par_iter().enumerate().map(run_one));
        } else {
            records.extend(targets.iter().enumerate().map(run_one));
        }
    }
    records.sort_by(|a, b| {
        let a_key = (method_order(methods, &a.method), a.target_id);
        let b_key = (method_order(methods, &b.method), b.target_id);
        a_key.cmp(&b_key)
    });
    Ok(records)
}

fn method_order(methods: &[Method], name: &str) -> usize {
    methods
        .iter()
        .position(|m| m.name() == name)
        .expect("record method comes from the method list")
}

fn build_record(
    method: Method,
    target_id: usize,
    target: &Document,
    outcome: MethodOutcome,
    resources: &BenchmarkResources<'_>,
    runtime_ms: u64,
) -> MetricRecord {
    let mut record = MetricRecord {
        method: method.name().to_string(),
        target_id,
        found: false,
        levenshtein_tokens: None,
        levenshtein_chars: None,
        embedding_distance: None,
        perplexity: None,
        note: outcome
            .budget_exceeded
            .then(|| "runtime budget exceeded".to_string()),
        timing: Timing { runtime_ms },
    };
    if let Some(cf) = outcome.counterfactual {
        record.found = true;
        record.levenshtein_tokens =
            Some(levenshtein_tokens(target.tokens(), cf.document().tokens()) as u32);
        record.levenshtein_chars =
            Some(levenshtein_chars(target.raw(), cf.document().raw()) as u32);
        record.embedding_distance =
            Some(embedding_distance(resources.vectors, target, cf.document()));
        record.perplexity = Some(
            resources
                .ngram
                .perplexity(cf.document())
                .expect("counterfactuals are non-empty documents"),
        );
    }
    debug_assert!(record.consistent());
    record
}

/// Convenience wrapper producing records plus their aggregated report.
pub fn run_benchmark_with_report(
    methods: &[Method],
    targets: &[Document],
    blackbox: &dyn BlackBox,
    resources: &BenchmarkResources<'_>,
    config: &ExplainConfig,
) -> Result<(Vec<MetricRecord>, EvaluationReport), EvalError> {
    let records = run_benchmark(methods, targets, blackbox, resources, config)?;
    let report = EvaluationReport::from_records(&records, ConfigEcho::from(config));
    Ok((records, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blackbox::{fit_vectorizer, train_naive_bayes, LabeledCorpus, VectorizerMode};
    use crate::eval::train_ngram;
    use crate::wordnet::load_fixture_reader;
    use std::io::BufReader;

    fn fixture_resources() -> (
        crate::wordnet::WordNetStore,
        crate::embed::VectorStore,
        NgramLm,
        Vec<String>,
    ) {
        let wordnet = load_fixture_reader(
            BufReader::new(
                concat!(
                    r#"{"id":"g-a","pos":"a","lemmas":["good"],"hypernyms":[],"antonyms":["b-a"]}"#,
                    "\n",
                    r#"{"id":"b-a","pos":"a","lemmas":["bad"],"hypernyms":[],"antonyms":["g-a"]}"#,
                    "\n",
                )
                .as_bytes(),
            ),
            "inline",
        )
        .unwrap();
        let vectors = crate::embed::VectorStore::load_reader(
            BufReader::new("good 1 0\nbad 0.85 0.5267827061871579\nfilm 0 1\n".as_bytes()),
            "inline",
        )
        .unwrap();
        let ngram = train_ngram(
            &[vec![
                "a".to_string(),
                "good".to_string(),
                "film".to_string(),
            ]],
            2,
        )
        .unwrap();
        let vocab = vec!["bad".to_string(), "film".to_string(), "good".to_string()];
        (wordnet, vectors, ngram, vocab)
    }

    #[test]
    fn method_names_round_trip() {
        for method in Method::ALL {
            assert_eq!(Method::parse(method.name()), Some(method));
        }
        assert_eq!(Method::parse("made-up"), None);
    }

    #[test]
    fn empty_target_list_is_rejected() {
        let (wordnet, vectors, ngram, vocab) = fixture_resources();
        let corpus =
            LabeledCorpus::from_rows(&[("good film", "pos"), ("bad film", "neg")], None).unwrap();
        let v = fit_vectorizer(&corpus, VectorizerMode::Count).unwrap();
        let model = train_naive_bayes(&corpus, &v).unwrap();
        let resources = BenchmarkResources {
            wordnet: &wordnet,
            vectors: &vectors,
            ngram: &ngram,
            baseline_vocabulary: &vocab,
        };
        let result = run_benchmark(
            &[Method::Sedc],
            &[],
            &model,
            &resources,
            &ExplainConfig::default(),
        );
        assert!(matches!(result, Err(EvalError::EmptyTargets)));
    }

    #[test]
    fn records_cover_every_method_target_pair() {
        let (wordnet, vectors, ngram, vocab) = fixture_resources();
        let corpus = LabeledCorpus::from_rows(
            &[
                ("a good film", "pos"),
                ("a good story", "pos"),
                ("a bad film", "neg"),
                ("a bad story", "neg"),
            ],
            None,
        )
        .unwrap();
        let v = fit_vectorizer(&corpus, VectorizerMode::Count).unwrap();
        let model = train_naive_bayes(&corpus, &v).unwrap();
        let resources = BenchmarkResources {
            wordnet: &wordnet,
            vectors: &vectors,
            ngram: &ngram,
            baseline_vocabulary: &vocab,
        };
        let targets: Vec<Document> = corpus.documents()[..2]
            .iter()
            .map(|d| d.pos_tag(&wordnet))
            .collect();
        let config = ExplainConfig {
            copies_per_round: 64,
            ..ExplainConfig::default()
        };
        let methods = [Method::GrowingNet, Method::Sedc, Method::RandomBaseline];
        let (records, report) =
            run_benchmark_with_report(&methods, &targets, &model, &resources, &config).unwrap();
        assert_eq!(records.len(), methods.len() * targets.len());
        for record in &records {
            assert!(record.consistent());
        }
        // masking the single decisive token flips this model, so every
        // sedc record is a one-edit counterfactual
        assert_eq!(report.methods["sedc"].label_flip_rate, 1.0);
        for record in records.iter().filter(|r| r.method == "sedc") {
            assert_eq!(record.levenshtein_tokens, Some(1));
        }
        for record in records.iter().filter(|r| r.found) {
            assert!(record.levenshtein_tokens.unwrap() >= 1);
        }
        let rerun = run_benchmark(&methods, &targets, &model, &resources, &config).unwrap();
        assert_eq!(strip_timing(&records), strip_timing(&rerun));
    }

    fn strip_timing(records: &[MetricRecord]) -> Vec<MetricRecord> {
        records
            .iter()
            .map(|r| MetricRecord {
                timing: Timing { runtime_ms: 0 },
                ..r.clone()
            })
            .collect()
    }

    /// Score-free wrapper that additionally forbids concurrent prediction,
    /// forcing the sequential benchmark path and sedc's subset search.
    struct SequentialLabelOnly(crate::blackbox::NaiveBayesModel);

    impl BlackBox for SequentialLabelOnly {
        fn predict(&self, doc: &Document) -> crate::blackbox::Prediction {
            crate::blackbox::Prediction::label_only(self.0.predict(doc).label())
        }

        fn class_names(&self) -> &[String] {
            self.0.class_names()
        }

        fn concurrent_predict_safe(&self) -> bool {
            false
        }
    }

    #[test]
    fn score_free_sequential_model_takes_the_label_paths() {
        let (wordnet, vectors, ngram, vocab) = fixture_resources();
        let corpus = LabeledCorpus::from_rows(
            &[
                ("a good film", "pos"),
                ("a good story", "pos"),
                ("a bad film", "neg"),
                ("a bad story", "neg"),
            ],
            None,
        )
        .unwrap();
        let v = fit_vectorizer(&corpus, VectorizerMode::Count).unwrap();
        let scored = train_naive_bayes(&corpus, &v).unwrap();
        let label_only = SequentialLabelOnly(train_naive_bayes(&corpus, &v).unwrap());
        assert!(label_only
            .predict(&corpus.documents()[0])
            .scores()
            .is_none());
        assert!(!label_only.concurrent_predict_safe());
        let resources = BenchmarkResources {
            wordnet: &wordnet,
            vectors: &vectors,
            ngram: &ngram,
            baseline_vocabulary: &vocab,
        };
        let targets: Vec<Document> = corpus.documents()[..2]
            .iter()
            .map(|d| d.pos_tag(&wordnet))
            .collect();
        let config = ExplainConfig {
            copies_per_round: 64,
            ..ExplainConfig::default()
        };
        let methods = [Method::GrowingNet, Method::Sedc];
        let with_scores =
            run_benchmark(&methods, &targets, &scored, &resources, &config).unwrap();
        let without_scores =
            run_benchmark(&methods, &targets, &label_only, &resources, &config).unwrap();
        // sedc switches to subset search but still flips on the single
        // decisive token; growing-net never needed scores at all
        for records in [&with_scores, &without_scores] {
            for record in records.iter() {
                assert!(record.found, "{record:?}");
                assert_eq!(record.levenshtein_tokens, Some(1));
            }
        }
        assert_eq!(strip_timing(&with_scores), strip_timing(&without_scores));
    }
}
