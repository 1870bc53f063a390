use anyhow::{anyhow, Result};
use cftext_core::blackbox::{load_model, split};
use cftext_core::eval::{
    records_to_jsonl, run_benchmark_with_report, train_ngram, BenchmarkResources, Method,
};
use cftext_core::text::Document;
use rand::{Rng, SeedableRng};

use crate::config::{
    load_vectors_resource, load_wordnet_resource, pick, require, search_config, usage, ConfigFile,
};
use crate::dataset::load_dataset;
use crate::EvaluateArgs;

pub fn run(args: EvaluateArgs, file: &ConfigFile) -> Result<()> {
    let model_path = require(args.model, file.path("model"), "model")?;
    let dataset_path = require(args.dataset, file.path("dataset"), "dataset")?;
    let wordnet_path = require(args.resources.wordnet, file.path("wordnet"), "wordnet")?;
    let vectors_path = require(args.resources.vectors, file.path("vectors"), "vectors")?;
    let out_dir = pick(
        args.out_dir,
        file.path("out-dir"),
        std::path::PathBuf::from("cftext-out"),
    );
    let max_targets = pick(args.targets, file.parse("targets")?, 100);
    let fraction = pick(args.train_fraction, file.parse("train-fraction")?, 0.7);
    let ngram_order = pick(args.ngram_order, file.parse("ngram-order")?, 2);
    let methods = parse_methods(&pick(
        args.methods,
        file.get("methods").map(String::from),
        "growing-net,growing-language,sedc,random-baseline".to_string(),
    ))?;
    let config = search_config(&args.search, file)?;

    let model = load_model(&model_path)
        .map_err(|e| anyhow!("loading model {}: {e}", model_path.display()))?;
    let wordnet = load_wordnet_resource(&wordnet_path)?;
    let vectors = load_vectors_resource(&vectors_path)?;
    let corpus = load_dataset(&dataset_path, Some(&wordnet))?;
    let (train, test) = split(&corpus, fraction, config.seed)?;
    if test.is_empty() {
        return Err(anyhow!("test split is empty"));
    }

    let targets = sample_targets(test.documents(), max_targets, config.seed);
    let sentences: Vec<Vec<String>> = train
        .documents()
        .iter()
        .map(|d| d.tokens().to_vec())
        .collect();
    let ngram = train_ngram(&sentences, ngram_order)?;
    let vocabulary = train.vocabulary();
    let resources = BenchmarkResources {
        wordnet: &wordnet,
        vectors: &vectors,
        ngram: &ngram,
        baseline_vocabulary: &vocabulary,
    };

    eprintln!(
        "evaluating {} methods over {} targets",
        methods.len(),
        targets.len()
    );
    let (records, report) =
        run_benchmark_with_report(&methods, &targets, &model, &resources, &config)?;

    std::fs::create_dir_all(&out_dir)
        .map_err(|e| anyhow!("cannot create {}: {e}", out_dir.display()))?;
    let records_path = out_dir.join("records.jsonl");
    let report_path = out_dir.join("report.json");
    let csv_path = out_dir.join("report.csv");
    std::fs::write(&records_path, records_to_jsonl(&records))?;
    std::fs::write(&report_path, serde_json::to_string_pretty(&report)? + "\n")?;
    std::fs::write(&csv_path, report.to_csv())?;

    for (name, aggregate) in &report.methods {
        println!(
            "{name}: flip rate {:.3} over {} targets, mean runtime {:.1} ms",
            aggregate.label_flip_rate, aggregate.targets, aggregate.runtime_ms.mean
        );
    }
    println!(
        "wrote {}, {}, {}",
        records_path.display(),
        report_path.display(),
        csv_path.display()
    );
    Ok(())
}

pub fn parse_methods(list: &str) -> Result<Vec<Method>> {
    let mut methods = Vec::new();
    for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let method =
            Method::parse(name).ok_or_else(|| usage(format!("unknown method '{name}'")))?;
        if !methods.contains(&method) {
            methods.push(method);
        }
    }
    if methods.is_empty() {
        return Err(usage("no methods selected"));
    }
    Ok(methods)
}

/// Seeded sample without replacement, at most `k` targets, stable for a
/// given seed regardless of platform.
fn sample_targets(documents: &[Document], k: usize, seed: u64) -> Vec<Document> {
    let mut indices: Vec<usize> = (0..documents.len()).collect();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for i in (1..indices.len()).rev() {
        let j = rng.random_range(0..=i);
        indices.swap(i, j);
    }
    indices
        .into_iter()
        .take(k)
        .map(|i| documents[i].clone())
        .collect()
}
