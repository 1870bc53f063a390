use anyhow::{anyhow, Result};
use cftext_core::blackbox::{
    fit_vectorizer, save_model, split, train_logreg, train_naive_bayes, BlackBox, LoadedModel,
    LogRegOptions, VectorizerMode,
};

use crate::config::{pick, require, usage, ConfigFile};
use crate::dataset::load_dataset;
use crate::TrainArgs;

pub fn run(args: TrainArgs, file: &ConfigFile) -> Result<()> {
    let dataset = require(args.dataset, file.path("dataset"), "dataset")?;
    let model_out = require(args.model_out, file.path("model-out"), "model-out")?;
    let classifier = pick(
        args.classifier,
        file.get("classifier").map(String::from),
        "naive-bayes".to_string(),
    );
    let vectorizer_mode = parse_vectorizer(&pick(
        args.vectorizer,
        file.get("vectorizer").map(String::from),
        "count".to_string(),
    ))?;
    let fraction = pick(args.train_fraction, file.parse("train-fraction")?, 0.7);
    let seed = pick(args.seed, file.parse("seed")?, 42);

    let corpus = load_dataset(&dataset, None)?;
    let (train, test) = split(&corpus, fraction, seed)?;
    let vectorizer = fit_vectorizer(&train, vectorizer_mode)?;

    let model = match classifier.as_str() {
        "naive-bayes" => LoadedModel::NaiveBayes(train_naive_bayes(&train, &vectorizer)?),
        "logreg" => {
            let defaults = LogRegOptions::default();
            let options = LogRegOptions {
                epochs: pick(args.epochs, file.parse("epochs")?, defaults.epochs),
                learning_rate: pick(
                    args.learning_rate,
                    file.parse("learning-rate")?,
                    defaults.learning_rate,
                ),
                l2: pick(args.l2, file.parse("l2")?, defaults.l2),
            };
            LoadedModel::LogReg(train_logreg(&train, &vectorizer, options)?)
        }
        other => return Err(usage(format!("unknown classifier '{other}'"))),
    };

    let correct = test
        .documents()
        .iter()
        .zip(test.labels())
        .filter(|(doc, &label)| model.label(doc) == label)
        .count();
    let accuracy = correct as f64 / test.len() as f64;

    save_model(&model, &model_out)
        .map_err(|e| anyhow!("writing model to {}: {e}", model_out.display()))?;

    let summary = serde_json::json!({
        "classifier": model.classifier_name(),
        "vectorizer": vectorizer_mode.to_string(),
        "classes": corpus.classes(),
        "train_size": train.len(),
        "test_size": test.len(),
        "test_accuracy": accuracy,
        "vocabulary_size": model.vectorizer().vocab_size(),
        "seed": seed,
        "model_path": model_out.display().to_string(),
    });
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}

pub fn parse_vectorizer(name: &str) -> Result<VectorizerMode> {
    match name {
        "count" => Ok(VectorizerMode::Count),
        "tfidf" => Ok(VectorizerMode::Tfidf),
        other => Err(usage(format!("unknown vectorizer '{other}'"))),
    }
}
