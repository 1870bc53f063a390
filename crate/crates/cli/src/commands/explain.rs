use std::time::Instant;

use anyhow::{anyhow, Result};
use cftext_core::blackbox::{load_model, split, BlackBox};
use cftext_core::eval::{
    embedding_distance, levenshtein_chars, levenshtein_tokens, train_ngram, Method,
};
use cftext_core::explain::{growing_language, growing_net, random_baseline, sedc, MethodOutcome};
use cftext_core::text::Document;

use crate::config::{
    load_vectors_resource, load_wordnet_resource, pick, require, search_config, usage, ConfigFile,
};
use crate::dataset::load_dataset;
use crate::ExplainArgs;

pub fn run(args: ExplainArgs, file: &ConfigFile) -> Result<()> {
    let model_path = require(args.model, file.path("model"), "model")?;
    let text = require(args.text, file.get("text").map(String::from), "text")?;
    if text.trim().is_empty() {
        return Err(usage("--text must not be empty"));
    }
    let method_name = pick(
        args.method,
        file.get("method").map(String::from),
        "growing-net".to_string(),
    );
    let method = Method::parse(&method_name)
        .ok_or_else(|| usage(format!("unknown method '{method_name}'")))?;
    let config = search_config(&args.search, file)?;

    let model = load_model(&model_path)
        .map_err(|e| anyhow!("loading model {}: {e}", model_path.display()))?;

    let wordnet_path = args.resources.wordnet.or(file.path("wordnet"));
    let vectors_path = args.resources.vectors.or(file.path("vectors"));
    let wordnet = wordnet_path
        .map(|p| load_wordnet_resource(&p))
        .transpose()?;
    let vectors = vectors_path
        .map(|p| load_vectors_resource(&p))
        .transpose()?;

    let doc = Document::tokenize(&text);
    let doc = match &wordnet {
        Some(store) => doc.pos_tag(store),
        None => doc,
    };

    let started = Instant::now();
    let outcome: MethodOutcome = match method {
        Method::GrowingNet => {
            let store = wordnet
                .as_ref()
                .ok_or_else(|| usage("growing-net requires --wordnet"))?;
            growing_net(&doc, &model, store, &config)
        }
        Method::GrowingLanguage => {
            let store = vectors
                .as_ref()
                .ok_or_else(|| usage("growing-language requires --vectors"))?;
            let tagger = wordnet
                .as_ref()
                .ok_or_else(|| usage("growing-language requires --wordnet for POS filtering"))?;
            growing_language(&doc, &model, store, tagger, &config)
        }
        Method::Sedc => sedc(&doc, &model, &config),
        Method::RandomBaseline => {
            let vocab = model.vectorizer().vocab().to_vec();
            random_baseline(&doc, &model, &vocab, &config)
        }
    };
    let runtime_ms = started.elapsed().as_millis() as u64;

    // optional plausibility proxy, fitted on the dataset's training split
    let ngram = match args.dataset.or(file.path("dataset")) {
        Some(path) => {
            let corpus = load_dataset(&path, None)?;
            let (train, _) = split(&corpus, 0.7, config.seed)?;
            let sentences: Vec<Vec<String>> = train
                .documents()
                .iter()
                .map(|d| d.tokens().to_vec())
                .collect();
            Some(train_ngram(&sentences, 2)?)
        }
        None => None,
    };

    let original_label = model.predict(&doc);
    let payload = match &outcome.counterfactual {
        None => serde_json::json!({
            "method": method.name(),
            "original_text": doc.raw(),
            "original_label": model.class_names()[original_label.label()],
            "counterfactual": null,
            "budget_exceeded": outcome.budget_exceeded,
            "timing": {"runtime_ms": runtime_ms},
        }),
        Some(cf) => {
            let metrics = serde_json::json!({
                "levenshtein_tokens": levenshtein_tokens(doc.tokens(), cf.document().tokens()),
                "levenshtein_chars": levenshtein_chars(doc.raw(), cf.document().raw()),
                "embedding_distance": vectors
                    .as_ref()
                    .map(|v| embedding_distance(v, &doc, cf.document())),
                "perplexity": ngram
                    .as_ref()
                    .and_then(|lm| lm.perplexity(cf.document()).ok()),
            });
            serde_json::json!({
                "method": method.name(),
                "original_text": doc.raw(),
                "original_label": model.class_names()[original_label.label()],
                "counterfactual": cf.document().raw(),
                "counterfactual_label": model.class_names()[cf.predicted_label()],
                "modified_positions": cf.modified_positions().iter().collect::<Vec<_>>(),
                "round_found": cf.round_found(),
                "metrics": metrics,
                "budget_exceeded": outcome.budget_exceeded,
                "timing": {"runtime_ms": runtime_ms},
            })
        }
    };
    println!("{}", serde_json::to_string_pretty(&payload)?);
    Ok(())
}
