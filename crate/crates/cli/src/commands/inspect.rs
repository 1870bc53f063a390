use anyhow::{anyhow, Result};
use cftext_core::blackbox::BlackBox;
use cftext_core::text::PosTag;

use crate::config::{load_vectors_resource, load_wordnet_resource, usage, ConfigFile};
use crate::dataset::load_dataset;
use crate::InspectArgs;

pub fn run(args: InspectArgs, file: &ConfigFile) -> Result<()> {
    let mut report = serde_json::Map::new();
    let mut inspected = false;

    if let Some(path) = args.resources.wordnet.or(file.path("wordnet")) {
        let store = load_wordnet_resource(&path)?;
        let (hypernyms, hyponyms, antonyms) = store.edge_counts();
        report.insert(
            "wordnet".to_string(),
            serde_json::json!({
                "path": path.display().to_string(),
                "synsets": store.synset_count(),
                "synsets_by_pos": {
                    "noun": store.synset_count_for(PosTag::Noun),
                    "verb": store.synset_count_for(PosTag::Verb),
                    "adj": store.synset_count_for(PosTag::Adj),
                    "adv": store.synset_count_for(PosTag::Adv),
                },
                "hypernym_edges": hypernyms,
                "hyponym_edges": hyponyms,
                "antonym_edges": antonyms,
            }),
        );
        inspected = true;
    }

    if let Some(path) = args.resources.vectors.or(file.path("vectors")) {
        let store = load_vectors_resource(&path)?;
        report.insert(
            "vectors".to_string(),
            serde_json::json!({
                "path": path.display().to_string(),
                "words": store.len(),
                "dimension": store.dim(),
                "warnings": store.warnings().len(),
            }),
        );
        inspected = true;
    }

    if let Some(path) = args.dataset.or(file.path("dataset")) {
        let corpus = load_dataset(&path, None)?;
        let tokens: usize = corpus.documents().iter().map(|d| d.len()).sum();
        let class_counts: serde_json::Map<String, serde_json::Value> = corpus
            .classes()
            .iter()
            .enumerate()
            .map(|(label, name)| {
                (
                    name.clone(),
                    serde_json::Value::from(corpus.class_count(label)),
                )
            })
            .collect();
        report.insert(
            "dataset".to_string(),
            serde_json::json!({
                "path": path.display().to_string(),
                "documents": corpus.len(),
                "classes": class_counts,
                "vocabulary_size": corpus.vocabulary().len(),
                "mean_tokens": tokens as f64 / corpus.len() as f64,
            }),
        );
        inspected = true;
    }

    if let Some(path) = args.model.or(file.path("model")) {
        let model = cftext_core::blackbox::load_model(&path)
            .map_err(|e| anyhow!("loading model {}: {e}", path.display()))?;
        report.insert(
            "model".to_string(),
            serde_json::json!({
                "path": path.display().to_string(),
                "classifier": model.classifier_name(),
                "classes": model.class_names(),
                "vectorizer": model.vectorizer().mode().to_string(),
                "vocabulary_size": model.vectorizer().vocab_size(),
            }),
        );
        inspected = true;
    }

    if !inspected {
        return Err(usage(
            "nothing to inspect: pass --wordnet, --vectors, --dataset, or --model",
        ));
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&serde_json::Value::Object(report))?
    );
    Ok(())
}
