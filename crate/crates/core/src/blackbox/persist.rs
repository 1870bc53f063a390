//! Versioned JSON persistence for trained models. Serialization is fully
//! deterministic: the same training run always writes the same bytes.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::text::Document;

use super::{
    BlackBox, BlackBoxError, LogRegModel, NaiveBayesModel, Prediction, Vectorizer, VectorizerMode,
};

const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct ModelFile {
    format_version: u32,
    classifier: String,
    classes: Vec<String>,
    vectorizer: VectorizerData,
    #[serde(skip_serializing_if = "Option::is_none")]
    naive_bayes: Option<NaiveBayesData>,
    #[serde(skip_serializing_if = "Option::is_none")]
    logistic_regression: Option<LogRegData>,
}

#[derive(Debug, Serialize, Deserialize)]
struct VectorizerData {
    mode: VectorizerMode,
    vocab: Vec<String>,
    #[serde(default)]
    idf: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct NaiveBayesData {
    log_priors: Vec<f64>,
    log_likelihoods: Vec<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct LogRegData {
    weights: Vec<f64>,
    bias: f64,
}

/// A model restored from disk.
pub enum LoadedModel {
    NaiveBayes(NaiveBayesModel),
    LogReg(LogRegModel),
}

impl LoadedModel {
    pub fn classifier_name(&self) -> &'static str {
        match self {
            LoadedModel::NaiveBayes(_) => "naive_bayes",
            LoadedModel::LogReg(_) => "logistic_regression",
        }
    }

    pub fn vectorizer(&self) -> &Vectorizer {
        match self {
            LoadedModel::NaiveBayes(m) => m.vectorizer(),
            LoadedModel::LogReg(m) => m.vectorizer(),
        }
    }
}

impl BlackBox for LoadedModel {
    fn predict(&self, doc: &Document) -> Prediction {
        match self {
            LoadedModel::NaiveBayes(m) => m.predict(doc),
            LoadedModel::LogReg(m) => m.predict(doc),
        }
    }

    fn class_names(&self) -> &[String] {
        match self {
            LoadedModel::NaiveBayes(m) => m.class_names(),
            LoadedModel::LogReg(m) => m.class_names(),
        }
    }
}

pub fn save_model(model: &LoadedModel, path: &Path) -> Result<(), BlackBoxError> {
    let file = match model {
        LoadedModel::NaiveBayes(m) => ModelFile {
            format_version: FORMAT_VERSION,
            classifier: "naive_bayes".to_string(),
            classes: m.class_names().to_vec(),
            vectorizer: vectorizer_data(m.vectorizer()),
            naive_bayes: Some(NaiveBayesData {
                log_priors: m.log_priors().to_vec(),
                log_likelihoods: m.log_likelihoods().to_vec(),
            }),
            logistic_regression: None,
        },
        LoadedModel::LogReg(m) => ModelFile {
            format_version: FORMAT_VERSION,
            classifier: "logistic_regression".to_string(),
            classes: m.class_names().to_vec(),
            vectorizer: vectorizer_data(m.vectorizer()),
            naive_bayes: None,
            logistic_regression: Some(LogRegData {
                weights: m.weights().to_vec(),
                bias: m.bias(),
            }),
        },
    };
    let json =
        serde_json::to_string_pretty(&file).map_err(|e| BlackBoxError::ModelFile(e.to_string()))?;
    fs::write(path, json + "\n")?;
    Ok(())
}

pub fn load_model(path: &Path) -> Result<LoadedModel, BlackBoxError> {
    let text = fs::read_to_string(path)?;
    let file: ModelFile =
        serde_json::from_str(&text).map_err(|e| BlackBoxError::ModelFile(e.to_string()))?;
    if file.format_version != FORMAT_VERSION {
        return Err(BlackBoxError::ModelFile(format!(
            "unsupported format version {}",
            file.format_version
        )));
    }
    let vectorizer = Vectorizer::from_parts(
        file.vectorizer.mode,
        file.vectorizer.vocab,
        file.vectorizer.idf,
    );
    match file.classifier.as_str() {
        "naive_bayes" => {
            let data = file
                .naive_bayes
                .ok_or_else(|| BlackBoxError::ModelFile("missing naive_bayes section".into()))?;
            Ok(LoadedModel::NaiveBayes(NaiveBayesModel::from_parts(
                file.classes,
                data.log_priors,
                data.log_likelihoods,
                vectorizer,
            )))
        }
        "logistic_regression" => {
            let data = file.logistic_regression.ok_or_else(|| {
                BlackBoxError::ModelFile("missing logistic_regression section".into())
            })?;
            Ok(LoadedModel::LogReg(LogRegModel::from_parts(
                file.classes,
                data.weights,
                data.bias,
                vectorizer,
            )))
        }
        other => Err(BlackBoxError::ModelFile(format!(
            "unknown classifier '{other}'"
        ))),
    }
}

fn vectorizer_data(v: &Vectorizer) -> VectorizerData {
    VectorizerData {
        mode: v.mode(),
        vocab: v.vocab().to_vec(),
        idf: v.idf().to_vec(),
    }
}
