//! Benchmark records and their aggregation into a report.
//!
//! Per-record output is JSON lines; the report is a single JSON document
//! whose aggregates are recomputed purely from the records, so persisting
//! and re-reading the records always reproduces the same report.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::explain::ExplainConfig;

use super::EvalError;

/// Wall-clock fields are kept in their own object: they are the one part of
/// the output exempt from byte-for-byte determinism.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub runtime_ms: u64,
}

/// One method applied to one target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRecord {
    pub method: String,
    pub target_id: usize,
    pub found: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levenshtein_tokens: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levenshtein_chars: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding_distance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perplexity: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub timing: Timing,
}

impl MetricRecord {
    /// Metric fields are present exactly when a counterfactual was found.
    pub fn consistent(&self) -> bool {
        let present = [
            self.levenshtein_tokens.is_some(),
            self.levenshtein_chars.is_some(),
            self.embedding_distance.is_some(),
            self.perplexity.is_some(),
        ];
        present.iter().all(|&p| p == self.found)
    }
}

pub fn records_to_jsonl(records: &[MetricRecord]) -> String {
    let mut out = String::new();
    for record in records {
        out.push_str(&serde_json::to_string(record).expect("records serialize"));
        out.push('\n');
    }
    out
}

pub fn records_from_jsonl(text: &str) -> Result<Vec<MetricRecord>, EvalError> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(|e| EvalError::Format(e.to_string())))
        .collect()
}

/// Echo of the search configuration, embedded in every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub copies_per_round: usize,
    pub wordnet_radius: u32,
    pub theta: f64,
    pub tau: f64,
    pub theta_min: f64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_runtime_ms: Option<u64>,
}

impl From<&ExplainConfig> for ConfigEcho {
    fn from(config: &ExplainConfig) -> ConfigEcho {
        ConfigEcho {
            copies_per_round: config.copies_per_round,
            wordnet_radius: config.wordnet_radius,
            theta: config.theta,
            tau: config.tau,
            theta_min: config.theta_min,
            seed: config.seed,
            max_runtime_ms: config.max_runtime.map(|d| d.as_millis() as u64),
        }
    }
}

/// Mean, median, and population standard deviation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub mean: f64,
    pub median: f64,
    pub std_dev: f64,
}

impl Aggregate {
    pub fn from_values(values: &[f64]) -> Option<Aggregate> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let variance = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        let mut sorted = values.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("metric values are finite"));
        let mid = sorted.len() / 2;
        let median = if sorted.len() % 2 == 1 {
            sorted[mid]
        } else {
            (sorted[mid - 1] + sorted[mid]) / 2.0
        };
        Some(Aggregate {
            mean,
            median,
            std_dev: variance.sqrt(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodAggregate {
    pub targets: usize,
    pub found: usize,
    pub label_flip_rate: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levenshtein_tokens: Option<Aggregate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levenshtein_chars: Option<Aggregate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding_distance: Option<Aggregate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perplexity: Option<Aggregate>,
    /// Perplexity divided by the report-wide maximum.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perplexity_normalized: Option<Aggregate>,
    pub runtime_ms: Aggregate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    /// Maximum perplexity over every found counterfactual in the run; the
    /// constant used for normalized plausibility scores.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_perplexity: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub config: ConfigEcho,
    pub normalization: Normalization,
    pub methods: BTreeMap<String, MethodAggregate>,
}

impl EvaluationReport {
    /// Aggregates are a pure function of the records plus the config echo.
    pub fn from_records(records: &[MetricRecord], config: ConfigEcho) -> EvaluationReport {
        let max_perplexity = records
            .iter()
            .filter_map(|r| r.perplexity)
            .fold(None, |acc: Option<f64>, p| {
                Some(acc.map_or(p, |m| m.max(p)))
            });

        let mut methods: BTreeMap<String, MethodAggregate> = BTreeMap::new();
        let mut names: Vec<String> = records.iter().map(|r| r.method.clone()).collect();
        names.sort();
        names.dedup();
        for name in names {
            let group: Vec<&MetricRecord> = records.iter().filter(|r| r.method == name).collect();
            let found = group.iter().filter(|r| r.found).count();
            let collect = |extract: fn(&MetricRecord) -> Option<f64>| -> Vec<f64> {
                group.iter().filter_map(|r| extract(r)).collect()
            };
            let perplexities = collect(|r| r.perplexity);
            let normalized: Vec<f64> = match max_perplexity {
                Some(max) if max > 0.0 => perplexities.iter().map(|p| p / max).collect(),
                _ => Vec::new(),
            };
            let runtimes: Vec<f64> = group.iter().map(|r| r.timing.runtime_ms as f64).collect();
            methods.insert(
                name,
                MethodAggregate {
                    targets: group.len(),
                    found,
                    label_flip_rate: found as f64 / group.len() as f64,
                    levenshtein_tokens: Aggregate::from_values(&collect(|r| {
                        r.levenshtein_tokens.map(f64::from)
                    })),
                    levenshtein_chars: Aggregate::from_values(&collect(|r| {
                        r.levenshtein_chars.map(f64::from)
                    })),
                    embedding_distance: Aggregate::from_values(&collect(|r| r.embedding_distance)),
                    perplexity: Aggregate::from_values(&perplexities),
                    perplexity_normalized: Aggregate::from_values(&normalized),
                    runtime_ms: Aggregate::from_values(&runtimes)
                        .expect("every record carries a runtime"),
                },
            );
        }

        EvaluationReport {
            config,
            normalization: Normalization { max_perplexity },
            methods,
        }
    }

    /// Flat table mirroring the aggregate report, one row per method.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "method,targets,found,label_flip_rate,levenshtein_tokens_mean,levenshtein_tokens_median,levenshtein_chars_mean,embedding_distance_mean,perplexity_mean,perplexity_normalized_mean,runtime_ms_mean,runtime_ms_std\n",
        );
        let fmt = |agg: &Option<Aggregate>, pick: fn(&Aggregate) -> f64| -> String {
            agg.as_ref().map_or(String::new(), |a| pick(a).to_string())
        };
        for (name, agg) in &self.methods {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                name,
                agg.targets,
                agg.found,
                agg.label_flip_rate,
                fmt(&agg.levenshtein_tokens, |a| a.mean),
                fmt(&agg.levenshtein_tokens, |a| a.median),
                fmt(&agg.levenshtein_chars, |a| a.mean),
                fmt(&agg.embedding_distance, |a| a.mean),
                fmt(&agg.perplexity, |a| a.mean),
                fmt(&agg.perplexity_normalized, |a| a.mean),
                agg.runtime_ms.mean,
                agg.runtime_ms.std_dev,
            ));
        }
        out
    }
}
