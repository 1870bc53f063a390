//! `cftext`: train reference classifiers, explain single predictions with
//! counterfactual search, benchmark the methods, and inspect resources.
//!
//! Exit codes: 0 on success (including "no counterfactual found"), 1 on
//! runtime or resource failures, 2 on usage errors.

mod commands;
mod config;
mod dataset;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{ConfigFile, UsageError};

#[derive(Parser)]
#[command(
    name = "cftext",
    version,
    about = "Counterfactual explanations for text classifiers"
)]
struct Cli {
    /// Optional key=value config file; command-line flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<std::path::PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train a reference classifier and write it as a model JSON file.
    Train(TrainArgs),
    /// Produce a counterfactual explanation for a single text.
    Explain(ExplainArgs),
    /// Benchmark explanation methods over sampled test targets.
    Evaluate(EvaluateArgs),
    /// Print statistics about models, datasets, and resources.
    Inspect(InspectArgs),
}

#[derive(Args)]
struct ResourceArgs {
    /// Directory with WordNet-format index.* and data.* files, or a .jsonl
    /// fixture file. Relative paths resolve against CFTEXT_RESOURCE_ROOT.
    #[arg(long, value_name = "PATH")]
    wordnet: Option<std::path::PathBuf>,

    /// Word-vector text file. Relative paths resolve against
    /// CFTEXT_RESOURCE_ROOT.
    #[arg(long, value_name = "PATH")]
    vectors: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    /// Copies of the target generated per search round.
    #[arg(long, value_name = "N")]
    copies: Option<usize>,

    /// WordNet neighborhood radius.
    #[arg(long, value_name = "T")]
    radius: Option<u32>,

    /// Initial embedding similarity threshold.
    #[arg(long, value_name = "F")]
    theta: Option<f64>,

    /// Threshold relaxation step.
    #[arg(long, value_name = "F")]
    tau: Option<f64>,

    /// Threshold floor.
    #[arg(long, value_name = "F")]
    theta_min: Option<f64>,

    /// Seed for all randomness.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,

    /// Wall-clock budget per explanation, in milliseconds.
    #[arg(long, value_name = "MS")]
    max_runtime_ms: Option<u64>,
}

#[derive(Args)]
struct TrainArgs {
    /// CSV dataset with a `text,label` header.
    #[arg(long, value_name = "FILE")]
    dataset: Option<std::path::PathBuf>,

    /// Where to write the trained model JSON.
    #[arg(long, value_name = "FILE")]
    model_out: Option<std::path::PathBuf>,

    /// Classifier to train: naive-bayes or logreg.
    #[arg(long, value_name = "NAME")]
    classifier: Option<String>,

    /// Feature mode: count or tfidf.
    #[arg(long, value_name = "MODE")]
    vectorizer: Option<String>,

    /// Fraction of documents used for training.
    #[arg(long, value_name = "F")]
    train_fraction: Option<f64>,

    #[arg(long, value_name = "N")]
    seed: Option<u64>,

    /// Gradient-descent epochs (logreg only).
    #[arg(long, value_name = "N")]
    epochs: Option<usize>,

    /// Gradient-descent learning rate (logreg only).
    #[arg(long, value_name = "F")]
    learning_rate: Option<f64>,

    /// L2 penalty (logreg only).
    #[arg(long, value_name = "F")]
    l2: Option<f64>,
}

#[derive(Args)]
struct ExplainArgs {
    /// Trained model JSON.
    #[arg(long, value_name = "FILE")]
    model: Option<std::path::PathBuf>,

    /// Text to explain.
    #[arg(long, value_name = "TEXT")]
    text: Option<String>,

    /// growing-net, growing-language, sedc, or random-baseline.
    #[arg(long, value_name = "NAME")]
    method: Option<String>,

    /// Dataset used to fit the perplexity language model (optional).
    #[arg(long, value_name = "FILE")]
    dataset: Option<std::path::PathBuf>,

    #[command(flatten)]
    resources: ResourceArgs,

    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Trained model JSON.
    #[arg(long, value_name = "FILE")]
    model: Option<std::path::PathBuf>,

    /// CSV dataset; the test side of the split provides the targets.
    #[arg(long, value_name = "FILE")]
    dataset: Option<std::path::PathBuf>,

    /// Comma-separated method names; defaults to all four.
    #[arg(long, value_name = "LIST")]
    methods: Option<String>,

    /// Upper bound on sampled targets.
    #[arg(long, value_name = "N")]
    targets: Option<usize>,

    /// Output directory for records.jsonl, report.json, and report.csv.
    #[arg(long, value_name = "DIR")]
    out_dir: Option<std::path::PathBuf>,

    /// Fraction of documents used for training in the split.
    #[arg(long, value_name = "F")]
    train_fraction: Option<f64>,

    /// Order of the perplexity n-gram model (2 or 3).
    #[arg(long, value_name = "N")]
    ngram_order: Option<usize>,

    #[command(flatten)]
    resources: ResourceArgs,

    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Args)]
struct InspectArgs {
    #[arg(long, value_name = "FILE")]
    model: Option<std::path::PathBuf>,

    #[arg(long, value_name = "FILE")]
    dataset: Option<std::path::PathBuf>,

    #[command(flatten)]
    resources: ResourceArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let file = match ConfigFile::load(cli.config.as_deref()) {
        Ok(file) => file,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::Train(args) => commands::train::run(args, &file),
        Command::Explain(args) => commands::explain::run(args, &file),
        Command::Evaluate(args) => commands::evaluate::run(args, &file),
        Command::Inspect(args) => commands::inspect::run(args, &file),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
