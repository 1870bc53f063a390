//! Counterfactual explanations for black-box text classifiers.
//!
//! The engine perturbs a target document word by word until the classifier
//! under inspection changes its answer, then reports the closest such
//! perturbation as the explanation. Candidate replacement words come either
//! from a WordNet-style lexical graph or from a word-embedding neighborhood,
//! and a greedy masking baseline is included for comparison.
//!
//! Modules:
//! - [`text`]: tokenization, POS tags, and the binary perturbation algebra
//! - [`wordnet`]: lexical graph loading, neighborhoods, Wu-Palmer similarity
//! - [`embed`]: word-vector store with threshold neighbor queries
//! - [`blackbox`]: classifier trait plus reference naive Bayes / logistic models
//! - [`explain`]: the counterfactual search methods themselves
//! - [`eval`]: minimality, plausibility, flip-rate, and runtime benchmarking
//! - [`synthetic`]: deterministic fixture corpora for tests and demos
//!
//! ```
//! use cftext_core::blackbox::{
//!     fit_vectorizer, split, train_naive_bayes, LabeledCorpus, VectorizerMode,
//! };
//! use cftext_core::explain::{growing_net, ExplainConfig};
//! use cftext_core::wordnet::load_wordnet;
//!
//! # fn main() -> Result<(), Box<dyn std::error::Error>> {
//! let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
//!     .join("../../testdata/wordnet_mini");
//! let wordnet = load_wordnet(&dir)?;
//! let rows = cftext_core::synthetic::polarity_rows(800, 7);
//! let corpus = LabeledCorpus::from_rows(&rows, Some(&wordnet))?;
//! let (train, test) = split(&corpus, 0.7, 42)?;
//! let vectorizer = fit_vectorizer(&train, VectorizerMode::Count)?;
//! let model = train_naive_bayes(&train, &vectorizer)?;
//!
//! let target = &test.documents()[0];
//! let outcome = growing_net(target, &model, &wordnet, &ExplainConfig::default());
//! let counterfactual = outcome.counterfactual.expect("an antonym swap flips the label");
//! assert_eq!(counterfactual.edit_count(), 1);
//! # Ok(()) }
//! ```

pub mod blackbox;
pub mod embed;
pub mod eval;
pub mod explain;
mod rng;
pub mod synthetic;
pub mod text;
pub mod wordnet;

pub use text::{Document, PosTag};
