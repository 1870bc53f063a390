//! Word-vector store: threshold-based neighbor retrieval and mean-pooled
//! sentence vectors. Vectors are L2-normalized at load, so cosine similarity
//! is a plain dot product.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use thiserror::Error;

use crate::text::{Document, PosLexicon, PosTag};

#[derive(Debug, Error)]
pub enum EmbedError {
    #[error("missing vector file: {0}")]
    MissingFile(String),
    #[error("{file}:{line}: {reason}")]
    Parse {
        file: String,
        line: usize,
        reason: String,
    },
    #[error("vector file contains no vectors: {0}")]
    EmptyFile(String),
    #[error("word '{0}' has no vector")]
    UnknownWord(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Unit word vectors in load order.
#[derive(Debug, Clone)]
pub struct VectorStore {
    dim: usize,
    words: Vec<String>,
    vectors: Vec<Vec<f64>>,
    lookup: std::collections::HashMap<String, usize>,
    warnings: Vec<String>,
}

impl VectorStore {
    /// Reads the common text format: an optional `count dim` header line,
    /// then one word followed by `dim` floats per line. Duplicate words keep
    /// the first vector and record a warning.
    pub fn load(path: &Path) -> Result<VectorStore, EmbedError> {
        if !path.is_file() {
            return Err(EmbedError::MissingFile(path.display().to_string()));
        }
        let file = File::open(path)?;
        VectorStore::load_reader(BufReader::new(file), &path.display().to_string())
    }

    pub fn load_reader<R: Read>(
        reader: BufReader<R>,
        source: &str,
    ) -> Result<VectorStore, EmbedError> {
        let mut dim = 0usize;
        let mut words = Vec::new();
        let mut vectors: Vec<Vec<f64>> = Vec::new();
        let mut lookup = std::collections::HashMap::new();
        let mut warnings = Vec::new();
        let mut first_content_line = true;

        for (line_no, line) in reader.lines().enumerate() {
            let line_no = line_no + 1;
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if first_content_line {
                first_content_line = false;
                if fields.len() == 2 && fields.iter().all(|f| f.parse::<usize>().is_ok()) {
                    continue; // header: count and dimension
                }
            }
            let word = fields[0].to_lowercase();
            let values: Result<Vec<f64>, _> = fields[1..].iter().map(|f| f.parse()).collect();
            let mut values = values.map_err(|_| EmbedError::Parse {
                file: source.to_string(),
                line: line_no,
                reason: "bad float value".to_string(),
            })?;
            if values.is_empty() {
                return Err(EmbedError::Parse {
                    file: source.to_string(),
                    line: line_no,
                    reason: "no vector components".to_string(),
                });
            }
            if dim == 0 {
                dim = values.len();
            } else if values.len() != dim {
                return Err(EmbedError::Parse {
                    file: source.to_string(),
                    line: line_no,
                    reason: format!("expected {dim} components, found {}", values.len()),
                });
            }
            let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm == 0.0 || !norm.is_finite() {
                return Err(EmbedError::Parse {
                    file: source.to_string(),
                    line: line_no,
                    reason: format!("cannot normalize vector for '{word}'"),
                });
            }
            for v in &mut values {
                *v /= norm;
            }
            if lookup.contains_key(&word) {
                warnings.push(format!(
                    "duplicate vector for '{word}' ignored (line {line_no})"
                ));
                continue;
            }
            lookup.insert(word.clone(), vectors.len());
            words.push(word);
            vectors.push(values);
        }

        if vectors.is_empty() {
            return Err(EmbedError::EmptyFile(source.to_string()));
        }
        Ok(VectorStore {
            dim,
            words,
            vectors,
            lookup,
            warnings,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn contains(&self, word: &str) -> bool {
        self.lookup.contains_key(&word.to_lowercase())
    }

    pub fn vector(&self, word: &str) -> Option<&[f64]> {
        self.lookup
            .get(&word.to_lowercase())
            .map(|&i| self.vectors[i].as_slice())
    }

    /// Cosine similarity of two stored words, in `[-1, 1]`.
    pub fn cosine_similarity(&self, a: &str, b: &str) -> Result<f64, EmbedError> {
        let va = self
            .vector(a)
            .ok_or_else(|| EmbedError::UnknownWord(a.to_string()))?;
        let vb = self
            .vector(b)
            .ok_or_else(|| EmbedError::UnknownWord(b.to_string()))?;
        Ok(dot(va, vb).clamp(-1.0, 1.0))
    }

    /// Words whose cosine similarity to `word` is at least `theta`, filtered
    /// so replacements keep the query's POS: a candidate passes when the POS
    /// is [`PosTag::Other`], when the lexicon tags it the same, or when the
    /// lexicon does not know it at all.
    pub fn simwords(
        &self,
        word: &str,
        pos: PosTag,
        theta: f64,
        tagger: &dyn PosLexicon,
    ) -> Result<BTreeSet<String>, EmbedError> {
        let query = self
            .vector(word)
            .ok_or_else(|| EmbedError::UnknownWord(word.to_string()))?;
        let word = word.to_lowercase();
        let mut out = BTreeSet::new();
        for (candidate, vector) in self.words.iter().zip(self.vectors.iter()) {
            if candidate == &word {
                continue;
            }
            if dot(query, vector) < theta {
                continue;
            }
            let keep = match pos {
                PosTag::Other => true,
                wanted => match tagger.primary_pos(candidate) {
                    Some(tag) => tag == wanted,
                    None => true,
                },
            };
            if keep {
                out.insert(candidate.clone());
            }
        }
        Ok(out)
    }

    /// Mean of the vectors of in-vocabulary tokens, re-normalized. When no
    /// token has a vector the result is the zero vector with `oov` set.
    pub fn sentence_vector(&self, doc: &Document) -> SentenceVector {
        let mut sum = vec![0.0; self.dim];
        let mut hits = 0usize;
        for token in doc.tokens() {
            if let Some(v) = self.vector(token) {
                for (s, x) in sum.iter_mut().zip(v) {
                    *s += x;
                }
                hits += 1;
            }
        }
        if hits == 0 {
            return SentenceVector {
                values: sum,
                oov: true,
            };
        }
        for s in &mut sum {
            *s /= hits as f64;
        }
        let norm = sum.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            for s in &mut sum {
                *s /= norm;
            }
        }
        SentenceVector {
            values: sum,
            oov: false,
        }
    }
}

/// Pooled document vector; `oov` marks the all-out-of-vocabulary fallback.
#[derive(Debug, Clone, PartialEq)]
pub struct SentenceVector {
    pub values: Vec<f64>,
    pub oov: bool,
}

impl SentenceVector {
    /// Cosine between two sentence vectors; `None` when either side is the
    /// out-of-vocabulary zero vector.
    pub fn cosine(&self, other: &SentenceVector) -> Option<f64> {
        if self.oov || other.oov {
            return None;
        }
        Some(dot(&self.values, &other.values).clamp(-1.0, 1.0))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
