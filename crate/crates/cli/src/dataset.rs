//! CSV dataset loading: header row with `text` and `label` columns, UTF-8,
//! quoted fields per RFC 4180.

use std::path::Path;

use anyhow::{anyhow, Context, Result};
use cftext_core::blackbox::LabeledCorpus;
use cftext_core::text::PosLexicon;

pub fn load_dataset(path: &Path, lexicon: Option<&dyn PosLexicon>) -> Result<LabeledCorpus> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .with_context(|| format!("cannot open dataset {}", path.display()))?;
    let headers = reader
        .headers()
        .with_context(|| format!("cannot read header row of {}", path.display()))?;
    let column = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h.trim().eq_ignore_ascii_case(name))
            .ok_or_else(|| anyhow!("{}: missing column '{name}'", path.display()))
    };
    let text_col = column("text")?;
    let label_col = column("label")?;

    let mut rows: Vec<(String, String)> = Vec::new();
    for (row_no, record) in reader.records().enumerate() {
        let record = record.map_err(|e| anyhow!("{}: row {}: {e}", path.display(), row_no + 1))?;
        let text = record
            .get(text_col)
            .ok_or_else(|| anyhow!("{}: row {}: missing text field", path.display(), row_no + 1))?;
        let label = record.get(label_col).ok_or_else(|| {
            anyhow!(
                "{}: row {}: missing label field",
                path.display(),
                row_no + 1
            )
        })?;
        rows.push((text.to_string(), label.to_string()));
    }
    let corpus =
        LabeledCorpus::from_rows(&rows, lexicon).map_err(|e| anyhow!("{}: {e}", path.display()))?;

    let counts: Vec<String> = corpus
        .classes()
        .iter()
        .enumerate()
        .map(|(label, name)| format!("{name}={}", corpus.class_count(label)))
        .collect();
    eprintln!(
        "loaded {} rows from {} ({})",
        corpus.len(),
        path.display(),
        counts.join(", ")
    );
    Ok(corpus)
}
