//! Compact JSON-lines fixture format: one synset per line with id, POS
//! letter, lemmas, hypernym ids, and antonym ids. Hyponyms are inferred as
//! inverse hypernyms on load.

use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::text::PosTag;

use super::{RawSynset, SynsetId, WordNetError, WordNetStore};

#[derive(Debug, Serialize, Deserialize)]
struct FixtureSynset {
    id: String,
    pos: String,
    lemmas: Vec<String>,
    hypernyms: Vec<String>,
    antonyms: Vec<String>,
}

pub fn load_fixture(path: &Path) -> Result<WordNetStore, WordNetError> {
    if !path.is_file() {
        return Err(WordNetError::MissingFile(path.display().to_string()));
    }
    let file = File::open(path)?;
    load_fixture_reader(BufReader::new(file), &path.display().to_string())
}

pub fn load_fixture_reader<R: Read>(
    reader: BufReader<R>,
    source: &str,
) -> Result<WordNetStore, WordNetError> {
    let mut raws = Vec::new();
    for (line_no, line) in reader.lines().enumerate() {
        let line_no = line_no + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: FixtureSynset =
            serde_json::from_str(&line).map_err(|e| WordNetError::Parse {
                file: source.to_string(),
                line: line_no,
                reason: e.to_string(),
            })?;
        let pos = parsed
            .pos
            .chars()
            .next()
            .and_then(PosTag::from_char)
            .ok_or_else(|| WordNetError::Parse {
                file: source.to_string(),
                line: line_no,
                reason: format!("bad pos '{}'", parsed.pos),
            })?;
        raws.push(RawSynset {
            id: SynsetId(parsed.id),
            pos,
            lemmas: parsed.lemmas.iter().map(|l| l.to_lowercase()).collect(),
            hypernyms: parsed.hypernyms.into_iter().map(SynsetId).collect(),
            hyponyms: Vec::new(),
            antonyms: parsed.antonyms.into_iter().map(SynsetId).collect(),
        });
    }
    WordNetStore::finalize(raws, Vec::new(), source)
}

/// Serializes a store to the fixture format, one synset per line in id
/// order. Loading the result answers queries identically to the original.
pub fn write_fixture<W: Write>(store: &WordNetStore, mut writer: W) -> Result<(), WordNetError> {
    for synset in store.synsets() {
        let row = FixtureSynset {
            id: synset.id.to_string(),
            pos: synset
                .pos
                .as_char()
                .expect("stored synsets always have a lexical pos")
                .to_string(),
            lemmas: synset.lemmas.clone(),
            hypernyms: synset.hypernyms.iter().map(SynsetId::to_string).collect(),
            antonyms: synset.antonyms.iter().map(SynsetId::to_string).collect(),
        };
        let line = serde_json::to_string(&row).expect("fixture rows serialize");
        writeln!(writer, "{line}")?;
    }
    Ok(())
}
