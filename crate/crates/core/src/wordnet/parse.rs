//! Parser for the Princeton WordNet 3.x database layout: plain-text
//! `index.{noun,verb,adj,adv}` and `data.{noun,verb,adj,adv}` files with
//! space-delimited fields and 8-digit synset offsets.

use std::fs;
use std::path::Path;

use crate::text::PosTag;

use super::{RawSynset, SynsetId, WordNetError, WordNetStore};

const SECTIONS: [(&str, PosTag); 4] = [
    ("noun", PosTag::Noun),
    ("verb", PosTag::Verb),
    ("adj", PosTag::Adj),
    ("adv", PosTag::Adv),
];

/// Loads a WordNet database directory. Only the pointer symbols `!`
/// (antonym), `@` (hypernym), and `~` (hyponym) are kept; everything else,
/// including glosses and verb frames, is skipped.
pub fn load_wordnet(dir: &Path) -> Result<WordNetStore, WordNetError> {
    let mut raws = Vec::new();
    let mut index_entries = Vec::new();
    for (stem, pos) in SECTIONS {
        let data_path = dir.join(format!("data.{stem}"));
        let index_path = dir.join(format!("index.{stem}"));
        for path in [&data_path, &index_path] {
            if !path.is_file() {
                return Err(WordNetError::MissingFile(path.display().to_string()));
            }
        }
        let data_text = fs::read_to_string(&data_path)?;
        parse_data_file(&data_text, pos, &data_path.display().to_string(), &mut raws)?;
        let index_text = fs::read_to_string(&index_path)?;
        parse_index_file(
            &index_text,
            pos,
            &index_path.display().to_string(),
            &mut index_entries,
        )?;
    }
    WordNetStore::finalize(raws, index_entries, &dir.display().to_string())
}

fn parse_err(file: &str, line: usize, reason: impl Into<String>) -> WordNetError {
    WordNetError::Parse {
        file: file.to_string(),
        line,
        reason: reason.into(),
    }
}

/// License/header lines in WordNet files start with two spaces.
fn is_header(line: &str) -> bool {
    line.starts_with("  ") || line.trim().is_empty()
}

fn parse_data_file(
    text: &str,
    file_pos: PosTag,
    file: &str,
    out: &mut Vec<RawSynset>,
) -> Result<(), WordNetError> {
    for (line_no, line) in text.lines().enumerate() {
        let line_no = line_no + 1;
        if is_header(line) {
            continue;
        }
        let body = line.split('|').next().unwrap_or(line);
        let fields: Vec<&str> = body.split_whitespace().collect();
        let mut cursor = Cursor::new(&fields, file, line_no);

        let offset = cursor.offset()?;
        cursor.next("lex_filenum")?;
        let ss_type = cursor.next("ss_type")?;
        let ss_pos = PosTag::from_char(ss_type.chars().next().unwrap_or('?'))
            .ok_or_else(|| parse_err(file, line_no, format!("bad ss_type '{ss_type}'")))?;
        if ss_pos != file_pos {
            return Err(parse_err(
                file,
                line_no,
                format!("ss_type '{ss_type}' does not belong in this file"),
            ));
        }

        let w_cnt = cursor.hex_u8("w_cnt")?;
        let mut lemmas = Vec::with_capacity(w_cnt as usize);
        for _ in 0..w_cnt {
            let word = cursor.next("word")?;
            cursor.hex_u8("lex_id")?;
            lemmas.push(clean_lemma(word));
        }

        let p_cnt: usize = cursor
            .next("p_cnt")?
            .parse()
            .map_err(|_| parse_err(file, line_no, "bad pointer count"))?;
        let mut hypernyms = Vec::new();
        let mut hyponyms = Vec::new();
        let mut antonyms = Vec::new();
        for _ in 0..p_cnt {
            let symbol = cursor.next("pointer_symbol")?;
            let target_offset = cursor.offset()?;
            let target_pos_str = cursor.next("pointer pos")?;
            let target_pos = PosTag::from_char(target_pos_str.chars().next().unwrap_or('?'))
                .ok_or_else(|| {
                    parse_err(file, line_no, format!("bad pointer pos '{target_pos_str}'"))
                })?;
            cursor.next("source/target")?;
            let target = SynsetId::new(target_offset, target_pos);
            match symbol {
                "!" => antonyms.push(target),
                "@" => hypernyms.push(target),
                "~" => hyponyms.push(target),
                _ => {}
            }
        }

        if file_pos == PosTag::Verb {
            let f_cnt: usize = cursor
                .next("f_cnt")?
                .parse()
                .map_err(|_| parse_err(file, line_no, "bad frame count"))?;
            for _ in 0..f_cnt {
                cursor.next("frame marker")?;
                cursor.next("frame number")?;
                cursor.next("frame word")?;
            }
        }

        out.push(RawSynset {
            id: SynsetId::new(offset, file_pos),
            pos: file_pos,
            lemmas,
            hypernyms,
            hyponyms,
            antonyms,
        });
    }
    Ok(())
}

fn parse_index_file(
    text: &str,
    pos: PosTag,
    file: &str,
    out: &mut Vec<((String, PosTag), Vec<SynsetId>)>,
) -> Result<(), WordNetError> {
    for (line_no, line) in text.lines().enumerate() {
        let line_no = line_no + 1;
        if is_header(line) {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let mut cursor = Cursor::new(&fields, file, line_no);

        let lemma = cursor.next("lemma")?.to_lowercase();
        cursor.next("pos")?;
        let synset_cnt: usize = cursor
            .next("synset_cnt")?
            .parse()
            .map_err(|_| parse_err(file, line_no, "bad synset count"))?;
        let p_cnt: usize = cursor
            .next("p_cnt")?
            .parse()
            .map_err(|_| parse_err(file, line_no, "bad pointer count"))?;
        for _ in 0..p_cnt {
            cursor.next("pointer symbol")?;
        }
        cursor.next("sense_cnt")?;
        cursor.next("tagsense_cnt")?;
        let mut ids = Vec::with_capacity(synset_cnt);
        for _ in 0..synset_cnt {
            ids.push(SynsetId::new(cursor.offset()?, pos));
        }
        out.push(((lemma, pos), ids));
    }
    Ok(())
}

/// Strips the adjective syntactic marker, e.g. `superb(ip)` -> `superb`,
/// and lowercases for matching.
fn clean_lemma(word: &str) -> String {
    let base = match word.find('(') {
        Some(at) if word.ends_with(')') => &word[..at],
        _ => word,
    };
    base.to_lowercase()
}

struct Cursor<'a> {
    fields: &'a [&'a str],
    at: usize,
    file: &'a str,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn new(fields: &'a [&'a str], file: &'a str, line: usize) -> Cursor<'a> {
        Cursor {
            fields,
            at: 0,
            file,
            line,
        }
    }

    fn next(&mut self, what: &str) -> Result<&'a str, WordNetError> {
        let field = self.fields.get(self.at).copied().ok_or_else(|| {
            parse_err(
                self.file,
                self.line,
                format!("truncated line: missing {what}"),
            )
        })?;
        self.at += 1;
        Ok(field)
    }

    fn offset(&mut self) -> Result<u64, WordNetError> {
        let field = self.next("synset offset")?;
        if field.len() != 8 || !field.bytes().all(|b| b.is_ascii_digit()) {
            return Err(parse_err(
                self.file,
                self.line,
                format!("bad synset offset '{field}'"),
            ));
        }
        Ok(field.parse().expect("eight ascii digits"))
    }

    fn hex_u8(&mut self, what: &str) -> Result<u8, WordNetError> {
        let field = self.next(what)?;
        u8::from_str_radix(field, 16).map_err(|_| {
            parse_err(
                self.file,
                self.line,
                format!("bad hex field {what}: '{field}'"),
            )
        })
    }
}
