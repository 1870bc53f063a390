//! Tokenization, part-of-speech tags, and the binary text-matrix algebra.
//!
//! A [`Document`] keeps three parallel views of a text: the raw string, the
//! lowercased tokens used for matching, and the original surface forms used
//! to rebuild readable output after substitutions.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TextError {
    #[error("token '{0}' is not in the vocabulary")]
    UnknownToken(String),
    #[error("position {position} out of range for document of length {len}")]
    IndexOutOfRange { position: usize, len: usize },
    #[error("perturbation leaves two words set at position {0}")]
    PositionConflict(usize),
    #[error("perturbation entry ({row}, {col}) outside matrix of {rows} words x {cols} positions")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("perturbation values must be -1, 0, or +1 (got {0})")]
    InvalidPerturbationValue(i8),
}

/// Coarse part-of-speech categories, mirroring the four open WordNet classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PosTag {
    Noun,
    Verb,
    Adj,
    Adv,
    Other,
}

impl PosTag {
    pub fn as_char(self) -> Option<char> {
        match self {
            PosTag::Noun => Some('n'),
            PosTag::Verb => Some('v'),
            PosTag::Adj => Some('a'),
            PosTag::Adv => Some('r'),
            PosTag::Other => None,
        }
    }

    pub fn from_char(c: char) -> Option<PosTag> {
        match c {
            'n' => Some(PosTag::Noun),
            'v' => Some(PosTag::Verb),
            // adjective satellites share the adjective class
            'a' | 's' => Some(PosTag::Adj),
            'r' => Some(PosTag::Adv),
            _ => None,
        }
    }

    /// The four lexical classes, in tagging priority order.
    pub const TAGGABLE: [PosTag; 4] = [PosTag::Adj, PosTag::Adv, PosTag::Verb, PosTag::Noun];
}

impl std::fmt::Display for PosTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            PosTag::Noun => "NOUN",
            PosTag::Verb => "VERB",
            PosTag::Adj => "ADJ",
            PosTag::Adv => "ADV",
            PosTag::Other => "OTHER",
        };
        f.write_str(name)
    }
}

/// Lookup interface used by the lexicon tagger and the embedding POS filter.
pub trait PosLexicon {
    fn has_pos(&self, word: &str, pos: PosTag) -> bool;

    /// Tag for a single word: first matching class in the priority order
    /// ADJ > ADV > VERB > NOUN, `None` when the word is in no class.
    fn primary_pos(&self, word: &str) -> Option<PosTag> {
        PosTag::TAGGABLE
            .into_iter()
            .find(|&pos| self.has_pos(word, pos))
    }
}

/// A tokenized text with POS tags; the unit being explained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    raw: String,
    tokens: Vec<String>,
    surface: Vec<String>,
    tags: Vec<PosTag>,
}

impl Document {
    /// Splits `raw` into tokens: maximal alphanumeric runs, clitics such as
    /// `'s` glued to the preceding word, and single-character punctuation.
    /// Tags start out as [`PosTag::Other`]; see [`Document::pos_tag`].
    pub fn tokenize(raw: &str) -> Document {
        let surface = tokenize_surface(raw);
        let tokens: Vec<String> = surface.iter().map(|t| t.to_lowercase()).collect();
        let tags = vec![PosTag::Other; tokens.len()];
        Document {
            raw: raw.to_string(),
            tokens,
            surface,
            tags,
        }
    }

    /// Builds a document directly from word tokens (used for fixtures and
    /// token-level corpora). The raw text is the detokenized join.
    pub fn from_tokens<I, S>(tokens: I) -> Document
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let surface: Vec<String> = tokens.into_iter().map(Into::into).collect();
        let tokens: Vec<String> = surface.iter().map(|t| t.to_lowercase()).collect();
        let raw = detokenize(&surface);
        let tags = vec![PosTag::Other; tokens.len()];
        Document {
            raw,
            tokens,
            surface,
            tags,
        }
    }

    /// Assigns a tag to every token by lexicon membership, trying
    /// ADJ > ADV > VERB > NOUN and falling back to OTHER.
    pub fn pos_tag(&self, lexicon: &dyn PosLexicon) -> Document {
        let tags = self
            .tokens
            .iter()
            .map(|tok| lexicon.primary_pos(tok).unwrap_or(PosTag::Other))
            .collect();
        Document {
            tags,
            ..self.clone()
        }
    }

    pub fn raw(&self) -> &str {
        &self.raw
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn surface(&self) -> &[String] {
        &self.surface
    }

    pub fn tags(&self) -> &[PosTag] {
        &self.tags
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Returns a copy with `tokens[position]` replaced by `word` and the raw
    /// text rebuilt from surface forms. The receiver is left untouched.
    pub fn substitute(&self, position: usize, word: &str) -> Result<Document, TextError> {
        if position >= self.tokens.len() {
            return Err(TextError::IndexOutOfRange {
                position,
                len: self.tokens.len(),
            });
        }
        let mut tokens = self.tokens.clone();
        let mut surface = self.surface.clone();
        tokens[position] = word.to_lowercase();
        surface[position] = word.to_string();
        let raw = detokenize(&surface);
        Ok(Document {
            raw,
            tokens,
            surface,
            tags: self.tags.clone(),
        })
    }

    /// Number of positions at which the two token lists differ.
    /// Both documents must have the same length.
    pub fn l0_distance(&self, other: &Document) -> usize {
        debug_assert_eq!(self.len(), other.len());
        self.tokens
            .iter()
            .zip(other.tokens.iter())
            .filter(|(a, b)| a != b)
            .count()
    }
}

fn tokenize_surface(raw: &str) -> Vec<String> {
    let chars: Vec<char> = raw.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_alphanumeric() {
            let start = i;
            while i < chars.len() && chars[i].is_alphanumeric() {
                i += 1;
            }
            out.push(chars[start..i].iter().collect());
        } else if c == '\''
            && i > 0
            && chars[i - 1].is_alphanumeric()
            && i + 1 < chars.len()
            && chars[i + 1].is_alphanumeric()
        {
            // word-internal apostrophe starts a clitic token: "Polanski's"
            // becomes ["Polanski", "'s"]
            let start = i;
            i += 1;
            while i < chars.len() && chars[i].is_alphanumeric() {
                i += 1;
            }
            out.push(chars[start..i].iter().collect());
        } else {
            out.push(c.to_string());
            i += 1;
        }
    }
    out
}

/// Joins surface tokens with spaces; clitic tokens reattach to the word
/// before them so the result re-tokenizes to the same token list.
pub fn detokenize(surface: &[String]) -> String {
    let mut out = String::new();
    for tok in surface {
        let is_clitic = tok.len() > 1
            && tok.starts_with('\'')
            && tok.chars().skip(1).all(char::is_alphanumeric);
        let attach = is_clitic && out.chars().last().is_some_and(char::is_alphanumeric);
        if !out.is_empty() && !attach {
            out.push(' ');
        }
        out.push_str(tok);
    }
    out
}

/// Sparse 0/1 occurrence matrix: entry `(i, j)` set means vocabulary word `i`
/// occupies position `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryTextMatrix {
    vocab: Vec<String>,
    positions: usize,
    entries: BTreeSet<(usize, usize)>,
}

impl BinaryTextMatrix {
    /// Encodes a document against `vocab`; every token must be present.
    pub fn from_document(doc: &Document, vocab: &[String]) -> Result<BinaryTextMatrix, TextError> {
        let lookup: BTreeMap<&str, usize> = vocab
            .iter()
            .enumerate()
            .map(|(i, w)| (w.as_str(), i))
            .collect();
        let mut entries = BTreeSet::new();
        for (j, tok) in doc.tokens().iter().enumerate() {
            let &i = lookup
                .get(tok.as_str())
                .ok_or_else(|| TextError::UnknownToken(tok.clone()))?;
            entries.insert((i, j));
        }
        Ok(BinaryTextMatrix {
            vocab: vocab.to_vec(),
            positions: doc.len(),
            entries,
        })
    }

    pub fn vocab(&self) -> &[String] {
        &self.vocab
    }

    pub fn positions(&self) -> usize {
        self.positions
    }

    pub fn entries(&self) -> &BTreeSet<(usize, usize)> {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        u8::from(self.entries.contains(&(row, col)))
    }

    /// Entry-wise clipped sum `z = max(0, min(1, x + eps))`. Fails if any
    /// position ends up with two words set.
    pub fn apply_perturbation(
        &self,
        eps: &PerturbationMask,
    ) -> Result<BinaryTextMatrix, TextError> {
        let mut entries = self.entries.clone();
        for (&(row, col), &value) in eps.entries() {
            if row >= self.vocab.len() || col >= self.positions {
                return Err(TextError::EntryOutOfRange {
                    row,
                    col,
                    rows: self.vocab.len(),
                    cols: self.positions,
                });
            }
            let current = i8::from(entries.contains(&(row, col)));
            let next = (current + value).clamp(0, 1);
            if next == 1 {
                entries.insert((row, col));
            } else {
                entries.remove(&(row, col));
            }
        }
        let mut seen = BTreeSet::new();
        for &(_, col) in &entries {
            if !seen.insert(col) {
                return Err(TextError::PositionConflict(col));
            }
        }
        Ok(BinaryTextMatrix {
            vocab: self.vocab.clone(),
            positions: self.positions,
            entries,
        })
    }
}

/// Sparse perturbation with entries restricted to `{-1, 0, +1}`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PerturbationMask {
    entries: BTreeMap<(usize, usize), i8>,
}

impl PerturbationMask {
    pub fn new() -> PerturbationMask {
        PerturbationMask::default()
    }

    /// Records `value` at `(row, col)`; zero clears the entry.
    pub fn set(&mut self, row: usize, col: usize, value: i8) -> Result<(), TextError> {
        match value {
            0 => {
                self.entries.remove(&(row, col));
            }
            -1 | 1 => {
                self.entries.insert((row, col), value);
            }
            other => return Err(TextError::InvalidPerturbationValue(other)),
        }
        Ok(())
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), i8> {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    struct MapLexicon(HashSet<(String, PosTag)>);

    impl MapLexicon {
        fn new(entries: &[(&str, PosTag)]) -> MapLexicon {
            MapLexicon(entries.iter().map(|(w, p)| (w.to_string(), *p)).collect())
        }
    }

    impl PosLexicon for MapLexicon {
        fn has_pos(&self, word: &str, pos: PosTag) -> bool {
            self.0.contains(&(word.to_string(), pos))
        }
    }

    #[test]
    fn tokenize_plain_sentence() {
        let doc = Document::tokenize("This is a good article");
        assert_eq!(doc.tokens(), ["this", "is", "a", "good", "article"]);
        assert_eq!(doc.surface(), ["This", "is", "a", "good", "article"]);
        assert_eq!(doc.raw(), "This is a good article");
    }

    #[test]
    fn tokenize_empty() {
        let doc = Document::tokenize("");
        assert!(doc.is_empty());
        assert_eq!(doc.len(), 0);
    }

    #[test]
    fn tokenize_clitic_and_punctuation() {
        let doc = Document::tokenize("Polanski's best films.");
        assert_eq!(doc.tokens(), ["polanski", "'s", "best", "films", "."]);
    }

    #[test]
    fn tokenize_numbers_and_symbols() {
        let doc = Document::tokenize("Txt ansr to 82277. aPS1.50 SP:Tyrone");
        assert_eq!(
            doc.tokens(),
            ["txt", "ansr", "to", "82277", ".", "aps1", ".", "50", "sp", ":", "tyrone"]
        );
    }

    #[test]
    fn detokenize_round_trip() {
        for raw in [
            "This is a good article",
            "Polanski's best films.",
            "don't stop",
            "'quoted' words, and more!",
            "a--b c's d",
        ] {
            let doc = Document::tokenize(raw);
            let rebuilt = detokenize(doc.surface());
            let again = Document::tokenize(&rebuilt);
            assert_eq!(doc.tokens(), again.tokens(), "unstable for {raw:?}");
        }
    }

    #[test]
    fn pos_tag_priority_and_fallback() {
        let lex = MapLexicon::new(&[
            ("good", PosTag::Adj),
            ("book", PosTag::Noun),
            ("book", PosTag::Verb),
            ("well", PosTag::Adv),
        ]);
        let doc = Document::tokenize("good book 82277 well");
        let tagged = doc.pos_tag(&lex);
        assert_eq!(
            tagged.tags(),
            [PosTag::Adj, PosTag::Verb, PosTag::Other, PosTag::Adv]
        );
    }

    #[test]
    fn substitute_replaces_one_position() {
        let doc = Document::tokenize("this is good");
        let out = doc.substitute(2, "bad").unwrap();
        assert_eq!(out.tokens(), ["this", "is", "bad"]);
        assert_eq!(doc.tokens(), ["this", "is", "good"]);
        assert_eq!(out.raw(), "this is bad");
    }

    #[test]
    fn substitute_identity_and_errors() {
        let doc = Document::tokenize("this is good");
        let same = doc.substitute(2, "good").unwrap();
        assert_eq!(same, doc);
        assert!(matches!(
            doc.substitute(3, "x"),
            Err(TextError::IndexOutOfRange {
                position: 3,
                len: 3
            })
        ));
    }

    #[test]
    fn substitute_rebuilds_clitic_sentence() {
        let doc = Document::tokenize("This is one of Polanski's best films");
        let pos = doc.tokens().iter().position(|t| t == "best").unwrap();
        let out = doc.substitute(pos, "worst").unwrap();
        assert_eq!(out.raw(), "This is one of Polanski's worst films");
    }

    #[test]
    fn matrix_identity_layout() {
        let doc = Document::from_tokens(["a", "b"]);
        let vocab = vec!["a".to_string(), "b".to_string()];
        let m = BinaryTextMatrix::from_document(&doc, &vocab).unwrap();
        assert_eq!(m.entries(), &BTreeSet::from([(0, 0), (1, 1)]));
    }

    #[test]
    fn matrix_repeated_word_and_unknown() {
        let vocab = vec!["a".to_string(), "b".to_string()];
        let doc = Document::from_tokens(["b", "b"]);
        let m = BinaryTextMatrix::from_document(&doc, &vocab).unwrap();
        assert_eq!(m.entries(), &BTreeSet::from([(1, 0), (1, 1)]));

        let doc = Document::from_tokens(["c"]);
        assert_eq!(
            BinaryTextMatrix::from_document(&doc, &vocab),
            Err(TextError::UnknownToken("c".to_string()))
        );
    }

    #[test]
    fn perturbation_zero_mask_is_identity() {
        let doc = Document::from_tokens(["a", "b"]);
        let vocab = vec!["a".to_string(), "b".to_string()];
        let m = BinaryTextMatrix::from_document(&doc, &vocab).unwrap();
        let z = m.apply_perturbation(&PerturbationMask::new()).unwrap();
        assert_eq!(z, m);
    }

    #[test]
    fn perturbation_remove_add_clip_conflict() {
        let doc = Document::from_tokens(["a"]);
        let vocab = vec!["a".to_string(), "b".to_string()];
        let m = BinaryTextMatrix::from_document(&doc, &vocab).unwrap();

        // removal: set entry goes to zero
        let mut eps = PerturbationMask::new();
        eps.set(0, 0, -1).unwrap();
        let z = m.apply_perturbation(&eps).unwrap();
        assert_eq!(z.get(0, 0), 0);

        // clipping: +1 on an already-set entry stays 1
        let mut eps = PerturbationMask::new();
        eps.set(0, 0, 1).unwrap();
        let z = m.apply_perturbation(&eps).unwrap();
        assert_eq!(z.get(0, 0), 1);

        // adding a second word at an occupied position conflicts
        let mut eps = PerturbationMask::new();
        eps.set(1, 0, 1).unwrap();
        assert_eq!(
            m.apply_perturbation(&eps),
            Err(TextError::PositionConflict(0))
        );

        // swap is fine: remove one word, add the other
        let mut eps = PerturbationMask::new();
        eps.set(0, 0, -1).unwrap();
        eps.set(1, 0, 1).unwrap();
        let z = m.apply_perturbation(&eps).unwrap();
        assert_eq!((z.get(0, 0), z.get(1, 0)), (0, 1));
    }

    #[test]
    fn perturbation_rejects_out_of_range_and_bad_values() {
        let doc = Document::from_tokens(["a"]);
        let vocab = vec!["a".to_string()];
        let m = BinaryTextMatrix::from_document(&doc, &vocab).unwrap();
        let mut eps = PerturbationMask::new();
        eps.set(5, 0, 1).unwrap();
        assert!(matches!(
            m.apply_perturbation(&eps),
            Err(TextError::EntryOutOfRange { .. })
        ));
        let mut eps = PerturbationMask::new();
        assert!(matches!(
            eps.set(0, 0, 2),
            Err(TextError::InvalidPerturbationValue(2))
        ));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn word() -> impl Strategy<Value = String> {
            "[a-z]{1,6}"
        }

        proptest! {
            #[test]
            fn substitution_preserves_length_and_l0(
                tokens in proptest::collection::vec(word(), 1..8),
                pos_frac in 0.0f64..1.0,
                replacement in word(),
            ) {
                let doc = Document::from_tokens(tokens.clone());
                let j = ((pos_frac * tokens.len() as f64) as usize).min(tokens.len() - 1);
                let out = doc.substitute(j, &replacement).unwrap();
                prop_assert_eq!(out.len(), doc.len());
                let expected = usize::from(replacement != tokens[j]);
                prop_assert_eq!(doc.l0_distance(&out), expected);
            }

            #[test]
            fn distinct_position_substitutions_commute(
                tokens in proptest::collection::vec(word(), 2..8),
                a in word(),
                b in word(),
            ) {
                let doc = Document::from_tokens(tokens.clone());
                let i = 0;
                let j = tokens.len() - 1;
                let ab = doc.substitute(i, &a).unwrap().substitute(j, &b).unwrap();
                let ba = doc.substitute(j, &b).unwrap().substitute(i, &a).unwrap();
                prop_assert_eq!(ab, ba);
            }

            #[test]
            fn tokenize_round_trip_is_stable(raw in "[ a-zA-Z0-9.,!?']{0,40}") {
                let doc = Document::tokenize(&raw);
                let rebuilt = detokenize(doc.surface());
                let again = Document::tokenize(&rebuilt);
                prop_assert_eq!(doc.tokens(), again.tokens());
            }

            #[test]
            fn perturbed_entries_stay_binary(
                n_vocab in 1usize..5,
                n_pos in 1usize..5,
                flips in proptest::collection::vec((0usize..5, 0usize..5, -1i8..=1), 0..8),
            ) {
                let vocab: Vec<String> = (0..n_vocab).map(|i| format!("w{i}")).collect();
                let tokens: Vec<String> = (0..n_pos).map(|j| format!("w{}", j % n_vocab)).collect();
                let doc = Document::from_tokens(tokens);
                let m = BinaryTextMatrix::from_document(&doc, &vocab).unwrap();
                let mut eps = PerturbationMask::new();
                for (r, c, v) in flips {
                    eps.set(r % n_vocab, c % n_pos, v).unwrap();
                }
                if let Ok(z) = m.apply_perturbation(&eps) {
                    for &(r, c) in z.entries() {
                        prop_assert!(r < n_vocab && c < n_pos);
                    }
                }
            }
        }
    }
}
