//! WordNet-style lexical graph: loading, neighborhood queries, and
//! Wu-Palmer similarity.
//!
//! Two on-disk formats are supported: the Princeton WordNet 3.x database
//! layout (`index.*` / `data.*`, see [`load_wordnet`]) and a compact
//! JSON-lines fixture format (see [`load_fixture`]). Both produce the same
//! [`WordNetStore`].

mod fixture;
mod parse;

pub use fixture::{load_fixture, load_fixture_reader, write_fixture};
pub use parse::load_wordnet;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::text::{Document, PosLexicon, PosTag};

#[derive(Debug, Error)]
pub enum WordNetError {
    #[error("missing WordNet file: {0}")]
    MissingFile(String),
    #[error("{file}:{line}: {reason}")]
    Parse {
        file: String,
        line: usize,
        reason: String,
    },
    #[error("unknown synset id '{0}'")]
    UnknownSynset(String),
    #[error("documents have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Stable synset identifier: zero-padded offset plus POS character, e.g.
/// `00000003-n`. Adjective satellites share the `a` character.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SynsetId(pub String);

impl SynsetId {
    pub fn new(offset: u64, pos: PosTag) -> SynsetId {
        let c = pos.as_char().unwrap_or('x');
        SynsetId(format!("{offset:08}-{c}"))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for SynsetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// One sense: a set of synonymous lemmas plus its graph edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Synset {
    pub id: SynsetId,
    pub pos: PosTag,
    pub lemmas: Vec<String>,
    pub hypernyms: Vec<SynsetId>,
    pub hyponyms: Vec<SynsetId>,
    pub antonyms: Vec<SynsetId>,
}

/// Loader-facing synset before cross-references are validated and closed.
#[derive(Debug, Clone)]
pub(crate) struct RawSynset {
    pub id: SynsetId,
    pub pos: PosTag,
    pub lemmas: Vec<String>,
    pub hypernyms: Vec<SynsetId>,
    pub hyponyms: Vec<SynsetId>,
    pub antonyms: Vec<SynsetId>,
}

/// In-memory lexical graph. Read-only after load; queries are safe to run
/// concurrently.
#[derive(Debug, Clone)]
pub struct WordNetStore {
    synsets: BTreeMap<SynsetId, Synset>,
    index: BTreeMap<(String, PosTag), Vec<SynsetId>>,
    depth: BTreeMap<SynsetId, u32>,
}

impl WordNetStore {
    /// Validates raw synsets, makes hypernym/hyponym and antonym edges
    /// mutually inverse, computes depths, and builds the lemma index.
    ///
    /// `index_entries` are entries read from `index.*` files; lemmas found in
    /// the synsets themselves are merged in so the index is always consistent
    /// with the lemma lists.
    pub(crate) fn finalize(
        raws: Vec<RawSynset>,
        index_entries: Vec<((String, PosTag), Vec<SynsetId>)>,
        source: &str,
    ) -> Result<WordNetStore, WordNetError> {
        let mut synsets: BTreeMap<SynsetId, Synset> = BTreeMap::new();
        for raw in raws {
            let synset = Synset {
                id: raw.id.clone(),
                pos: raw.pos,
                lemmas: raw.lemmas,
                hypernyms: raw.hypernyms,
                hyponyms: raw.hyponyms,
                antonyms: raw.antonyms,
            };
            if synsets.insert(raw.id.clone(), synset).is_some() {
                return Err(WordNetError::Parse {
                    file: source.to_string(),
                    line: 0,
                    reason: format!("duplicate synset id '{}'", raw.id),
                });
            }
        }

        let ids: Vec<SynsetId> = synsets.keys().cloned().collect();
        for id in &ids {
            let s = &synsets[id];
            for target in s
                .hypernyms
                .iter()
                .chain(s.hyponyms.iter())
                .chain(s.antonyms.iter())
            {
                if !synsets.contains_key(target) {
                    return Err(WordNetError::Parse {
                        file: source.to_string(),
                        line: 0,
                        reason: format!("synset '{id}' references unknown synset '{target}'"),
                    });
                }
            }
        }

        // close edges: hypernym/hyponym mutually inverse, antonyms symmetric
        let mut add_hypernyms: BTreeMap<SynsetId, BTreeSet<SynsetId>> = BTreeMap::new();
        let mut add_hyponyms: BTreeMap<SynsetId, BTreeSet<SynsetId>> = BTreeMap::new();
        let mut add_antonyms: BTreeMap<SynsetId, BTreeSet<SynsetId>> = BTreeMap::new();
        for (id, s) in &synsets {
            for up in &s.hypernyms {
                if !synsets[up].hyponyms.contains(id) {
                    add_hyponyms
                        .entry(up.clone())
                        .or_default()
                        .insert(id.clone());
                }
            }
            for down in &s.hyponyms {
                if !synsets[down].hypernyms.contains(id) {
                    add_hypernyms
                        .entry(down.clone())
                        .or_default()
                        .insert(id.clone());
                }
            }
            for ant in &s.antonyms {
                if !synsets[ant].antonyms.contains(id) {
                    add_antonyms
                        .entry(ant.clone())
                        .or_default()
                        .insert(id.clone());
                }
            }
        }
        for (id, extra) in add_hypernyms {
            let s = synsets.get_mut(&id).expect("validated above");
            for e in extra {
                if !s.hypernyms.contains(&e) {
                    s.hypernyms.push(e);
                }
            }
        }
        for (id, extra) in add_hyponyms {
            let s = synsets.get_mut(&id).expect("validated above");
            for e in extra {
                if !s.hyponyms.contains(&e) {
                    s.hyponyms.push(e);
                }
            }
        }
        for (id, extra) in add_antonyms {
            let s = synsets.get_mut(&id).expect("validated above");
            for e in extra {
                if !s.antonyms.contains(&e) {
                    s.antonyms.push(e);
                }
            }
        }

        let depth = compute_depths(&synsets, source)?;

        let mut index: BTreeMap<(String, PosTag), Vec<SynsetId>> = BTreeMap::new();
        for (key, ids) in index_entries {
            let slot = index.entry(key).or_default();
            for id in ids {
                if !synsets.contains_key(&id) {
                    return Err(WordNetError::Parse {
                        file: source.to_string(),
                        line: 0,
                        reason: format!("index references unknown synset '{id}'"),
                    });
                }
                if !slot.contains(&id) {
                    slot.push(id);
                }
            }
        }
        for (id, s) in &synsets {
            for lemma in &s.lemmas {
                let slot = index.entry((lemma.clone(), s.pos)).or_default();
                if !slot.contains(id) {
                    slot.push(id.clone());
                }
            }
        }

        Ok(WordNetStore {
            synsets,
            index,
            depth,
        })
    }

    pub fn synset(&self, id: &SynsetId) -> Option<&Synset> {
        self.synsets.get(id)
    }

    pub fn synset_count(&self) -> usize {
        self.synsets.len()
    }

    pub fn synset_count_for(&self, pos: PosTag) -> usize {
        self.synsets.values().filter(|s| s.pos == pos).count()
    }

    pub fn ids(&self) -> impl Iterator<Item = &SynsetId> {
        self.synsets.keys()
    }

    pub fn synsets(&self) -> impl Iterator<Item = &Synset> {
        self.synsets.values()
    }

    /// Directed edge counts `(hypernym, hyponym, antonym)`.
    pub fn edge_counts(&self) -> (usize, usize, usize) {
        let mut counts = (0, 0, 0);
        for s in self.synsets.values() {
            counts.0 += s.hypernyms.len();
            counts.1 += s.hyponyms.len();
            counts.2 += s.antonyms.len();
        }
        counts
    }

    /// Root depth is 1; children follow the first-listed hypernym chain.
    pub fn depth(&self, id: &SynsetId) -> Option<u32> {
        self.depth.get(id).copied()
    }

    pub fn synsets_for(&self, word: &str, pos: PosTag) -> &[SynsetId] {
        self.index
            .get(&(word.to_lowercase(), pos))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    fn all_synsets_for(&self, word: &str) -> Vec<&SynsetId> {
        let word = word.to_lowercase();
        let mut out = Vec::new();
        for pos in PosTag::TAGGABLE {
            if let Some(ids) = self.index.get(&(word.clone(), pos)) {
                out.extend(ids.iter());
            }
        }
        out
    }

    /// Words usable as replacements for `(word, pos)`: synonyms, lemmas of
    /// antonym synsets, and lemmas of synsets within `radius` hypernym or
    /// hyponym steps. The query word itself and multi-word lemmas are
    /// dropped. Unknown words yield an empty set.
    pub fn simwords(&self, word: &str, pos: PosTag, radius: u32) -> BTreeSet<String> {
        let word = word.to_lowercase();
        let mut out = BTreeSet::new();
        let Some(ids) = self.index.get(&(word.clone(), pos)) else {
            return out;
        };
        for id in ids {
            let synset = &self.synsets[id];
            let mut reached: BTreeSet<SynsetId> = BTreeSet::from([id.clone()]);
            reached.extend(synset.antonyms.iter().cloned());
            // breadth-first over hypernym and hyponym edges up to `radius`
            let mut seen = BTreeSet::from([id.clone()]);
            let mut frontier = VecDeque::from([(id.clone(), 0u32)]);
            while let Some((cur, dist)) = frontier.pop_front() {
                if dist >= radius {
                    continue;
                }
                let s = &self.synsets[&cur];
                for next in s.hypernyms.iter().chain(s.hyponyms.iter()) {
                    if seen.insert(next.clone()) {
                        frontier.push_back((next.clone(), dist + 1));
                    }
                }
            }
            reached.extend(seen);
            for r in &reached {
                for lemma in &self.synsets[r].lemmas {
                    if lemma != &word && usable_replacement(lemma) {
                        out.insert(lemma.clone());
                    }
                }
            }
        }
        out.retain(|w| self.has_pos(w, pos));
        out
    }

    /// Classic Wu-Palmer score in `(0, 1]`: twice the depth of the deepest
    /// common ancestor over the summed depths of both synsets measured
    /// through it. Pairs without a common ancestor are scored through a
    /// virtual per-POS root (same POS) or a virtual global root (cross-POS).
    pub fn wu_palmer(&self, a: &SynsetId, b: &SynsetId) -> Result<f64, WordNetError> {
        let sa = self
            .synsets
            .get(a)
            .ok_or_else(|| WordNetError::UnknownSynset(a.to_string()))?;
        let sb = self
            .synsets
            .get(b)
            .ok_or_else(|| WordNetError::UnknownSynset(b.to_string()))?;
        if a == b {
            return Ok(1.0);
        }
        let up_a = self.ancestor_hops(a);
        let up_b = self.ancestor_hops(b);
        let mut best: Option<(u32, &SynsetId, u32, u32)> = None;
        for (id, &ha) in &up_a {
            if let Some(&hb) = up_b.get(id) {
                let d = self.depth[*id];
                let candidate = (d, *id, ha, hb);
                best = Some(match best {
                    None => candidate,
                    Some(cur) => {
                        if d > cur.0 || (d == cur.0 && *id < cur.1) {
                            candidate
                        } else {
                            cur
                        }
                    }
                });
            }
        }
        if let Some((d, _, ha, hb)) = best {
            let d = f64::from(d);
            return Ok(2.0 * d / ((d + f64::from(ha)) + (d + f64::from(hb))));
        }
        // no shared ancestor: route through a virtual root one level above
        // the POS roots, two levels above for cross-POS pairs
        let extra = if sa.pos == sb.pos { 1.0 } else { 2.0 };
        let da = f64::from(self.depth[a]) + extra;
        let db = f64::from(self.depth[b]) + extra;
        Ok(2.0 / (da + db))
    }

    fn ancestor_hops<'a>(&'a self, id: &SynsetId) -> BTreeMap<&'a SynsetId, u32> {
        let mut hops: BTreeMap<&'a SynsetId, u32> = BTreeMap::new();
        let (start, _) = self.synsets.get_key_value(id).expect("checked by caller");
        hops.insert(start, 0);
        let mut frontier = VecDeque::from([start]);
        while let Some(cur) = frontier.pop_front() {
            let next_hops = hops[cur] + 1;
            for up in &self.synsets[cur].hypernyms {
                let (key, _) = self.synsets.get_key_value(up).expect("edges validated");
                if !hops.contains_key(key) {
                    hops.insert(key, next_hops);
                    frontier.push_back(key);
                }
            }
        }
        hops
    }

    /// Position-aligned mean of word similarities between two equal-length
    /// documents: 1 where tokens match, the best synset-pair Wu-Palmer score
    /// otherwise (same-POS pairs preferred), 0.5 when either word has no
    /// synset at all.
    pub fn wu_palmer_sentence(&self, a: &Document, b: &Document) -> Result<f64, WordNetError> {
        if a.len() != b.len() {
            return Err(WordNetError::LengthMismatch(a.len(), b.len()));
        }
        if a.is_empty() {
            return Ok(1.0);
        }
        let mut total = 0.0;
        for (ta, tb) in a.tokens().iter().zip(b.tokens().iter()) {
            total += self.word_similarity(ta, tb)?;
        }
        Ok(total / a.len() as f64)
    }

    fn word_similarity(&self, a: &str, b: &str) -> Result<f64, WordNetError> {
        if a == b {
            return Ok(1.0);
        }
        let ids_a = self.all_synsets_for(a);
        let ids_b = self.all_synsets_for(b);
        if ids_a.is_empty() || ids_b.is_empty() {
            return Ok(0.5);
        }
        let mut best_same_pos: Option<f64> = None;
        let mut best_any: Option<f64> = None;
        for ia in &ids_a {
            for ib in &ids_b {
                let score = self.wu_palmer(ia, ib)?;
                if self.synsets[*ia].pos == self.synsets[*ib].pos {
                    best_same_pos = Some(best_same_pos.map_or(score, |v| v.max(score)));
                }
                best_any = Some(best_any.map_or(score, |v| v.max(score)));
            }
        }
        Ok(best_same_pos.or(best_any).expect("both id lists nonempty"))
    }
}

impl PosLexicon for WordNetStore {
    fn has_pos(&self, word: &str, pos: PosTag) -> bool {
        self.index.contains_key(&(word.to_lowercase(), pos))
    }
}

/// Replacements must survive tokenization as one token, so multi-word and
/// otherwise unsplittable lemmas are excluded.
fn usable_replacement(lemma: &str) -> bool {
    if lemma.contains('_') {
        return false;
    }
    let doc = Document::tokenize(lemma);
    doc.len() == 1 && doc.tokens()[0] == lemma
}

fn compute_depths(
    synsets: &BTreeMap<SynsetId, Synset>,
    source: &str,
) -> Result<BTreeMap<SynsetId, u32>, WordNetError> {
    // a cycle anywhere in the hypernym graph would break both depth
    // computation and ancestor walks, so reject it up front
    let mut state: BTreeMap<&SynsetId, u8> = BTreeMap::new(); // 1 in progress, 2 done
    for start in synsets.keys() {
        if state.get(start).copied() == Some(2) {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        state.insert(start, 1);
        while let Some((id, child_idx)) = stack.pop() {
            let hypernyms = &synsets[id].hypernyms;
            if child_idx >= hypernyms.len() {
                state.insert(id, 2);
                continue;
            }
            stack.push((id, child_idx + 1));
            let next = &hypernyms[child_idx];
            match state.get(next).copied() {
                Some(1) => {
                    return Err(WordNetError::Parse {
                        file: source.to_string(),
                        line: 0,
                        reason: format!("hypernym cycle involving '{next}'"),
                    })
                }
                Some(2) => {}
                _ => {
                    state.insert(next, 1);
                    stack.push((next, 0));
                }
            }
        }
    }

    let mut depth: BTreeMap<SynsetId, u32> = BTreeMap::new();
    for id in synsets.keys() {
        if depth.contains_key(id) {
            continue;
        }
        // walk the primary-hypernym chain up to a memoized ancestor or a
        // root, then assign depths back down the chain
        let mut chain = vec![id];
        let mut base = loop {
            let current = chain.last().expect("chain starts non-empty");
            match synsets[*current].hypernyms.first() {
                None => break 1,
                Some(primary) => {
                    if let Some(&d) = depth.get(primary) {
                        break d + 1;
                    }
                    chain.push(primary);
                }
            }
        };
        for link in chain.into_iter().rev() {
            depth.insert(link.clone(), base);
            base += 1;
        }
    }
    Ok(depth)
}
