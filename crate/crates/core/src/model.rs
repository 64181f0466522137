//! Lexicon-level records: synsets, variants (senses), relations and the
//! relation inventory.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::ids::{IliId, LexiconKey, Pos, SynsetId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad confidence `{0}` (expected a plain decimal in [0,1])")]
pub struct ConfidenceError(pub String);

/// Variant confidence in `[0,1]`.
///
/// The decimal text it was read from is kept so that re-emitted rows are
/// byte-identical to the input (`0.850` stays `0.850`).
#[derive(Debug, Clone)]
pub struct Confidence {
    value: f64,
    text: Box<str>,
}

impl Confidence {
    pub fn new(value: f64) -> Result<Confidence, ConfidenceError> {
        if !(0.0..=1.0).contains(&value) {
            return Err(ConfidenceError(value.to_string()));
        }
        let mut text = value.to_string();
        if !text.contains('.') {
            text.push_str(".0");
        }
        Ok(Confidence { value, text: text.into() })
    }

    pub fn one() -> Confidence {
        Confidence { value: 1.0, text: "1.0".into() }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

impl FromStr for Confidence {
    type Err = ConfidenceError;

    /// Accepts `digits[.digits]`; exponents, signs and `NaN` are refused so
    /// the text is always a valid `xsd:decimal`.
    fn from_str(s: &str) -> Result<Confidence, ConfidenceError> {
        let (int, frac) = match s.split_once('.') {
            Some((i, f)) => (i, Some(f)),
            None => (s, None),
        };
        let digits = |p: &str| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit());
        if !digits(int) || frac.is_some_and(|f| !digits(f)) {
            return Err(ConfidenceError(s.to_string()));
        }
        let value: f64 = s.parse().map_err(|_| ConfidenceError(s.to_string()))?;
        if !(0.0..=1.0).contains(&value) {
            return Err(ConfidenceError(s.to_string()));
        }
        Ok(Confidence { value, text: s.into() })
    }
}

impl PartialEq for Confidence {
    fn eq(&self, other: &Self) -> bool {
        self.text == other.text
    }
}

impl Eq for Confidence {}

impl fmt::Display for Confidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Synset {
    pub id: SynsetId,
    pub gloss: Option<String>,
    pub examples: Vec<String>,
}

impl Synset {
    pub fn new(id: SynsetId) -> Synset {
        Synset { id, gloss: None, examples: Vec::new() }
    }

    pub fn with_gloss(id: SynsetId, gloss: &str) -> Synset {
        Synset { id, gloss: Some(gloss.to_string()), examples: Vec::new() }
    }

    pub fn pos(&self) -> Pos {
        self.id.pos()
    }

    pub fn has_gloss(&self) -> bool {
        self.gloss.as_deref().is_some_and(|g| !g.is_empty())
    }
}

/// One word form in one synset, i.e. a sense.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variant {
    pub lemma: String,
    pub synset: SynsetId,
    pub sense_index: u32,
    pub confidence: Confidence,
    pub source: String,
}

impl Variant {
    pub fn new(lemma: &str, synset: SynsetId, sense_index: u32) -> Variant {
        Variant {
            lemma: lemma.to_string(),
            synset,
            sense_index,
            confidence: Confidence::one(),
            source: "manual".to_string(),
        }
    }

    pub fn pos(&self) -> Pos {
        self.synset.pos()
    }
}

/// Relation code from the relation inventory. Codes are opaque short strings
/// (the MCR uses small integers, but nothing here depends on that).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RelCode(String);

impl RelCode {
    pub fn new(code: &str) -> RelCode {
        RelCode(code.to_string())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for RelCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for RelCode {
    fn from(s: &str) -> RelCode {
        RelCode::new(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Relation {
    pub source: SynsetId,
    pub code: RelCode,
    pub target: SynsetId,
}

impl Relation {
    pub fn new(code: impl Into<RelCode>, source: SynsetId, target: SynsetId) -> Relation {
        Relation { source, code: code.into(), target }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationDef {
    pub code: RelCode,
    pub name: String,
    pub inverse: Option<RelCode>,
    pub transitive: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RelationInventory {
    defs: BTreeMap<RelCode, RelationDef>,
}

impl RelationInventory {
    pub fn new(defs: impl IntoIterator<Item = RelationDef>) -> RelationInventory {
        RelationInventory { defs: defs.into_iter().map(|d| (d.code.clone(), d)).collect() }
    }

    pub fn get(&self, code: &RelCode) -> Option<&RelationDef> {
        self.defs.get(code)
    }

    pub fn contains(&self, code: &RelCode) -> bool {
        self.defs.contains_key(code)
    }

    pub fn inverse(&self, code: &RelCode) -> Option<&RelCode> {
        self.defs.get(code).and_then(|d| d.inverse.as_ref())
    }

    pub fn by_name(&self, name: &str) -> Option<&RelationDef> {
        self.defs.values().find(|d| d.name == name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &RelationDef> {
        self.defs.values()
    }

    pub fn len(&self) -> usize {
        self.defs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.defs.is_empty()
    }

    /// Entries whose inverse is missing or does not point back.
    pub fn inconsistent_inverses(&self) -> Vec<&RelationDef> {
        self.defs
            .values()
            .filter(|d| match &d.inverse {
                None => false,
                Some(inv) => self.inverse(inv) != Some(&d.code),
            })
            .collect()
    }
}

/// One language's wordnet.
///
/// Primary data is kept sorted so that two lexicons built from the same rows
/// in any order compare equal.
#[derive(Debug, Clone)]
pub struct Lexicon {
    key: LexiconKey,
    synsets: BTreeMap<SynsetId, Synset>,
    variants: Vec<Variant>,
    relations: Vec<Relation>,
    ili_links: BTreeMap<SynsetId, IliId>,
    // derived indexes
    by_lemma: HashMap<String, Vec<usize>>,
    by_synset: HashMap<SynsetId, Vec<usize>>,
    outgoing: HashMap<SynsetId, Vec<usize>>,
    incoming: HashMap<SynsetId, Vec<usize>>,
    by_ili: BTreeMap<IliId, Vec<SynsetId>>,
    collapsed_variants: usize,
}

/// Equality over the stored records only; the collapse counter and derived
/// indexes are ignored.
impl PartialEq for Lexicon {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
            && self.synsets == other.synsets
            && self.variants == other.variants
            && self.relations == other.relations
            && self.ili_links == other.ili_links
    }
}

impl Lexicon {
    pub fn key(&self) -> &LexiconKey {
        &self.key
    }

    pub fn synset(&self, id: &SynsetId) -> Option<&Synset> {
        self.synsets.get(id)
    }

    pub fn synsets(&self) -> impl Iterator<Item = &Synset> {
        self.synsets.values()
    }

    pub fn synset_count(&self) -> usize {
        self.synsets.len()
    }

    /// All variants, ordered by `(lemma, sense_index, synset)`.
    pub fn variants(&self) -> &[Variant] {
        &self.variants
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn ili_links(&self) -> &BTreeMap<SynsetId, IliId> {
        &self.ili_links
    }

    pub fn ili_of(&self, id: &SynsetId) -> Option<&IliId> {
        self.ili_links.get(id)
    }

    /// Synsets linked to an ILI record. More than one entry means the
    /// lexicon violates ILI-link injectivity.
    pub fn synsets_for_ili(&self, ili: &IliId) -> &[SynsetId] {
        self.by_ili.get(ili).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Variants with this exact lemma, ordered by sense index.
    pub fn lemma_variants(&self, lemma: &str) -> impl Iterator<Item = &Variant> {
        self.index_iter(self.by_lemma.get(lemma))
    }

    pub fn lemmas(&self) -> impl Iterator<Item = &str> {
        self.by_lemma.keys().map(String::as_str)
    }

    pub fn synset_variants(&self, id: &SynsetId) -> impl Iterator<Item = &Variant> {
        self.index_iter(self.by_synset.get(id))
    }

    pub fn outgoing(&self, id: &SynsetId) -> impl Iterator<Item = &Relation> {
        self.outgoing.get(id).into_iter().flatten().map(|&i| &self.relations[i])
    }

    pub fn incoming(&self, id: &SynsetId) -> impl Iterator<Item = &Relation> {
        self.incoming.get(id).into_iter().flatten().map(|&i| &self.relations[i])
    }

    /// Number of duplicate `(lemma, synset)` rows folded away at build time.
    pub fn collapsed_variants(&self) -> usize {
        self.collapsed_variants
    }

    fn index_iter<'a>(&'a self, idx: Option<&'a Vec<usize>>) -> impl Iterator<Item = &'a Variant> {
        idx.into_iter().flatten().map(|&i| &self.variants[i])
    }
}

/// Accumulates rows for one lexicon. Building never fails: integrity problems
/// (dangling endpoints, duplicate ILI links, ...) are left in place for
/// [`crate::validate`] to report.
#[derive(Debug, Clone)]
pub struct LexiconBuilder {
    key: LexiconKey,
    synsets: BTreeMap<SynsetId, Synset>,
    variants: BTreeMap<(String, SynsetId), Variant>,
    relations: BTreeSet<Relation>,
    ili_links: Vec<(SynsetId, IliId)>,
    examples: Vec<(SynsetId, String)>,
    collapsed: usize,
}

impl LexiconBuilder {
    pub fn new(key: LexiconKey) -> LexiconBuilder {
        LexiconBuilder {
            key,
            synsets: BTreeMap::new(),
            variants: BTreeMap::new(),
            relations: BTreeSet::new(),
            ili_links: Vec::new(),
            examples: Vec::new(),
            collapsed: 0,
        }
    }

    pub fn key(&self) -> &LexiconKey {
        &self.key
    }

    pub fn synset(&mut self, synset: Synset) -> &mut Self {
        self.synsets.insert(synset.id.clone(), synset);
        self
    }

    /// Adds a variant. A repeated `(lemma, synset)` pair keeps the row with
    /// the higher confidence (the earlier row on ties).
    pub fn variant(&mut self, variant: Variant) -> &mut Self {
        let key = (variant.lemma.clone(), variant.synset.clone());
        match self.variants.get_mut(&key) {
            Some(existing) => {
                self.collapsed += 1;
                if variant.confidence.value() > existing.confidence.value() {
                    *existing = variant;
                }
            }
            None => {
                self.variants.insert(key, variant);
            }
        }
        self
    }

    pub fn relation(&mut self, relation: Relation) -> &mut Self {
        self.relations.insert(relation);
        self
    }

    pub fn ili_link(&mut self, synset: SynsetId, ili: IliId) -> &mut Self {
        self.ili_links.push((synset, ili));
        self
    }

    /// Examples attach to synsets. Examples for synsets never declared are
    /// dropped at build time.
    pub fn example(&mut self, synset: SynsetId, text: &str) -> &mut Self {
        self.examples.push((synset, text.to_string()));
        self
    }

    pub fn build(self) -> Lexicon {
        let LexiconBuilder { key, mut synsets, variants, relations, ili_links, examples, collapsed } = self;

        for (id, text) in examples {
            if let Some(s) = synsets.get_mut(&id) {
                s.examples.push(text);
            }
        }

        let mut variants: Vec<Variant> = variants.into_values().collect();
        variants.sort_by(|a, b| {
            (&a.lemma, a.sense_index, &a.synset).cmp(&(&b.lemma, b.sense_index, &b.synset))
        });
        let mut by_lemma: HashMap<String, Vec<usize>> = HashMap::new();
        let mut by_synset: HashMap<SynsetId, Vec<usize>> = HashMap::new();
        for (i, v) in variants.iter().enumerate() {
            by_lemma.entry(v.lemma.clone()).or_default().push(i);
            by_synset.entry(v.synset.clone()).or_default().push(i);
        }

        let relations: Vec<Relation> = relations.into_iter().collect();
        let mut outgoing: HashMap<SynsetId, Vec<usize>> = HashMap::new();
        let mut incoming: HashMap<SynsetId, Vec<usize>> = HashMap::new();
        for (i, r) in relations.iter().enumerate() {
            outgoing.entry(r.source.clone()).or_default().push(i);
            incoming.entry(r.target.clone()).or_default().push(i);
        }

        // A synset carries at most one ILI link; the last row wins.
        let mut links: BTreeMap<SynsetId, IliId> = BTreeMap::new();
        for (s, ili) in ili_links {
            links.insert(s, ili);
        }
        let mut by_ili: BTreeMap<IliId, Vec<SynsetId>> = BTreeMap::new();
        for (s, ili) in &links {
            by_ili.entry(ili.clone()).or_default().push(s.clone());
        }

        Lexicon {
            key,
            synsets,
            variants,
            relations,
            ili_links: links,
            by_lemma,
            by_synset,
            outgoing,
            incoming,
            by_ili,
            collapsed_variants: collapsed,
        }
    }
}
