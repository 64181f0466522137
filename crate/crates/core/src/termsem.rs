//! Termonet term extraction and epinonym categorization.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::ids::{Pos, SynsetId};
use crate::model::{Lexicon, RelCode, Variant};
use crate::repo::{LookupError, Repository};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TermsemError {
    #[error("unknown synset {0}")]
    UnknownSynset(SynsetId),
    #[error("no noun synset reachable from {0}")]
    NoNounReachable(SynsetId),
    #[error("traversal config line {line}: {reason}")]
    Config { line: usize, reason: String },
    #[error("epinonym set is empty")]
    EmptyEpinonymSet,
    #[error("epinonym {0} is not a noun synset")]
    NonNounEpinonym(SynsetId),
}

impl From<LookupError> for TermsemError {
    fn from(e: LookupError) -> Self {
        match e {
            LookupError::UnknownSynset(s) | LookupError::NoIliLink(s) => TermsemError::UnknownSynset(s),
            LookupError::UnknownLexicon(l) => TermsemError::Config { line: 0, reason: format!("unknown lexicon {l}") },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelationRule {
    pub allowed: bool,
    /// Deepest BFS level an edge of this code may land on.
    pub max_depth: u32,
    /// Epinonym edge cost is `1 / weight`.
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraversalConfig {
    rules: BTreeMap<RelCode, RelationRule>,
    global_max_depth: Option<u32>,
}

impl TraversalConfig {
    pub fn new(
        rules: impl IntoIterator<Item = (RelCode, RelationRule)>,
        global_max_depth: Option<u32>,
    ) -> Result<TraversalConfig, TermsemError> {
        let rules: BTreeMap<_, _> = rules.into_iter().collect();
        let config_err = |reason: String| TermsemError::Config { line: 0, reason };
        if let Some((code, _)) = rules.iter().find(|(_, r)| !(r.weight.is_finite() && r.weight > 0.0)) {
            return Err(config_err(format!("weight of relation {code} must be a positive number")));
        }
        if !rules.values().any(|r| r.allowed) {
            return Err(config_err("no relation is allowed".into()));
        }
        Ok(TraversalConfig { rules, global_max_depth })
    }

    /// Every listed code allowed with the same depth limit and weight 1.
    pub fn uniform<'a>(codes: impl IntoIterator<Item = &'a RelCode>, max_depth: u32) -> Result<TraversalConfig, TermsemError> {
        let rule = RelationRule { allowed: true, max_depth, weight: 1.0 };
        TraversalConfig::new(codes.into_iter().map(|c| (c.clone(), rule)), None)
    }

    /// Parses `code allowed max_depth weight` lines plus an optional
    /// `global_max_depth N` line. `allowed` is `1`/`0` or `true`/`false`.
    pub fn parse(text: &str) -> Result<TraversalConfig, TermsemError> {
        let mut rules = BTreeMap::new();
        let mut global = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |reason: String| TermsemError::Config { line, reason };
            let content = raw.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            if fields[0] == "global_max_depth" {
                if fields.len() != 2 {
                    return Err(err("expected `global_max_depth N`".into()));
                }
                global = Some(fields[1].parse().map_err(|_| err(format!("bad depth `{}`", fields[1])))?);
                continue;
            }
            if fields.len() != 4 {
                return Err(err(format!("expected 4 fields, found {}", fields.len())));
            }
            let allowed = match fields[1] {
                "1" | "true" => true,
                "0" | "false" => false,
                other => return Err(err(format!("bad allowed flag `{other}`"))),
            };
            let max_depth = fields[2].parse().map_err(|_| err(format!("bad depth `{}`", fields[2])))?;
            let weight: f64 = fields[3].parse().map_err(|_| err(format!("bad weight `{}`", fields[3])))?;
            if !(weight.is_finite() && weight > 0.0) {
                return Err(err(format!("weight must be positive, found `{}`", fields[3])));
            }
            if rules.insert(RelCode::new(fields[0]), RelationRule { allowed, max_depth, weight }).is_some() {
                return Err(err(format!("relation {} listed twice", fields[0])));
            }
        }
        TraversalConfig::new(rules, global)
    }

    pub fn rule(&self, code: &RelCode) -> Option<&RelationRule> {
        self.rules.get(code)
    }

    /// The rule for `code` if traversal along it is allowed.
    pub fn allowed(&self, code: &RelCode) -> Option<&RelationRule> {
        self.rules.get(code).filter(|r| r.allowed)
    }

    pub fn rules(&self) -> impl Iterator<Item = (&RelCode, &RelationRule)> {
        self.rules.iter()
    }

    pub fn global_max_depth(&self) -> Option<u32> {
        self.global_max_depth
    }

    fn permits(&self, code: &RelCode, depth: u32) -> bool {
        self.allowed(code).is_some_and(|r| depth <= r.max_depth)
            && self.global_max_depth.is_none_or(|g| depth <= g)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub variant: Variant,
    pub synset: SynsetId,
    pub depth: u32,
    /// Relation steps from the seed: `(code, reached synset)`.
    pub path: Vec<(RelCode, SynsetId)>,
    pub seed: SynsetId,
}

impl Term {
    /// `seed>code>id>code>id...`
    pub fn render_path(&self) -> String {
        let mut s = self.seed.to_string();
        for (code, id) in &self.path {
            write!(s, ">{code}>{id}").unwrap();
        }
        s
    }
}

fn lexicon_of<'r>(repo: &'r Repository, id: &SynsetId) -> Result<&'r Lexicon, TermsemError> {
    repo.resolve_synset(id)?;
    Ok(repo.lexicon(&id.lexicon()).expect("resolved synset has a lexicon"))
}

/// Breadth-first traversal from `seed` over allowed outgoing relations. Each
/// synset is visited once, at its smallest depth; its path runs through the
/// smallest-id parent on the previous level (then the smallest code).
/// Returns the variants of every visited noun synset ordered by
/// `(depth, synset id)`.
pub fn extract_terms(seed: &SynsetId, cfg: &TraversalConfig, repo: &Repository) -> Result<Vec<Term>, TermsemError> {
    let lex = lexicon_of(repo, seed)?;
    let mut paths: BTreeMap<SynsetId, Vec<(RelCode, SynsetId)>> = BTreeMap::new();
    paths.insert(seed.clone(), Vec::new());
    let mut levels: Vec<Vec<SynsetId>> = vec![vec![seed.clone()]];
    loop {
        let depth = levels.len() as u32;
        let mut next: BTreeMap<SynsetId, Vec<(RelCode, SynsetId)>> = BTreeMap::new();
        for parent in levels.last().unwrap() {
            for rel in lex.outgoing(parent) {
                if paths.contains_key(&rel.target) || next.contains_key(&rel.target) || !cfg.permits(&rel.code, depth) {
                    continue;
                }
                if lex.synset(&rel.target).is_none() {
                    continue;
                }
                let mut path = paths[parent].clone();
                path.push((rel.code.clone(), rel.target.clone()));
                next.insert(rel.target.clone(), path);
            }
        }
        if next.is_empty() {
            break;
        }
        levels.push(next.keys().cloned().collect());
        paths.extend(next);
    }

    let mut out = Vec::new();
    for (depth, level) in levels.iter().enumerate() {
        for id in level.iter().filter(|id| id.pos() == Pos::Noun) {
            for v in lex.synset_variants(id) {
                out.push(Term {
                    variant: v.clone(),
                    synset: id.clone(),
                    depth: depth as u32,
                    path: paths[id].clone(),
                    seed: seed.clone(),
                });
            }
        }
    }
    Ok(out)
}

/// `seed` itself when it is a noun, else the closest noun by unweighted BFS
/// over relations in both directions, ties by id.
pub fn nearest_noun_seed(seed: &SynsetId, repo: &Repository) -> Result<SynsetId, TermsemError> {
    let lex = lexicon_of(repo, seed)?;
    if seed.pos() == Pos::Noun {
        return Ok(seed.clone());
    }
    let mut seen: BTreeSet<&SynsetId> = BTreeSet::from([seed]);
    let mut frontier: BTreeSet<&SynsetId> = BTreeSet::from([seed]);
    while !frontier.is_empty() {
        let mut next = BTreeSet::new();
        for id in &frontier {
            let neighbours = lex.outgoing(id).map(|r| &r.target).chain(lex.incoming(id).map(|r| &r.source));
            for n in neighbours {
                if lex.synset(n).is_some() && seen.insert(n) {
                    next.insert(n);
                }
            }
        }
        if let Some(noun) = next.iter().find(|id| id.pos() == Pos::Noun) {
            return Ok((*noun).clone());
        }
        frontier = next;
    }
    Err(TermsemError::NoNounReachable(seed.clone()))
}

/// Occurrences of `phrase` (space-separated tokens) as a contiguous token run.
fn count_phrases<'a>(phrases: impl IntoIterator<Item = &'a str>, corpus: &[&str]) -> HashMap<&'a str, usize> {
    let mut by_len: BTreeMap<usize, HashMap<Vec<&'a str>, &'a str>> = BTreeMap::new();
    let mut counts = HashMap::new();
    for p in phrases {
        let toks: Vec<&str> = p.split_whitespace().collect();
        counts.insert(p, 0);
        if !toks.is_empty() {
            by_len.entry(toks.len()).or_default().insert(toks, p);
        }
    }
    for (n, wanted) in by_len {
        for w in corpus.windows(n) {
            if let Some(p) = wanted.get(w) {
                *counts.get_mut(p).unwrap() += 1;
            }
        }
    }
    counts
}

/// Keeps terms whose lemma occurs at least `min_freq` times in a lemmatized
/// token stream, each annotated with its frequency. Input order is kept.
pub fn corpus_filter(terms: &[Term], corpus: &[&str], min_freq: usize) -> Vec<(Term, usize)> {
    let counts = count_phrases(terms.iter().map(|t| t.variant.lemma.as_str()), corpus);
    terms
        .iter()
        .filter_map(|t| {
            let f = counts[t.variant.lemma.as_str()];
            (f >= min_freq).then(|| (t.clone(), f))
        })
        .collect()
}

/// `lemma TAB synset_id TAB depth TAB path`, plus `TAB freq` when filtered.
pub fn render_terms(terms: &[Term], freqs: Option<&[usize]>) -> String {
    let mut out = String::new();
    for (i, t) in terms.iter().enumerate() {
        write!(out, "{}\t{}\t{}\t{}", t.variant.lemma, t.synset, t.depth, t.render_path()).unwrap();
        if let Some(f) = freqs {
            write!(out, "\t{}", f[i]).unwrap();
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpinonymSet(BTreeSet<SynsetId>);

impl EpinonymSet {
    pub fn new(ids: impl IntoIterator<Item = SynsetId>) -> Result<EpinonymSet, TermsemError> {
        let set: BTreeSet<SynsetId> = ids.into_iter().collect();
        if set.is_empty() {
            return Err(TermsemError::EmptyEpinonymSet);
        }
        if let Some(bad) = set.iter().find(|s| s.pos() != Pos::Noun) {
            return Err(TermsemError::NonNounEpinonym(bad.clone()));
        }
        Ok(EpinonymSet(set))
    }

    pub fn iter(&self) -> impl Iterator<Item = &SynsetId> {
        self.0.iter()
    }

    pub fn contains(&self, id: &SynsetId) -> bool {
        self.0.contains(id)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    pub epinonym: SynsetId,
    pub distance: f64,
}

/// Heap entry ordered as a min-heap on `(distance, epinonym, node)`.
#[derive(PartialEq)]
struct Entry {
    dist: f64,
    epi: SynsetId,
    node: SynsetId,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dist
            .total_cmp(&other.dist)
            .then_with(|| self.epi.cmp(&other.epi))
            .then_with(|| self.node.cmp(&other.node))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multi-source Dijkstra from the epinonyms along allowed outgoing relations,
/// edge cost `1 / weight`. Each reached synset gets the epinonym minimizing
/// `(distance, epinonym id)`. Depth limits play no part here.
pub fn assign_epinonyms(
    epi: &EpinonymSet,
    cfg: &TraversalConfig,
    repo: &Repository,
) -> Result<BTreeMap<SynsetId, Assignment>, TermsemError> {
    let mut best: BTreeMap<SynsetId, (f64, SynsetId)> = BTreeMap::new();
    let mut heap = BinaryHeap::new();
    for e in epi.iter() {
        repo.resolve_synset(e)?;
        best.insert(e.clone(), (0.0, e.clone()));
        heap.push(Reverse(Entry { dist: 0.0, epi: e.clone(), node: e.clone() }));
    }
    let mut done: BTreeSet<SynsetId> = BTreeSet::new();
    while let Some(Reverse(Entry { dist, epi: src, node })) = heap.pop() {
        if !done.insert(node.clone()) {
            continue;
        }
        let lex = repo.lexicon(&node.lexicon()).expect("reached synsets are resolvable");
        for rel in lex.outgoing(&node) {
            let Some(rule) = cfg.allowed(&rel.code) else { continue };
            if done.contains(&rel.target) || lex.synset(&rel.target).is_none() {
                continue;
            }
            let cand = (dist + 1.0 / rule.weight, src.clone());
            let better = match best.get(&rel.target) {
                None => true,
                Some((d, e)) => cand.0.total_cmp(d).then_with(|| cand.1.cmp(e)) == Ordering::Less,
            };
            if better {
                heap.push(Reverse(Entry { dist: cand.0, epi: cand.1.clone(), node: rel.target.clone() }));
                best.insert(rel.target.clone(), cand);
            }
        }
    }
    Ok(best.into_iter().map(|(id, (distance, epinonym))| (id, Assignment { epinonym, distance })).collect())
}

/// `synset_id TAB epinonym_id TAB distance`
pub fn render_assignments(map: &BTreeMap<SynsetId, Assignment>) -> String {
    let mut out = String::new();
    for (id, a) in map {
        writeln!(out, "{id}\t{}\t{}", a.epinonym, a.distance).unwrap();
    }
    out
}
