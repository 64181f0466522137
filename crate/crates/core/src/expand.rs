//! Expand-model candidate generation: translating the variants of an
//! existing wordnet into a target language.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::ids::{Lang, Pos, SynsetId};
use crate::model::Lexicon;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExpandError {
    #[error("dictionary line {line}: {reason}")]
    Dictionary { line: usize, reason: String },
    #[error("alignment ({src}, {tgt}) out of range (source has {src_len} tokens, target {tgt_len})")]
    IndexOutOfRange { src: usize, tgt: usize, src_len: usize, tgt_len: usize },
    #[error("bad candidate line {line}: {reason}")]
    Candidate { line: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DictEntry {
    pub source: String,
    pub pos: Option<Pos>,
    pub target: String,
    pub definition: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BilingualDictionary {
    entries: Vec<DictEntry>,
    by_source: BTreeMap<String, Vec<usize>>,
}

fn clean_field(s: &str, what: &str) -> Result<String, String> {
    if s.is_empty() {
        Err(format!("empty {what}"))
    } else if s.contains(['\t', '\n', '\r']) {
        Err(format!("{what} contains a tab or line break"))
    } else {
        Ok(s.to_string())
    }
}

impl BilingualDictionary {
    pub fn new(entries: impl IntoIterator<Item = DictEntry>) -> Result<BilingualDictionary, ExpandError> {
        let mut dict = BilingualDictionary::default();
        for (i, e) in entries.into_iter().enumerate() {
            dict.push(e).map_err(|reason| ExpandError::Dictionary { line: i + 1, reason })?;
        }
        Ok(dict)
    }

    fn push(&mut self, e: DictEntry) -> Result<(), String> {
        clean_field(&e.source, "source lemma")?;
        clean_field(&e.target, "target lemma")?;
        if let Some(d) = &e.definition {
            clean_field(d, "definition")?;
        }
        self.by_source.entry(e.source.clone()).or_default().push(self.entries.len());
        self.entries.push(e);
        Ok(())
    }

    /// `src_lemma TAB pos|- TAB tgt_lemma [TAB definition]`; `#` comments.
    pub fn parse(text: &str) -> Result<BilingualDictionary, ExpandError> {
        let mut dict = BilingualDictionary::default();
        for (i, line) in text.split('\n').enumerate() {
            let err = |reason: String| ExpandError::Dictionary { line: i + 1, reason };
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if !(3..=4).contains(&cols.len()) {
                return Err(err(format!("expected 3 or 4 columns, found {}", cols.len())));
            }
            let pos = match cols[1] {
                "-" | "" => None,
                p => Some(p.parse::<Pos>().map_err(|e| err(e.to_string()))?),
            };
            let definition = cols.get(3).filter(|d| !d.is_empty() && **d != "-").map(|d| d.to_string());
            dict.push(DictEntry { source: cols[0].into(), pos, target: cols[2].into(), definition }).map_err(err)?;
        }
        Ok(dict)
    }

    pub fn entries(&self) -> &[DictEntry] {
        &self.entries
    }

    pub fn lookup(&self, source: &str) -> impl Iterator<Item = &DictEntry> {
        self.by_source.get(source).into_iter().flatten().map(|&i| &self.entries[i])
    }

    pub fn sources(&self) -> impl Iterator<Item = &str> {
        self.by_source.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Strategy {
    Monosemic,
    GlossOverlap,
    Parallel,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Monosemic => "monosemic",
            Strategy::GlossOverlap => "gloss_overlap",
            Strategy::Parallel => "parallel",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "monosemic" => Ok(Strategy::Monosemic),
            "gloss_overlap" => Ok(Strategy::GlossOverlap),
            "parallel" => Ok(Strategy::Parallel),
            _ => Err(format!("unknown strategy `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateVariant {
    pub lemma: String,
    /// Synset id in the target language.
    pub synset: SynsetId,
    pub strategy: Strategy,
    pub score: f64,
    pub evidence: String,
}

/// Distinct synsets of `lemma` in the lexicon, all POS.
fn synsets_of(lex: &Lexicon, lemma: &str) -> BTreeSet<SynsetId> {
    lex.lemma_variants(lemma).map(|v| v.synset.clone()).collect()
}

/// Translations of lemmas that belong to exactly one synset, score 1.0.
/// A dictionary POS, when given, must agree with that synset. Output sorted
/// by `(synset, lemma)`; evidence lists the source lemmas.
pub fn expand_monosemic(dict: &BilingualDictionary, source: &Lexicon, target: &Lang) -> Vec<CandidateVariant> {
    let mut found: BTreeMap<(SynsetId, String), BTreeSet<&str>> = BTreeMap::new();
    for src in dict.sources() {
        let synsets = synsets_of(source, src);
        if synsets.len() != 1 {
            continue;
        }
        let s = synsets.first().unwrap();
        for e in dict.lookup(src).filter(|e| e.pos.is_none_or(|p| p == s.pos())) {
            found.entry((s.with_lang(target), e.target.clone())).or_default().insert(src);
        }
    }
    found
        .into_iter()
        .map(|((synset, lemma), srcs)| CandidateVariant {
            lemma,
            synset,
            strategy: Strategy::Monosemic,
            score: 1.0,
            evidence: format!("src={}", srcs.into_iter().collect::<Vec<_>>().join(",")),
        })
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stopwords(HashSet<String>);

impl Stopwords {
    /// One word per line; blank lines and `#` comments ignored.
    pub fn parse(text: &str) -> Stopwords {
        Stopwords(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::to_lowercase)
                .collect(),
        )
    }

    /// The list shipped for `lang`; empty for languages without one.
    pub fn builtin(lang: &Lang) -> Stopwords {
        let text = match lang.as_str() {
            "eng" => include_str!("../stopwords/eng.txt"),
            "spa" => include_str!("../stopwords/spa.txt"),
            "cat" => include_str!("../stopwords/cat.txt"),
            "eus" => include_str!("../stopwords/eus.txt"),
            "gal" => include_str!("../stopwords/gal.txt"),
            "por" => include_str!("../stopwords/por.txt"),
            _ => "",
        };
        Stopwords::parse(text)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }
}

/// Lowercased alphanumeric word types minus stopwords.
pub fn content_words(text: &str, stop: &Stopwords) -> BTreeSet<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty() && !stop.contains(w))
        .map(str::to_string)
        .collect()
}

/// Type-level Dice coefficient and raw overlap count.
pub fn dice(a: &BTreeSet<String>, b: &BTreeSet<String>) -> (f64, usize) {
    let overlap = a.intersection(b).count();
    if a.is_empty() && b.is_empty() {
        return (0.0, 0);
    }
    (2.0 * overlap as f64 / (a.len() + b.len()) as f64, overlap)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct GlossOverlapOutput {
    pub candidates: Vec<CandidateVariant>,
    /// `(dictionary entry, sense)` pairs skipped because the sense has no gloss.
    pub missing_gloss: usize,
    /// Entries whose best senses tied.
    pub abstained: usize,
}

/// For polysemic lemmas: scores every sense gloss against each dictionary
/// definition and emits the translation on the single best sense when its
/// overlap reaches `max(min_overlap, 1)`. Ties abstain.
pub fn expand_gloss_overlap(
    dict: &BilingualDictionary,
    source: &Lexicon,
    target: &Lang,
    min_overlap: usize,
    stop: &Stopwords,
) -> GlossOverlapOutput {
    let need = min_overlap.max(1);
    let sources: Vec<&str> = dict.sources().collect();
    let per_lemma: Vec<GlossOverlapOutput> = sources
        .par_iter()
        .map(|src| {
            let mut out = GlossOverlapOutput::default();
            let synsets = synsets_of(source, src);
            if synsets.len() < 2 {
                return out;
            }
            for e in dict.lookup(src) {
                let Some(def) = &e.definition else { continue };
                let d = content_words(def, stop);
                let mut scored: Vec<(f64, usize, &SynsetId)> = Vec::new();
                for s in synsets.iter().filter(|s| e.pos.is_none_or(|p| p == s.pos())) {
                    match source.synset(s).and_then(|x| x.gloss.as_deref()).filter(|g| !g.is_empty()) {
                        None => out.missing_gloss += 1,
                        Some(g) => {
                            let (score, overlap) = dice(&content_words(g, stop), &d);
                            scored.push((score, overlap, s));
                        }
                    }
                }
                scored.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.2.cmp(b.2)));
                let Some(&(score, overlap, best)) = scored.first() else { continue };
                if scored.get(1).is_some_and(|second| second.0 == score) {
                    out.abstained += 1;
                    continue;
                }
                if overlap >= need {
                    out.candidates.push(CandidateVariant {
                        lemma: e.target.clone(),
                        synset: best.with_lang(target),
                        strategy: Strategy::GlossOverlap,
                        score,
                        evidence: format!("src={src};overlap={overlap}"),
                    });
                }
            }
            out
        })
        .collect();

    let mut merged = GlossOverlapOutput::default();
    for part in per_lemma {
        merged.candidates.extend(part.candidates);
        merged.missing_gloss += part.missing_gloss;
        merged.abstained += part.abstained;
    }
    merged.candidates.sort_by(|a, b| {
        (&a.synset, &a.lemma, &a.evidence).cmp(&(&b.synset, &b.lemma, &b.evidence)).then(b.score.total_cmp(&a.score))
    });
    merged.candidates.dedup_by(|b, a| a.synset == b.synset && a.lemma == b.lemma);
    merged
}

/// Counts `(target token, synset)` over alignment links whose source token
/// is sense-tagged. Score is the pair count over all links of that synset.
/// Pairs below `min_freq` are dropped. Output sorted by `(synset, lemma)`.
pub fn expand_parallel(
    tagged_source: &[(String, Option<SynsetId>)],
    aligned_target: &[String],
    alignments: &[(usize, usize)],
    min_freq: usize,
    target: &Lang,
) -> Result<Vec<CandidateVariant>, ExpandError> {
    let mut pairs: BTreeMap<(&SynsetId, &str), usize> = BTreeMap::new();
    let mut totals: BTreeMap<&SynsetId, usize> = BTreeMap::new();
    for &(src, tgt) in alignments {
        if src >= tagged_source.len() || tgt >= aligned_target.len() {
            return Err(ExpandError::IndexOutOfRange {
                src,
                tgt,
                src_len: tagged_source.len(),
                tgt_len: aligned_target.len(),
            });
        }
        if let Some(s) = &tagged_source[src].1 {
            *pairs.entry((s, aligned_target[tgt].as_str())).or_default() += 1;
            *totals.entry(s).or_default() += 1;
        }
    }
    Ok(pairs
        .into_iter()
        .filter(|&(_, n)| n >= min_freq)
        .map(|((s, lemma), n)| CandidateVariant {
            lemma: lemma.to_string(),
            synset: s.with_lang(target),
            strategy: Strategy::Parallel,
            score: n as f64 / totals[s] as f64,
            evidence: format!("count={n};total={}", totals[s]),
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CandidateScores {
    pub precision: f64,
    pub coverage: f64,
    pub emitted: usize,
    pub correct: usize,
    pub covered_synsets: usize,
    pub gold_synsets: usize,
    /// No candidates: precision is reported as 0.
    pub precision_undefined: bool,
}

/// Precision: candidates whose `(lemma, synset)` is in `gold`. Coverage:
/// distinct gold synsets with at least one correct candidate.
pub fn evaluate_candidates(candidates: &[CandidateVariant], gold: &Lexicon) -> CandidateScores {
    let mut covered = BTreeSet::new();
    let mut correct = 0;
    for c in candidates {
        if gold.synset_variants(&c.synset).any(|v| v.lemma == c.lemma) {
            correct += 1;
            covered.insert(&c.synset);
        }
    }
    let emitted = candidates.len();
    let gold_synsets = gold.synset_count();
    CandidateScores {
        precision: if emitted == 0 { 0.0 } else { correct as f64 / emitted as f64 },
        coverage: if gold_synsets == 0 { 0.0 } else { covered.len() as f64 / gold_synsets as f64 },
        emitted,
        correct,
        covered_synsets: covered.len(),
        gold_synsets,
        precision_undefined: emitted == 0,
    }
}

/// `lemma TAB synset_id TAB strategy TAB score TAB evidence`
pub fn render_candidates(candidates: &[CandidateVariant]) -> String {
    let mut out = String::new();
    for c in candidates {
        writeln!(out, "{}\t{}\t{}\t{}\t{}", c.lemma, c.synset, c.strategy, c.score, c.evidence).unwrap();
    }
    out
}

pub fn parse_candidates(text: &str) -> Result<Vec<CandidateVariant>, ExpandError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(i, l)| {
            let err = |reason: String| ExpandError::Candidate { line: i + 1, reason };
            let c: Vec<&str> = l.split('\t').collect();
            if c.len() != 5 {
                return Err(err(format!("expected 5 columns, found {}", c.len())));
            }
            Ok(CandidateVariant {
                lemma: c[0].to_string(),
                synset: c[1].parse().map_err(|e| err(format!("{e}")))?,
                strategy: c[2].parse().map_err(err)?,
                score: c[3].parse().map_err(|_| err(format!("bad score `{}`", c[3])))?,
                evidence: c[4].to_string(),
            })
        })
        .collect()
}

/// Parses aligned-corpus inputs: source tokens as `token` or `token/synset_id`,
/// target tokens whitespace separated, alignments as `i-j` pairs.
pub fn parse_tagged_tokens(text: &str) -> Result<Vec<(String, Option<SynsetId>)>, ExpandError> {
    text.split_whitespace()
        .enumerate()
        .map(|(i, tok)| match tok.rsplit_once('/') {
            Some((t, s)) if !t.is_empty() => s
                .parse()
                .map(|id| (t.to_string(), Some(id)))
                .map_err(|e| ExpandError::Candidate { line: i + 1, reason: format!("token `{tok}`: {e}") }),
            _ => Ok((tok.to_string(), None)),
        })
        .collect()
}

pub fn parse_alignments(text: &str) -> Result<Vec<(usize, usize)>, ExpandError> {
    text.split_whitespace()
        .enumerate()
        .map(|(i, pair)| {
            pair.split_once('-')
                .and_then(|(a, b)| Some((a.parse().ok()?, b.parse().ok()?)))
                .ok_or_else(|| ExpandError::Candidate { line: i + 1, reason: format!("bad alignment `{pair}`") })
        })
        .collect()
}
