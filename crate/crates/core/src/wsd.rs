//! Graph-based word sense disambiguation with personalized PageRank.
//!
//! Two modes:
//!
//! * `Ppr`: one walk per context. Teleport mass is split evenly over the
//!   known context words and then evenly over each word's senses.
//! * `PprW2w`: one walk per target word, with the target's own senses removed
//!   from the teleport vector.
//!
//! Context words are put in a canonical order before the teleport vector is
//! built, so permuting the context never changes a score, not even in the
//! last bit.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{personalized_pagerank, GraphError, KbGraph, PprParams, Teleport};
use crate::ids::{Lang, Pos, SynsetId};
use crate::repo::Repository;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WsdError {
    #[error("no context word has a known sense")]
    NoKnownContext,
    #[error("unknown lemma `{0}`")]
    UnknownLemma(String),
    #[error("system and gold annotations are not aligned: {0}")]
    AlignmentMismatch(String),
    #[error("bad context token `{0}` (expected lemma#pos#t or lemma#pos#c)")]
    BadToken(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ContextWord {
    pub lemma: String,
    pub pos: Option<Pos>,
    pub lang: Lang,
    pub is_target: bool,
}

impl ContextWord {
    pub fn new(lemma: &str, pos: Option<Pos>, lang: &Lang, is_target: bool) -> ContextWord {
        assert!(!lemma.is_empty(), "context lemma must be nonempty");
        ContextWord { lemma: lemma.to_string(), pos, lang: lang.clone(), is_target }
    }

    pub fn target(lemma: &str, pos: Option<Pos>, lang: &Lang) -> ContextWord {
        ContextWord::new(lemma, pos, lang, true)
    }

    pub fn context(lemma: &str, pos: Option<Pos>, lang: &Lang) -> ContextWord {
        ContextWord::new(lemma, pos, lang, false)
    }

    fn sort_key(&self) -> (&Lang, &str, Option<Pos>) {
        (&self.lang, &self.lemma, self.pos)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WsdMode {
    Ppr,
    PprW2w,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WsdFlags {
    pub monosemous: bool,
    pub unknown_lemma: bool,
    pub nonconverged: bool,
    /// w2w only: no other context mass was left, so the walk fell back to a
    /// uniform teleport over all nodes.
    pub fallback: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TargetResult {
    /// Position of the target in the input context.
    pub token: usize,
    pub lemma: String,
    /// Senses by descending score, ties by synset id.
    pub ranking: Vec<(SynsetId, f64)>,
    pub flags: WsdFlags,
}

impl TargetResult {
    pub fn best(&self) -> Option<&SynsetId> {
        self.ranking.first().map(|(s, _)| s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WsdResult {
    pub targets: Vec<TargetResult>,
    /// Context words with no sense in the graph.
    pub skipped_unknown: usize,
}

/// Senses of a word present in the graph, as `(synset, node)` sorted by id.
pub fn graph_senses(word: &ContextWord, g: &KbGraph, repo: &Repository) -> Vec<(SynsetId, usize)> {
    let synsets: BTreeSet<SynsetId> =
        repo.senses_of(&word.lemma, &word.lang, word.pos).into_iter().map(|v| v.synset.clone()).collect();
    synsets.into_iter().filter_map(|s| g.node_of_synset(&s).map(|n| (s, n))).collect()
}

/// Teleport over the senses of the words in `known` (given as indexes into
/// `senses`), split per word and then per sense. `None` when no mass is left
/// after removing `excluded` nodes.
fn context_teleport(
    ctx: &[ContextWord],
    senses: &[Vec<(SynsetId, usize)>],
    known: &[usize],
    excluded: &BTreeSet<usize>,
    n: usize,
) -> Result<Option<Teleport>, GraphError> {
    let mut order: Vec<usize> = known.to_vec();
    order.sort_by(|&a, &b| ctx[a].sort_key().cmp(&ctx[b].sort_key()));
    if order.is_empty() {
        return Ok(None);
    }
    let per_word = 1.0 / order.len() as f64;
    let mut weights: BTreeMap<usize, f64> = BTreeMap::new();
    for i in order {
        let per_sense = per_word / senses[i].len() as f64;
        for &(_, node) in &senses[i] {
            if !excluded.contains(&node) {
                *weights.entry(node).or_default() += per_sense;
            }
        }
    }
    if weights.is_empty() {
        return Ok(None);
    }
    Teleport::from_weights(n, weights).map(Some)
}

fn rank_senses(senses: &[(SynsetId, usize)], scores: &[f64]) -> Vec<(SynsetId, f64)> {
    let mut ranked: Vec<(SynsetId, f64)> = senses.iter().map(|(s, n)| (s.clone(), scores[*n])).collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked
}

struct Resolved {
    senses: Vec<Vec<(SynsetId, usize)>>,
    known: Vec<usize>,
}

fn resolve(ctx: &[ContextWord], g: &KbGraph, repo: &Repository) -> Result<Resolved, WsdError> {
    let senses: Vec<_> = ctx.iter().map(|w| graph_senses(w, g, repo)).collect();
    let known: Vec<usize> = (0..ctx.len()).filter(|&i| !senses[i].is_empty()).collect();
    if known.is_empty() {
        return Err(WsdError::NoKnownContext);
    }
    Ok(Resolved { senses, known })
}

fn unknown_target(token: usize, word: &ContextWord) -> TargetResult {
    TargetResult {
        token,
        lemma: word.lemma.clone(),
        ranking: Vec::new(),
        flags: WsdFlags { unknown_lemma: true, ..WsdFlags::default() },
    }
}

/// Teleport vector of the single walk used by [`disambiguate_ppr`].
pub fn ppr_teleport(ctx: &[ContextWord], g: &KbGraph, repo: &Repository) -> Result<Teleport, WsdError> {
    let r = resolve(ctx, g, repo)?;
    let t = context_teleport(ctx, &r.senses, &r.known, &BTreeSet::new(), g.node_count())?;
    Ok(t.expect("known words carry mass"))
}

pub fn disambiguate_ppr(
    ctx: &[ContextWord],
    g: &KbGraph,
    repo: &Repository,
    params: &PprParams,
) -> Result<WsdResult, WsdError> {
    let r = resolve(ctx, g, repo)?;
    let teleport = context_teleport(ctx, &r.senses, &r.known, &BTreeSet::new(), g.node_count())?
        .expect("known words carry mass");
    let walk = personalized_pagerank(g, params, &teleport)?;

    let targets = ctx
        .iter()
        .enumerate()
        .filter(|(_, w)| w.is_target)
        .map(|(i, w)| {
            let senses = &r.senses[i];
            if senses.is_empty() {
                return unknown_target(i, w);
            }
            TargetResult {
                token: i,
                lemma: w.lemma.clone(),
                ranking: rank_senses(senses, &walk.scores),
                flags: WsdFlags {
                    monosemous: senses.len() == 1,
                    nonconverged: !walk.converged,
                    ..WsdFlags::default()
                },
            }
        })
        .collect();
    Ok(WsdResult { targets, skipped_unknown: ctx.len() - r.known.len() })
}

/// Teleport for the w2w walk of target `target`: every other known word
/// contributes, and the target's own sense nodes get zero mass. `None` means
/// nothing is left and the caller falls back to a uniform teleport.
pub fn w2w_teleport(
    ctx: &[ContextWord],
    target: usize,
    g: &KbGraph,
    repo: &Repository,
) -> Result<Option<Teleport>, WsdError> {
    let r = resolve(ctx, g, repo)?;
    w2w_teleport_resolved(ctx, &r, target, g.node_count()).map_err(WsdError::from)
}

fn w2w_teleport_resolved(
    ctx: &[ContextWord],
    r: &Resolved,
    target: usize,
    n: usize,
) -> Result<Option<Teleport>, GraphError> {
    let others: Vec<usize> = r.known.iter().copied().filter(|&i| i != target).collect();
    let excluded: BTreeSet<usize> = r.senses[target].iter().map(|&(_, node)| node).collect();
    context_teleport(ctx, &r.senses, &others, &excluded, n)
}

pub fn disambiguate_ppr_w2w(
    ctx: &[ContextWord],
    g: &KbGraph,
    repo: &Repository,
    params: &PprParams,
) -> Result<WsdResult, WsdError> {
    let r = resolve(ctx, g, repo)?;
    let mut targets = Vec::new();
    for (i, w) in ctx.iter().enumerate().filter(|(_, w)| w.is_target) {
        let senses = &r.senses[i];
        if senses.is_empty() {
            targets.push(unknown_target(i, w));
            continue;
        }
        let (teleport, fallback) = match w2w_teleport_resolved(ctx, &r, i, g.node_count())? {
            Some(t) => (t, false),
            None => (Teleport::uniform(g.node_count()), true),
        };
        let walk = personalized_pagerank(g, params, &teleport)?;
        targets.push(TargetResult {
            token: i,
            lemma: w.lemma.clone(),
            ranking: rank_senses(senses, &walk.scores),
            flags: WsdFlags { monosemous: senses.len() == 1, nonconverged: !walk.converged, fallback, ..WsdFlags::default() },
        });
    }
    Ok(WsdResult { targets, skipped_unknown: ctx.len() - r.known.len() })
}

pub fn disambiguate(
    mode: WsdMode,
    ctx: &[ContextWord],
    g: &KbGraph,
    repo: &Repository,
    params: &PprParams,
) -> Result<WsdResult, WsdError> {
    match mode {
        WsdMode::Ppr => disambiguate_ppr(ctx, g, repo, params),
        WsdMode::PprW2w => disambiguate_ppr_w2w(ctx, g, repo, params),
    }
}

/// Disambiguates independent contexts in parallel on the current rayon pool.
/// Results come back in input order.
pub fn disambiguate_batch(
    mode: WsdMode,
    contexts: &[Vec<ContextWord>],
    g: &KbGraph,
    repo: &Repository,
    params: &PprParams,
) -> Vec<Result<WsdResult, WsdError>> {
    contexts.par_iter().map(|ctx| disambiguate(mode, ctx, g, repo, params)).collect()
}

/// Picks the sense with the lowest sense index (normally 1).
pub fn first_sense_baseline(target: &ContextWord, repo: &Repository) -> Result<TargetResult, WsdError> {
    let senses = repo.senses_of(&target.lemma, &target.lang, target.pos);
    let first = senses
        .iter()
        .min_by(|a, b| (a.sense_index, &a.synset).cmp(&(b.sense_index, &b.synset)))
        .ok_or_else(|| WsdError::UnknownLemma(target.lemma.clone()))?;
    let distinct: BTreeSet<&SynsetId> = senses.iter().map(|v| &v.synset).collect();
    Ok(TargetResult {
        token: 0,
        lemma: target.lemma.clone(),
        ranking: vec![(first.synset.clone(), 1.0)],
        flags: WsdFlags { monosemous: distinct.len() == 1, ..WsdFlags::default() },
    })
}

/// Parses one batch line: whitespace-separated `lemma#pos#t|c` tokens.
/// `pos` may be `-` or empty for "any"; `_` in a lemma stands for a space.
pub fn parse_context_line(line: &str, lang: &Lang) -> Result<Vec<ContextWord>, WsdError> {
    line.split_whitespace()
        .map(|tok| {
            let bad = || WsdError::BadToken(tok.to_string());
            let mut parts = tok.rsplitn(3, '#');
            let (flag, pos, lemma) = match (parts.next(), parts.next(), parts.next()) {
                (Some(f), Some(p), Some(l)) => (f, p, l),
                _ => return Err(bad()),
            };
            let is_target = match flag {
                "t" => true,
                "c" => false,
                _ => return Err(bad()),
            };
            let pos = match pos {
                "" | "-" => None,
                p => Some(p.parse::<Pos>().map_err(|_| bad())?),
            };
            if lemma.is_empty() {
                return Err(bad());
            }
            Ok(ContextWord { lemma: lemma.replace('_', " "), pos, lang: lang.clone(), is_target })
        })
        .collect()
}

/// `token_index TAB synset_id TAB score`, one row per ranked sense.
pub fn render_result(result: &WsdResult) -> String {
    let mut out = String::new();
    for t in &result.targets {
        for (s, score) in &t.ranking {
            writeln!(out, "{}\t{}\t{}", t.token, s, score).unwrap();
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldTag {
    pub token: String,
    pub senses: BTreeSet<SynsetId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemTag {
    pub token: String,
    pub answer: Option<SynsetId>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scores {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub attempted: usize,
    pub correct: usize,
    pub total: usize,
    /// Nothing was attempted; precision is reported as 0.
    pub precision_undefined: bool,
}

/// Precision over attempted targets, recall over all gold targets.
pub fn evaluate(gold: &[GoldTag], system: &[SystemTag]) -> Result<Scores, WsdError> {
    let gold_map: BTreeMap<&str, &BTreeSet<SynsetId>> = gold.iter().map(|g| (g.token.as_str(), &g.senses)).collect();
    if gold_map.len() != gold.len() {
        return Err(WsdError::AlignmentMismatch("duplicate gold token id".into()));
    }
    let mut seen = BTreeSet::new();
    let (mut attempted, mut correct) = (0, 0);
    for s in system {
        let senses = gold_map
            .get(s.token.as_str())
            .ok_or_else(|| WsdError::AlignmentMismatch(format!("token `{}` not in gold", s.token)))?;
        if !seen.insert(s.token.as_str()) {
            return Err(WsdError::AlignmentMismatch(format!("token `{}` answered twice", s.token)));
        }
        if let Some(a) = &s.answer {
            attempted += 1;
            if senses.contains(a) {
                correct += 1;
            }
        }
    }
    let total = gold.len();
    let precision_undefined = attempted == 0;
    let precision = if precision_undefined { 0.0 } else { correct as f64 / attempted as f64 };
    let recall = if total == 0 { 0.0 } else { correct as f64 / total as f64 };
    let f1 = if precision + recall > 0.0 { 2.0 * precision * recall / (precision + recall) } else { 0.0 };
    Ok(Scores { precision, recall, f1, attempted, correct, total, precision_undefined })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sid(s: &str) -> SynsetId {
        s.parse().unwrap()
    }

    fn tag(token: &str, s: &str) -> GoldTag {
        GoldTag { token: token.into(), senses: [sid(s)].into_iter().collect() }
    }

    fn ans(token: &str, s: Option<&str>) -> SystemTag {
        SystemTag { token: token.into(), answer: s.map(sid) }
    }

    #[test]
    fn perfect_system() {
        let gold = vec![tag("t1", "eng-30-00000001-n"), tag("t2", "eng-30-00000002-n")];
        let sys = vec![ans("t1", Some("eng-30-00000001-n")), ans("t2", Some("eng-30-00000002-n"))];
        let s = evaluate(&gold, &sys).unwrap();
        assert_eq!((s.precision, s.recall, s.f1), (1.0, 1.0, 1.0));
    }

    #[test]
    fn nothing_attempted() {
        let gold = vec![tag("t1", "eng-30-00000001-n")];
        let s = evaluate(&gold, &[ans("t1", None)]).unwrap();
        assert!(s.precision_undefined);
        assert_eq!((s.precision, s.recall, s.f1), (0.0, 0.0, 0.0));
    }

    #[test]
    fn three_of_four() {
        let gold: Vec<GoldTag> = (0..4).map(|i| tag(&format!("t{i}"), &format!("eng-30-0000000{i}-n"))).collect();
        let mut sys: Vec<SystemTag> =
            (0..3).map(|i| ans(&format!("t{i}"), Some(&format!("eng-30-0000000{i}-n")))).collect();
        sys.push(ans("t3", Some("eng-30-00000009-n")));
        let s = evaluate(&gold, &sys).unwrap();
        assert_eq!((s.precision, s.recall), (0.75, 0.75));
        assert!((s.f1 - 0.75).abs() < 1e-15);
    }

    #[test]
    fn misaligned_system() {
        let gold = vec![tag("t1", "eng-30-00000001-n")];
        assert!(matches!(evaluate(&gold, &[ans("zz", None)]), Err(WsdError::AlignmentMismatch(_))));
        let twice = [ans("t1", None), ans("t1", None)];
        assert!(matches!(evaluate(&gold, &twice), Err(WsdError::AlignmentMismatch(_))));
    }

    #[test]
    fn context_line_tokens() {
        let eng: Lang = "eng".parse().unwrap();
        let ctx = parse_context_line("cell#n#t  prison#-#c motor_vehicle##c", &eng).unwrap();
        assert_eq!(ctx.len(), 3);
        assert_eq!((ctx[0].lemma.as_str(), ctx[0].pos, ctx[0].is_target), ("cell", Some(Pos::Noun), true));
        assert_eq!((ctx[1].pos, ctx[1].is_target), (None, false));
        assert_eq!(ctx[2].lemma, "motor vehicle");
        assert!(parse_context_line("cell#n", &eng).is_err());
        assert!(parse_context_line("cell#x#t", &eng).is_err());
        assert!(parse_context_line("cell#n#q", &eng).is_err());
        assert!(parse_context_line("#n#t", &eng).is_err());
    }
}
