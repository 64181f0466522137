//! Per-language coverage statistics and per-POS breakdowns.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use thiserror::Error;

use crate::ids::{IliId, Lang, Pos};
use crate::repo::Repository;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("no lexicon loaded for language {0}")]
    UnknownLanguage(Lang),
    #[error("core percentage requested but no core list is available")]
    MissingCoreList,
    #[error("stats table line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// A percentage held as an integer number of tenths, rendered with one
/// decimal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pct(pub u32);

impl Pct {
    /// `num / den * 100`, rounded half-up to one decimal in exact integer
    /// arithmetic. Zero when `den` is zero.
    pub fn of(num: usize, den: usize) -> Pct {
        if den == 0 {
            return Pct(0);
        }
        let (num, den) = (num as u128, den as u128);
        Pct(((2000 * num + den) / (2 * den)) as u32)
    }

    pub fn tenths(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Pct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.0 / 10, self.0 % 10)
    }
}

impl FromStr for Pct {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("bad percentage `{s}`");
        let (int, frac) = s.split_once('.').ok_or_else(bad)?;
        if frac.len() != 1 || int.is_empty() || !int.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let int: u32 = int.parse().map_err(|_| bad())?;
        let frac: u32 = frac.parse().map_err(|_| bad())?;
        Ok(Pct(int * 10 + frac))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LangStats {
    pub lang: Lang,
    pub synsets: usize,
    /// Distinct `(lemma, pos)` pairs.
    pub words: usize,
    /// Distinct written forms; equal to `words` in this model.
    pub forms: usize,
    pub senses: usize,
    pub core_pct: Option<Pct>,
    pub cili_pct: Pct,
    pub def_pct: Pct,
    pub ex_pct: Pct,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosRow {
    pub lang: Lang,
    pub pos: Pos,
    pub synsets: usize,
    pub synsets_pct: Pct,
    pub words: usize,
    pub words_pct: Pct,
    pub senses: usize,
    pub senses_pct: Pct,
}

fn check_lang(repo: &Repository, lang: &Lang) -> Result<(), StatsError> {
    if repo.lexicons_for(lang).next().is_none() {
        return Err(StatsError::UnknownLanguage(lang.clone()));
    }
    Ok(())
}

/// Summary statistics over every lexicon of `lang`. `core_pct` is the
/// share of `core_list` ILI records realized by a synset with at least one
/// variant; it is `None` without a list.
pub fn compute_stats(repo: &Repository, lang: &Lang, core_list: Option<&BTreeSet<IliId>>) -> Result<LangStats, StatsError> {
    check_lang(repo, lang)?;
    let (mut synsets, mut linked, mut glossed, mut exemplified, mut senses) = (0, 0, 0, 0, 0);
    let mut words: BTreeSet<(&str, Pos)> = BTreeSet::new();
    let mut lexicalized: BTreeSet<&IliId> = BTreeSet::new();
    for lex in repo.lexicons_for(lang) {
        for s in lex.synsets() {
            synsets += 1;
            glossed += usize::from(s.has_gloss());
            exemplified += usize::from(!s.examples.is_empty());
            if let Some(ili) = lex.ili_of(&s.id) {
                linked += 1;
                if lex.synset_variants(&s.id).next().is_some() {
                    lexicalized.insert(ili);
                }
            }
        }
        senses += lex.variants().len();
        words.extend(lex.variants().iter().map(|v| (v.lemma.as_str(), v.pos())));
    }
    let core_pct = core_list.map(|core| Pct::of(core.iter().filter(|c| lexicalized.contains(c)).count(), core.len()));
    Ok(LangStats {
        lang: lang.clone(),
        synsets,
        words: words.len(),
        forms: words.len(),
        senses,
        core_pct,
        cili_pct: Pct::of(linked, synsets),
        def_pct: Pct::of(glossed, synsets),
        ex_pct: Pct::of(exemplified, synsets),
    })
}

/// Like [`compute_stats`] but fails when no core list is available.
pub fn compute_stats_with_core(repo: &Repository, lang: &Lang, core_list: Option<&BTreeSet<IliId>>) -> Result<LangStats, StatsError> {
    let core = core_list.ok_or(StatsError::MissingCoreList)?;
    compute_stats(repo, lang, Some(core))
}

/// Per-POS rows; POS without synsets are omitted.
pub fn compute_pos_stats(repo: &Repository, lang: &Lang) -> Result<Vec<PosRow>, StatsError> {
    check_lang(repo, lang)?;
    let mut synsets = [0usize; 4];
    let mut senses = [0usize; 4];
    let mut words: BTreeSet<(Pos, &str)> = BTreeSet::new();
    let slot = |p: Pos| Pos::ALL.iter().position(|&q| q == p).unwrap();
    for lex in repo.lexicons_for(lang) {
        for s in lex.synsets() {
            synsets[slot(s.pos())] += 1;
        }
        for v in lex.variants() {
            senses[slot(v.pos())] += 1;
            words.insert((v.pos(), v.lemma.as_str()));
        }
    }
    let word_counts: Vec<usize> = Pos::ALL.iter().map(|&p| words.iter().filter(|(q, _)| *q == p).count()).collect();
    let (ts, tw, tn) = (synsets.iter().sum(), words.len(), senses.iter().sum());
    Ok(Pos::ALL
        .iter()
        .enumerate()
        .filter(|&(i, _)| synsets[i] > 0)
        .map(|(i, &pos)| PosRow {
            lang: lang.clone(),
            pos,
            synsets: synsets[i],
            synsets_pct: Pct::of(synsets[i], ts),
            words: word_counts[i],
            words_pct: Pct::of(word_counts[i], tw),
            senses: senses[i],
            senses_pct: Pct::of(senses[i], tn),
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Tsv,
    Markdown,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tsv" => Ok(Format::Tsv),
            "markdown" | "md" => Ok(Format::Markdown),
            _ => Err(format!("unknown format `{s}` (expected tsv or markdown)")),
        }
    }
}

pub const STATS_HEADER: [&str; 9] =
    ["lang", "synsets", "words", "forms", "senses", "core_pct", "cili_pct", "def_pct", "ex_pct"];
pub const POS_HEADER: [&str; 8] =
    ["lang", "pos", "synsets", "synsets_pct", "words", "words_pct", "senses", "senses_pct"];

fn render_table(header: &[&str], rows: &[Vec<String>], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Tsv => {
            out.push_str(&header.join("\t"));
            out.push('\n');
            for r in rows {
                out.push_str(&r.join("\t"));
                out.push('\n');
            }
        }
        Format::Markdown => {
            writeln!(out, "| {} |", header.join(" | ")).unwrap();
            let align: Vec<&str> =
                header.iter().map(|h| if *h == "lang" || *h == "pos" { ":--" } else { "--:" }).collect();
            writeln!(out, "|{}|", align.join("|")).unwrap();
            for r in rows {
                writeln!(out, "| {} |", r.join(" | ")).unwrap();
            }
        }
    }
    out
}

pub fn render_report(report: &[LangStats], format: Format) -> String {
    let rows: Vec<Vec<String>> = report
        .iter()
        .map(|s| {
            vec![
                s.lang.to_string(),
                s.synsets.to_string(),
                s.words.to_string(),
                s.forms.to_string(),
                s.senses.to_string(),
                s.core_pct.map_or("-".to_string(), |p| p.to_string()),
                s.cili_pct.to_string(),
                s.def_pct.to_string(),
                s.ex_pct.to_string(),
            ]
        })
        .collect();
    render_table(&STATS_HEADER, &rows, format)
}

pub fn render_pos_report(rows: &[PosRow], format: Format) -> String {
    let rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.lang.to_string(),
                r.pos.long_name().to_string(),
                r.synsets.to_string(),
                r.synsets_pct.to_string(),
                r.words.to_string(),
                r.words_pct.to_string(),
                r.senses.to_string(),
                r.senses_pct.to_string(),
            ]
        })
        .collect();
    render_table(&POS_HEADER, &rows, format)
}

fn tsv_rows<'a>(text: &'a str, header: &[&str]) -> Result<Vec<(usize, Vec<&'a str>)>, StatsError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.split('\t').eq(header.iter().copied()) => {}
        _ => return Err(StatsError::Parse { line: 1, reason: "missing or unexpected header".into() }),
    }
    lines
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| {
            let cols: Vec<&str> = l.split('\t').collect();
            if cols.len() != header.len() {
                return Err(StatsError::Parse { line: i + 1, reason: format!("expected {} columns", header.len()) });
            }
            Ok((i + 1, cols))
        })
        .collect()
}

fn field<T: FromStr>(s: &str, line: usize) -> Result<T, StatsError> {
    s.parse().map_err(|_| StatsError::Parse { line, reason: format!("bad value `{s}`") })
}

/// Inverse of [`render_report`] with [`Format::Tsv`].
pub fn parse_report(text: &str) -> Result<Vec<LangStats>, StatsError> {
    tsv_rows(text, &STATS_HEADER)?
        .into_iter()
        .map(|(line, c)| {
            Ok(LangStats {
                lang: field(c[0], line)?,
                synsets: field(c[1], line)?,
                words: field(c[2], line)?,
                forms: field(c[3], line)?,
                senses: field(c[4], line)?,
                core_pct: if c[5] == "-" { None } else { Some(field(c[5], line)?) },
                cili_pct: field(c[6], line)?,
                def_pct: field(c[7], line)?,
                ex_pct: field(c[8], line)?,
            })
        })
        .collect()
}

/// Inverse of [`render_pos_report`] with [`Format::Tsv`].
pub fn parse_pos_report(text: &str) -> Result<Vec<PosRow>, StatsError> {
    tsv_rows(text, &POS_HEADER)?
        .into_iter()
        .map(|(line, c)| {
            let pos = Pos::ALL
                .into_iter()
                .find(|p| p.long_name() == c[1])
                .ok_or_else(|| StatsError::Parse { line, reason: format!("bad pos `{}`", c[1]) })?;
            Ok(PosRow {
                lang: field(c[0], line)?,
                pos,
                synsets: field(c[2], line)?,
                synsets_pct: field(c[3], line)?,
                words: field(c[4], line)?,
                words_pct: field(c[5], line)?,
                senses: field(c[6], line)?,
                senses_pct: field(c[7], line)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn half_up_rounding() {
        assert_eq!(Pct::of(1, 8).to_string(), "12.5");
        assert_eq!(Pct::of(1, 16).to_string(), "6.3"); // 6.25
        assert_eq!(Pct::of(1, 3).to_string(), "33.3");
        assert_eq!(Pct::of(2, 3).to_string(), "66.7");
        assert_eq!(Pct::of(5, 5).to_string(), "100.0");
        assert_eq!(Pct::of(0, 0).to_string(), "0.0");
        assert_eq!(Pct::of(1, 45826).to_string(), "0.0");
    }

    #[test]
    fn pct_parse() {
        assert_eq!("76.0".parse::<Pct>(), Ok(Pct(760)));
        assert!("76".parse::<Pct>().is_err());
        assert!("7.65".parse::<Pct>().is_err());
    }

    proptest! {
        #[test]
        fn pct_matches_float_rounding_away_from_ties(num in 0usize..100_000, extra in 1usize..100_000) {
            let den = num + extra;
            let exact = num as f64 * 1000.0 / den as f64;
            let p = Pct::of(num, den).tenths() as f64;
            prop_assert!((p - exact).abs() <= 0.5 + 1e-9);
            prop_assert_eq!(Pct::of(num, den).to_string().parse::<Pct>().unwrap(), Pct::of(num, den));
        }
    }
}
