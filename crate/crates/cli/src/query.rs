use std::collections::BTreeSet;
use std::fmt::Write as _;

use anyhow::anyhow;
use mcr_core::{Lang, Pos, Repository, SynsetId, Variant};

use crate::commands::{emit, parse_lang, Context};
use crate::failure::{Classify, Failure, Outcome};
use crate::QueryArgs;

pub fn cmd_query(ctx: &Context, a: &QueryArgs) -> Outcome {
    let lang = a.lang.as_deref().map(parse_lang).transpose()?;
    let pos = a.pos.as_deref().map(|p| p.parse::<Pos>().input_ctx(format!("part of speech `{p}`"))).transpose()?;
    let repo = ctx.load()?;

    let senses: Vec<&Variant> = match a.item.parse::<SynsetId>() {
        Ok(id) => {
            let keep = lang.as_ref().is_none_or(|l| id.lang() == l) && pos.is_none_or(|p| id.pos() == p);
            if !keep || repo.resolve_synset(&id).is_err() {
                return Err(Failure::domain(anyhow!("unknown synset {id}")));
            }
            repo.lexicon(&id.lexicon()).map(|l| l.synset_variants(&id).collect()).unwrap_or_default()
        }
        Err(_) => {
            let langs: Vec<Lang> = match &lang {
                Some(l) => vec![l.clone()],
                None => repo.lexicons().map(|l| l.key().lang.clone()).collect::<BTreeSet<_>>().into_iter().collect(),
            };
            langs.iter().flat_map(|l| repo.senses_of(&a.item, l, pos)).collect()
        }
    };
    let synsets: Vec<SynsetId> = match a.item.parse::<SynsetId>() {
        Ok(id) => vec![id],
        Err(_) if senses.is_empty() => return Err(Failure::domain(anyhow!("unknown lemma `{}`", a.item))),
        Err(_) => {
            let mut seen = BTreeSet::new();
            senses.iter().map(|v| v.synset.clone()).filter(|s| seen.insert(s.clone())).collect()
        }
    };

    let mut out = String::new();
    for v in &senses {
        writeln!(out, "sense\t{}\t{}\t{}", v.lemma, v.synset, v.sense_index).unwrap();
    }
    for id in &synsets {
        describe(&repo, id, &mut out);
    }
    emit(&out)
}

/// Detail rows for one synset.
fn describe(repo: &Repository, id: &SynsetId, out: &mut String) {
    let Some(lex) = repo.lexicon(&id.lexicon()) else { return };
    if let Some(g) = lex.synset(id).and_then(|s| s.gloss.as_ref()) {
        writeln!(out, "gloss\t{id}\t{g}").unwrap();
    }
    let name = |code| repo.inventory().get(code).map_or("-", |d| d.name.as_str());
    for r in lex.outgoing(id).chain(lex.incoming(id)) {
        writeln!(out, "rel\t{}\t{}\t{}\t{}", r.source, r.code, name(&r.code), r.target).unwrap();
    }
    let Some(ili) = lex.ili_of(id) else { return };
    writeln!(out, "ili\t{id}\t{ili}").unwrap();
    let o = repo.overlay();
    if let Some(m) = o.sumo_of(ili) {
        writeln!(out, "sumo\t{id}\t{}\t{}", m.rel.symbol(), m.term).unwrap();
    }
    for f in o.features_of(ili) {
        writeln!(out, "to\t{id}\t{}", f.name).unwrap();
    }
    for d in o.domains_of(ili) {
        writeln!(out, "domain\t{id}\t{d}").unwrap();
    }
    if let Some(b) = o.blc_of(ili) {
        writeln!(out, "blc\t{id}\t{b}").unwrap();
    }
    let others: BTreeSet<&Lang> = repo.lexicons().map(|l| &l.key().lang).filter(|l| *l != id.lang()).collect();
    for l in others {
        for e in repo.interlingual(id, l).unwrap_or_default() {
            writeln!(out, "equiv\t{id}\t{e}").unwrap();
        }
    }
}
