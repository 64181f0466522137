//! Turtle export following the lemon lexicon model.
//!
//! IRI templates (`{lex}` is `{lang}-{version}`):
//!
//! | resource | IRI |
//! |---|---|
//! | lexicon | `{base}/{lex}/lexicon` |
//! | entry | `{base}/{lex}/entry/{enc(lemma)}-{pos}` |
//! | form | `{entry}#form` |
//! | sense | `{base}/{lex}/sense/{enc(lemma)}-{synset_id}` |
//! | synset | `{base}/{lex}/synset/{synset_id}` |
//! | ILI record | `{base}/ili/{ili_id}` |
//! | TO feature | `{base}/to/{enc(name)}` |
//! | domain | `{base}/domain/{enc(label)}` |
//! | vocabulary | `{base}/ontology#{local}` |
//!
//! `enc` percent-encodes every byte outside `A-Za-z0-9-._~`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{self, Write};

use percent_encoding::{percent_decode_str, utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};
use thiserror::Error;

use crate::ids::{IliId, Pos, SynsetId, Version};
use crate::model::Lexicon;
use crate::overlay::SumoRel;
use crate::repo::Repository;
use crate::termsem::Assignment;

pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";
pub const SKOS: &str = "http://www.w3.org/2004/02/skos/core#";
pub const LEMON: &str = "http://lemon-model.net/lemon#";
pub const WN: &str = "http://wordnet-rdf.princeton.edu/ontology#";
pub const SUMO: &str = "http://www.ontologyportal.org/SUMO.owl#";

const UNRESERVED: &AsciiSet = &NON_ALPHANUMERIC.remove(b'-').remove(b'.').remove(b'_').remove(b'~');

/// Percent-encodes a path segment.
pub fn encode(segment: &str) -> String {
    utf8_percent_encode(segment, UNRESERVED).to_string()
}

/// Inverse of [`encode`].
pub fn decode(segment: &str) -> Option<String> {
    percent_decode_str(segment).decode_utf8().ok().map(|c| c.into_owned())
}

#[derive(Debug, Error)]
pub enum RdfError {
    #[error("invalid IRI `{0}`")]
    InvalidIri(String),
    #[error("prefix `{0}` bound twice")]
    PrefixCollision(String),
    #[error("no version map loaded for {0} -> {1}")]
    MissingVersionMap(Version, Version),
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn check_iri(iri: &str) -> Result<(), RdfError> {
    let scheme_ok = iri.split_once(':').is_some_and(|(s, rest)| {
        !rest.is_empty()
            && s.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
            && s.chars().all(|c| c.is_ascii_alphanumeric() || "+-.".contains(c))
    });
    let chars_ok = !iri.chars().any(|c| c.is_control() || c == ' ' || "<>\"{}|^`\\".contains(c));
    if scheme_ok && chars_ok {
        Ok(())
    } else {
        Err(RdfError::InvalidIri(iri.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RdfProfile {
    base: String,
    prefixes: BTreeMap<String, String>,
    pub alignment_predicate: String,
    pub include_sumo: bool,
    pub include_to: bool,
    pub include_domains: bool,
    pub include_blc: bool,
    pub include_epinonyms: bool,
}

impl RdfProfile {
    /// Profile with every overlay enabled and `skos:exactMatch` alignments.
    /// A trailing `/` on `base` is dropped.
    pub fn new(base: &str) -> Result<RdfProfile, RdfError> {
        let base = base.trim_end_matches('/').to_string();
        check_iri(&base)?;
        let mut prefixes = BTreeMap::new();
        for (p, ns) in [
            ("rdf", RDF.to_string()),
            ("rdfs", RDFS.to_string()),
            ("xsd", XSD.to_string()),
            ("skos", SKOS.to_string()),
            ("lemon", LEMON.to_string()),
            ("wn", WN.to_string()),
            ("sumo", SUMO.to_string()),
            ("mcr", format!("{base}/ontology#")),
        ] {
            prefixes.insert(p.to_string(), ns);
        }
        Ok(RdfProfile {
            base,
            prefixes,
            alignment_predicate: format!("{SKOS}exactMatch"),
            include_sumo: true,
            include_to: true,
            include_domains: true,
            include_blc: true,
            include_epinonyms: true,
        })
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn prefixes(&self) -> &BTreeMap<String, String> {
        &self.prefixes
    }

    /// Adds a prefix binding. Rebinding an existing prefix or namespace fails.
    pub fn bind(&mut self, prefix: &str, namespace: &str) -> Result<(), RdfError> {
        check_iri(namespace)?;
        let valid = prefix.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
            && prefix.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
        if !valid {
            return Err(RdfError::InvalidIri(format!("{prefix}:")));
        }
        if self.prefixes.contains_key(prefix) || self.prefixes.values().any(|n| n == namespace) {
            return Err(RdfError::PrefixCollision(prefix.to_string()));
        }
        self.prefixes.insert(prefix.to_string(), namespace.to_string());
        Ok(())
    }

    pub fn with_alignment_predicate(mut self, iri: &str) -> Result<RdfProfile, RdfError> {
        check_iri(iri)?;
        self.alignment_predicate = iri.to_string();
        Ok(self)
    }

    pub fn vocab(&self, local: &str) -> String {
        format!("{}/ontology#{}", self.base, encode(local))
    }

    pub fn lexicon_iri(&self, lex: &Lexicon) -> String {
        format!("{}/{}/lexicon", self.base, lex.key())
    }

    pub fn entry_iri(&self, synset: &SynsetId, lemma: &str, pos: Pos) -> String {
        format!("{}/{}/entry/{}-{}", self.base, synset.lexicon(), encode(lemma), pos)
    }

    pub fn sense_iri(&self, lemma: &str, synset: &SynsetId) -> String {
        format!("{}/{}/sense/{}-{}", self.base, synset.lexicon(), encode(lemma), synset)
    }

    pub fn synset_iri(&self, synset: &SynsetId) -> String {
        format!("{}/{}/synset/{}", self.base, synset.lexicon(), synset)
    }

    pub fn ili_iri(&self, ili: &IliId) -> String {
        format!("{}/ili/{}", self.base, ili)
    }

    pub fn feature_iri(&self, name: &str) -> String {
        format!("{}/to/{}", self.base, encode(name))
    }

    pub fn domain_iri(&self, label: &str) -> String {
        format!("{}/domain/{}", self.base, encode(label))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Object {
    Iri(String),
    /// Literal with a language tag.
    LangString(String, String),
    /// Literal with an explicit datatype IRI.
    Typed(String, String),
    Plain(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub subject: String,
    pub predicate: String,
    pub object: Object,
}

fn t(subject: &str, predicate: impl Into<String>, object: Object) -> Triple {
    Triple { subject: subject.to_string(), predicate: predicate.into(), object }
}

fn iri(s: impl Into<String>) -> Object {
    Object::Iri(s.into())
}

fn pos_iri(pos: Pos) -> Object {
    iri(format!("{WN}{}", pos.long_name().to_lowercase()))
}

/// Every triple describing one lexicon: the lexicon node, entries, forms,
/// senses, synsets, their relations and ILI links.
pub fn lexicon_triples(repo: &Repository, lex: &Lexicon, p: &RdfProfile) -> Vec<Triple> {
    let lang = lex.key().lang.bcp47().to_string();
    let lexicon = p.lexicon_iri(lex);
    let mut out = vec![
        t(&lexicon, format!("{RDF}type"), iri(format!("{LEMON}Lexicon"))),
        t(&lexicon, format!("{LEMON}language"), Object::Plain(lang.clone())),
    ];
    let mut entries: BTreeMap<String, (&str, Pos)> = BTreeMap::new();
    for v in lex.variants() {
        let entry = p.entry_iri(&v.synset, &v.lemma, v.pos());
        let sense = p.sense_iri(&v.lemma, &v.synset);
        out.push(t(&entry, format!("{LEMON}sense"), iri(&sense)));
        out.push(t(&sense, format!("{RDF}type"), iri(format!("{LEMON}LexicalSense"))));
        out.push(t(&sense, format!("{LEMON}reference"), iri(p.synset_iri(&v.synset))));
        out.push(t(&sense, format!("{WN}sense_number"), Object::Typed(v.sense_index.to_string(), format!("{XSD}integer"))));
        out.push(t(&sense, p.vocab("confidence"), Object::Typed(v.confidence.to_string(), format!("{XSD}decimal"))));
        out.push(t(&sense, p.vocab("source"), Object::Plain(v.source.clone())));
        entries.insert(entry, (&v.lemma, v.pos()));
    }
    for (entry, (lemma, pos)) in &entries {
        let form = format!("{entry}#form");
        out.push(t(&lexicon, format!("{LEMON}entry"), iri(entry)));
        out.push(t(entry, format!("{RDF}type"), iri(format!("{LEMON}LexicalEntry"))));
        out.push(t(entry, format!("{LEMON}canonicalForm"), iri(&form)));
        out.push(t(entry, format!("{WN}part_of_speech"), pos_iri(*pos)));
        out.push(t(&form, format!("{RDF}type"), iri(format!("{LEMON}Form"))));
        out.push(t(&form, format!("{LEMON}writtenRep"), Object::LangString(lemma.to_string(), lang.clone())));
    }
    for s in lex.synsets() {
        let node = p.synset_iri(&s.id);
        out.push(t(&node, format!("{RDF}type"), iri(format!("{WN}Synset"))));
        out.push(t(&node, format!("{WN}part_of_speech"), pos_iri(s.pos())));
        if let Some(g) = s.gloss.as_deref().filter(|g| !g.is_empty()) {
            out.push(t(&node, format!("{WN}gloss"), Object::LangString(g.to_string(), lang.clone())));
        }
        for ex in &s.examples {
            out.push(t(&node, format!("{WN}example"), Object::LangString(ex.clone(), lang.clone())));
        }
        if let Some(ili) = lex.ili_of(&s.id) {
            out.push(t(&node, p.vocab("ili"), iri(p.ili_iri(ili))));
        }
    }
    for r in lex.relations() {
        let name = repo.inventory().get(&r.code).map_or_else(|| format!("rel_{}", r.code), |d| d.name.clone());
        out.push(t(&p.synset_iri(&r.source), p.vocab(&name), iri(p.synset_iri(&r.target))));
    }
    out
}

/// One `mcr:ILIRecord` typing triple per ILI record.
pub fn ili_triples(repo: &Repository, p: &RdfProfile) -> Vec<Triple> {
    let ty = p.vocab("ILIRecord");
    repo.ili().iter().map(|i| t(&p.ili_iri(i), format!("{RDF}type"), iri(&ty))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Overlay {
    Sumo,
    TopOntology,
    Domains,
    Blc,
}

impl Overlay {
    pub const ALL: [Overlay; 4] = [Overlay::Sumo, Overlay::TopOntology, Overlay::Domains, Overlay::Blc];

    pub fn name(self) -> &'static str {
        match self {
            Overlay::Sumo => "sumo",
            Overlay::TopOntology => "to",
            Overlay::Domains => "domains",
            Overlay::Blc => "blc",
        }
    }

    pub fn enabled(self, p: &RdfProfile) -> bool {
        match self {
            Overlay::Sumo => p.include_sumo,
            Overlay::TopOntology => p.include_to,
            Overlay::Domains => p.include_domains,
            Overlay::Blc => p.include_blc,
        }
    }
}

pub fn overlay_triples(repo: &Repository, overlay: Overlay, p: &RdfProfile) -> Vec<Triple> {
    let o = repo.overlay();
    let mut out = Vec::new();
    match overlay {
        Overlay::Sumo => {
            for (ili, m) in &o.sumo {
                let pred = match m.rel {
                    SumoRel::Equivalent => "sumoEquivalent",
                    SumoRel::Subsumed => "sumoSubsumedBy",
                    SumoRel::Instance => "sumoInstanceOf",
                };
                out.push(t(&p.ili_iri(ili), p.vocab(pred), iri(format!("{SUMO}{}", encode(&m.term)))));
            }
        }
        Overlay::TopOntology => {
            for f in o.to_hierarchy.iter() {
                let node = p.feature_iri(&f.name);
                out.push(t(&node, format!("{RDF}type"), iri(p.vocab("TopConcept"))));
                out.push(t(&node, format!("{RDFS}label"), Object::Plain(f.name.clone())));
                for parent in f.parents.iter().filter_map(|id| o.to_hierarchy.get(*id)) {
                    out.push(t(&node, format!("{RDFS}subClassOf"), iri(p.feature_iri(&parent.name))));
                }
            }
            for (ili, feats) in &o.to_features {
                for f in feats.iter().filter_map(|id| o.to_hierarchy.get(*id)) {
                    out.push(t(&p.ili_iri(ili), p.vocab("topConcept"), iri(p.feature_iri(&f.name))));
                }
            }
        }
        Overlay::Domains => {
            for (label, parent) in o.domain_hierarchy.labels() {
                let node = p.domain_iri(label);
                out.push(t(&node, format!("{RDF}type"), iri(p.vocab("Domain"))));
                out.push(t(&node, format!("{RDFS}label"), Object::Plain(label.to_string())));
                if let Some(parent) = parent {
                    out.push(t(&node, format!("{SKOS}broader"), iri(p.domain_iri(parent))));
                }
            }
            for (ili, labels) in &o.domains {
                for l in labels {
                    out.push(t(&p.ili_iri(ili), p.vocab("domain"), iri(p.domain_iri(l))));
                }
            }
        }
        Overlay::Blc => {
            for (ili, blc) in &o.blc {
                out.push(t(&p.ili_iri(ili), p.vocab("blc"), iri(p.ili_iri(blc))));
            }
        }
    }
    out
}

/// One alignment triple per `(a, b)` pair of the version map.
pub fn alignment_triples(repo: &Repository, from: &Version, to: &Version, p: &RdfProfile) -> Result<Vec<Triple>, RdfError> {
    let map = repo
        .version_map(from, to)
        .ok_or_else(|| RdfError::MissingVersionMap(from.clone(), to.clone()))?;
    Ok(map
        .iter()
        .flat_map(|(a, bs)| bs.iter().map(move |b| t(&p.ili_iri(a), p.alignment_predicate.clone(), iri(p.ili_iri(b)))))
        .collect())
}

/// `mcr:epinonym` and `mcr:epinonymDistance` per assigned synset.
pub fn epinonym_triples(assignments: &BTreeMap<SynsetId, Assignment>, p: &RdfProfile) -> Vec<Triple> {
    let mut out = Vec::new();
    for (id, a) in assignments {
        let node = p.synset_iri(id);
        out.push(t(&node, p.vocab("epinonym"), iri(p.synset_iri(&a.epinonym))));
        out.push(t(&node, p.vocab("epinonymDistance"), Object::Typed(a.distance.to_string(), format!("{XSD}decimal"))));
    }
    out
}

/// Every triple of a full export: lexicons, ILI records and enabled overlays.
pub fn repository_triples(repo: &Repository, p: &RdfProfile) -> Vec<Triple> {
    let mut all: Vec<Triple> = repo.lexicons().flat_map(|l| lexicon_triples(repo, l, p)).collect();
    all.extend(ili_triples(repo, p));
    for o in Overlay::ALL.into_iter().filter(|o| o.enabled(p)) {
        all.extend(overlay_triples(repo, o, p));
    }
    all
}

fn escape_literal(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if c.is_control() => write!(out, "\\u{:04X}", c as u32).unwrap(),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Writes `iri` as a prefixed name when the local part is a plain
/// identifier, else in angle brackets.
fn term(iri: &str, p: &RdfProfile) -> String {
    for (prefix, ns) in &p.prefixes {
        if let Some(local) = iri.strip_prefix(ns.as_str()) {
            let simple = local.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && local.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if simple {
                return format!("{prefix}:{local}");
            }
        }
    }
    format!("<{iri}>")
}

fn object(o: &Object, p: &RdfProfile) -> String {
    match o {
        Object::Iri(i) => term(i, p),
        Object::LangString(v, lang) => format!("{}@{lang}", escape_literal(v)),
        Object::Typed(v, dt) => format!("{}^^{}", escape_literal(v), term(dt, p)),
        Object::Plain(v) => escape_literal(v),
    }
}

/// Sorts and deduplicates `triples`, then writes the prefix block and one
/// subject group per subject IRI. Returns the number of triples written.
pub fn write_turtle(mut triples: Vec<Triple>, p: &RdfProfile, out: &mut dyn Write) -> Result<usize, RdfError> {
    for (prefix, ns) in &p.prefixes {
        writeln!(out, "@prefix {prefix}: <{ns}> .")?;
    }
    triples.sort();
    triples.dedup();
    let mut i = 0;
    while i < triples.len() {
        let subject = &triples[i].subject;
        let end = triples[i..].iter().position(|x| &x.subject != subject).map_or(triples.len(), |n| i + n);
        let mut block = format!("\n{}", term(subject, p));
        for (k, x) in triples[i..end].iter().enumerate() {
            let sep = if k + 1 == end - i { " ." } else { " ;" };
            write!(block, "\n    {} {}{sep}", term(&x.predicate, p), object(&x.object, p)).unwrap();
        }
        writeln!(out, "{block}")?;
        i = end;
    }
    Ok(triples.len())
}

/// Full export to one Turtle document.
pub fn export_turtle(repo: &Repository, p: &RdfProfile, out: &mut dyn Write) -> Result<usize, RdfError> {
    write_turtle(repository_triples(repo, p), p, out)
}

pub fn export_version_alignment(
    repo: &Repository,
    versions: (&Version, &Version),
    p: &RdfProfile,
    out: &mut dyn Write,
) -> Result<usize, RdfError> {
    write_turtle(alignment_triples(repo, versions.0, versions.1, p)?, p, out)
}

pub fn export_epinonyms(
    assignments: &BTreeMap<SynsetId, Assignment>,
    p: &RdfProfile,
    out: &mut dyn Write,
) -> Result<usize, RdfError> {
    write_turtle(epinonym_triples(assignments, p), p, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encoding_is_reversible() {
        for s in ["teléfono móvil", "a/b#c?d", "100%", "x-y_z.~", "l'eau"] {
            let e = encode(s);
            assert!(e.bytes().all(|b| b.is_ascii_alphanumeric() || b"-._~%".contains(&b)), "{e}");
            assert_eq!(decode(&e).as_deref(), Some(s));
        }
        assert_eq!(encode("teléfono móvil"), "tel%C3%A9fono%20m%C3%B3vil");
    }

    #[test]
    fn profile_validation() {
        assert!(RdfProfile::new("http://example.org/mcr/").is_ok());
        assert!(RdfProfile::new("not an iri").is_err());
        assert!(RdfProfile::new("example.org").is_err());
        let mut p = RdfProfile::new("http://example.org/mcr").unwrap();
        assert_eq!(p.base(), "http://example.org/mcr");
        assert!(matches!(p.bind("wn", "http://other.org/#"), Err(RdfError::PrefixCollision(_))));
        assert!(matches!(p.bind("wn2", WN), Err(RdfError::PrefixCollision(_))));
        assert!(p.bind("ex", "http://example.com/#").is_ok());
    }

    #[test]
    fn literal_escapes() {
        assert_eq!(escape_literal("a\"b\\c\nd"), r#""a\"b\\c\nd""#);
    }
}
