//! Direct enumeration of the triples the Turtle exporter should produce.

use std::collections::HashSet;

use mcr_core::overlay::SumoRel;
use mcr_core::Repository;
use oxrdf::{Literal, NamedNode, Term, Triple};
use oxttl::TurtleParser;

pub const BASE: &str = "http://example.org/mcr";
pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const LEMON: &str = "http://lemon-model.net/lemon#";
pub const WN: &str = "http://wordnet-rdf.princeton.edu/ontology#";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";

pub fn parse(bytes: &[u8]) -> HashSet<Triple> {
    TurtleParser::new().for_slice(bytes).map(|t| t.expect("valid Turtle")).collect()
}

/// Byte-wise percent encoding of everything but ASCII alphanumerics and `-._~`.
pub fn enc(s: &str) -> String {
    s.bytes()
        .map(|b| {
            if b.is_ascii_alphanumeric() || b"-._~".contains(&b) {
                (b as char).to_string()
            } else {
                format!("%{b:02X}")
            }
        })
        .collect()
}

pub fn nn(s: impl Into<String>) -> NamedNode {
    NamedNode::new(s.into()).unwrap()
}

pub fn add(set: &mut HashSet<Triple>, s: &str, p: &str, o: impl Into<Term>) {
    set.insert(Triple::new(nn(s), nn(p), o));
}

pub fn pos_name(c: char) -> &'static str {
    match c {
        'n' => "noun",
        'v' => "verb",
        'a' => "adjective",
        'r' => "adverb",
        _ => unreachable!(),
    }
}

/// Triples the documented templates prescribe, enumerated from repository
/// records without touching the exporter.
pub fn expected(repo: &Repository) -> HashSet<Triple> {
    let mut out = HashSet::new();
    let voc = |l: &str| format!("{BASE}/ontology#{}", enc(l));
    let ili = |i: &dyn std::fmt::Display| format!("{BASE}/ili/{i}");
    for lex in repo.lexicons() {
        let key = lex.key().to_string();
        let tag = lex.key().lang.bcp47().to_string();
        let lexicon = format!("{BASE}/{key}/lexicon");
        add(&mut out, &lexicon, RDF_TYPE, nn(format!("{LEMON}Lexicon")));
        add(&mut out, &lexicon, &format!("{LEMON}language"), Literal::new_simple_literal(&tag));
        let synset = |id: &dyn std::fmt::Display| format!("{BASE}/{key}/synset/{id}");
        for v in lex.variants() {
            let id = v.synset.to_string();
            let pos = id.chars().last().unwrap();
            let entry = format!("{BASE}/{key}/entry/{}-{pos}", enc(&v.lemma));
            let form = format!("{entry}#form");
            let sense = format!("{BASE}/{key}/sense/{}-{id}", enc(&v.lemma));
            add(&mut out, &lexicon, &format!("{LEMON}entry"), nn(&entry));
            add(&mut out, &entry, RDF_TYPE, nn(format!("{LEMON}LexicalEntry")));
            add(&mut out, &entry, &format!("{LEMON}canonicalForm"), nn(&form));
            add(&mut out, &entry, &format!("{WN}part_of_speech"), nn(format!("{WN}{}", pos_name(pos))));
            add(&mut out, &entry, &format!("{LEMON}sense"), nn(&sense));
            add(&mut out, &form, RDF_TYPE, nn(format!("{LEMON}Form")));
            add(
                &mut out,
                &form,
                &format!("{LEMON}writtenRep"),
                Literal::new_language_tagged_literal(&v.lemma, &tag).unwrap(),
            );
            add(&mut out, &sense, RDF_TYPE, nn(format!("{LEMON}LexicalSense")));
            add(&mut out, &sense, &format!("{LEMON}reference"), nn(synset(&id)));
            add(
                &mut out,
                &sense,
                &format!("{WN}sense_number"),
                Literal::new_typed_literal(v.sense_index.to_string(), nn(format!("{XSD}integer"))),
            );
            add(
                &mut out,
                &sense,
                &voc("confidence"),
                Literal::new_typed_literal(v.confidence.as_str(), nn(format!("{XSD}decimal"))),
            );
            add(&mut out, &sense, &voc("source"), Literal::new_simple_literal(&v.source));
        }
        for s in lex.synsets() {
            let node = synset(&s.id);
            let pos = s.id.to_string().chars().last().unwrap();
            add(&mut out, &node, RDF_TYPE, nn(format!("{WN}Synset")));
            add(&mut out, &node, &format!("{WN}part_of_speech"), nn(format!("{WN}{}", pos_name(pos))));
            if let Some(g) = &s.gloss {
                add(&mut out, &node, &format!("{WN}gloss"), Literal::new_language_tagged_literal(g, &tag).unwrap());
            }
            for e in &s.examples {
                add(&mut out, &node, &format!("{WN}example"), Literal::new_language_tagged_literal(e, &tag).unwrap());
            }
            if let Some(i) = lex.ili_of(&s.id) {
                add(&mut out, &node, &voc("ili"), nn(ili(i)));
            }
        }
        for r in lex.relations() {
            let name = repo.inventory().get(&r.code).unwrap().name.clone();
            add(&mut out, &synset(&r.source), &voc(&name), nn(synset(&r.target)));
        }
    }
    for i in repo.ili() {
        add(&mut out, &ili(i), RDF_TYPE, nn(voc("ILIRecord")));
    }
    let o = repo.overlay();
    for (i, m) in &o.sumo {
        let p = match m.rel {
            SumoRel::Equivalent => "sumoEquivalent",
            SumoRel::Subsumed => "sumoSubsumedBy",
            SumoRel::Instance => "sumoInstanceOf",
        };
        add(&mut out, &ili(i), &voc(p), nn(format!("http://www.ontologyportal.org/SUMO.owl#{}", enc(&m.term))));
    }
    let feature = |name: &str| format!("{BASE}/to/{}", enc(name));
    for f in o.to_hierarchy.iter() {
        add(&mut out, &feature(&f.name), RDF_TYPE, nn(voc("TopConcept")));
        add(&mut out, &feature(&f.name), "http://www.w3.org/2000/01/rdf-schema#label", Literal::new_simple_literal(&f.name));
        for p in &f.parents {
            let parent = &o.to_hierarchy.get(*p).unwrap().name;
            add(&mut out, &feature(&f.name), "http://www.w3.org/2000/01/rdf-schema#subClassOf", nn(feature(parent)));
        }
    }
    for (i, fs) in &o.to_features {
        for f in fs {
            add(&mut out, &ili(i), &voc("topConcept"), nn(feature(&o.to_hierarchy.get(*f).unwrap().name)));
        }
    }
    let domain = |l: &str| format!("{BASE}/domain/{}", enc(l));
    for (l, parent) in o.domain_hierarchy.labels() {
        add(&mut out, &domain(l), RDF_TYPE, nn(voc("Domain")));
        add(&mut out, &domain(l), "http://www.w3.org/2000/01/rdf-schema#label", Literal::new_simple_literal(l));
        if let Some(p) = parent {
            add(&mut out, &domain(l), "http://www.w3.org/2004/02/skos/core#broader", nn(domain(p)));
        }
    }
    for (i, ls) in &o.domains {
        for l in ls {
            add(&mut out, &ili(i), &voc("domain"), nn(domain(l)));
        }
    }
    for (i, b) in &o.blc {
        add(&mut out, &ili(i), &voc("blc"), nn(ili(b)));
    }
    out
}
