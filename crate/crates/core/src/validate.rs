//! Integrity checks over a loaded repository.
//!
//! Violations are collected into a report instead of failing. Inverse-relation
//! asymmetry is only a warning: storing one direction of a symmetric pair is
//! legitimate.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::ids::{IliId, LexiconKey, Pos, SynsetId};
use crate::model::{RelCode, Relation};
use crate::repo::Repository;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Issue {
    DanglingRelationEndpoint { lexicon: LexiconKey, relation: Relation, missing: SynsetId },
    UnknownRelationCode { lexicon: LexiconKey, relation: Relation },
    VariantToMissingSynset { lexicon: LexiconKey, lemma: String, synset: SynsetId },
    DuplicateSenseIndex { lexicon: LexiconKey, lemma: String, pos: Pos, sense_index: u32 },
    DuplicateIliLink { lexicon: LexiconKey, ili: IliId, synsets: Vec<SynsetId> },
    IliLinkToMissingSynset { lexicon: LexiconKey, synset: SynsetId },
    IliLinkOutsideIli { lexicon: LexiconKey, synset: SynsetId, ili: IliId },
    ForeignSynset { lexicon: LexiconKey, synset: SynsetId },
    InconsistentInverse { code: RelCode },
    AsymmetricInverse { lexicon: LexiconKey, relation: Relation, expected_inverse: RelCode },
    OverlayUnknownIli { ili: IliId },
    BlcNotIdempotent { ili: IliId, blc: IliId },
    FeatureCycle { feature: u32 },
    UnknownFeatureParent { feature: u32, parent: u32 },
    DomainCycle { label: String },
    UnknownDomainParent { parent: String },
    UnknownDomainLabel { ili: IliId, label: String },
    VersionMapUnknownIli { from: String, to: String, ili: IliId },
    CoreListUnknownIli { ili: IliId },
}

impl Issue {
    pub fn severity(&self) -> Severity {
        match self {
            Issue::AsymmetricInverse { .. } => Severity::Warning,
            _ => Severity::Error,
        }
    }
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Issue::DanglingRelationEndpoint { lexicon, relation, missing } => write!(
                f,
                "{lexicon}: relation {} {} {} has dangling endpoint {missing}",
                relation.source, relation.code, relation.target
            ),
            Issue::UnknownRelationCode { lexicon, relation } => write!(
                f,
                "{lexicon}: relation {} {} {} uses unknown code {}",
                relation.source, relation.code, relation.target, relation.code
            ),
            Issue::VariantToMissingSynset { lexicon, lemma, synset } => {
                write!(f, "{lexicon}: variant `{lemma}` points to missing synset {synset}")
            }
            Issue::DuplicateSenseIndex { lexicon, lemma, pos, sense_index } => {
                write!(f, "{lexicon}: `{lemma}` ({pos}) has sense index {sense_index} more than once")
            }
            Issue::DuplicateIliLink { lexicon, ili, synsets } => {
                let ids: Vec<String> = synsets.iter().map(ToString::to_string).collect();
                write!(f, "{lexicon}: {ili} linked from several synsets: {}", ids.join(", "))
            }
            Issue::IliLinkToMissingSynset { lexicon, synset } => {
                write!(f, "{lexicon}: ILI link for missing synset {synset}")
            }
            Issue::IliLinkOutsideIli { lexicon, synset, ili } => {
                write!(f, "{lexicon}: {synset} links to {ili}, which is not in the ILI")
            }
            Issue::ForeignSynset { lexicon, synset } => {
                write!(f, "{lexicon}: synset {synset} belongs to another lexicon")
            }
            Issue::InconsistentInverse { code } => {
                write!(f, "relation inventory: inverse of code {code} does not point back")
            }
            Issue::AsymmetricInverse { lexicon, relation, expected_inverse } => write!(
                f,
                "{lexicon}: {} {} {} has no inverse {} {} {} (warning)",
                relation.source, relation.code, relation.target, relation.target, expected_inverse, relation.source
            ),
            Issue::OverlayUnknownIli { ili } => write!(f, "overlay: {ili} is not in the ILI"),
            Issue::BlcNotIdempotent { ili, blc } => {
                write!(f, "overlay: BLC of {ili} is {blc}, which is not its own BLC")
            }
            Issue::FeatureCycle { feature } => write!(f, "top ontology: feature {feature} is on a cycle"),
            Issue::UnknownFeatureParent { feature, parent } => {
                write!(f, "top ontology: feature {feature} has unknown parent {parent}")
            }
            Issue::DomainCycle { label } => write!(f, "domains: label `{label}` is on a cycle"),
            Issue::UnknownDomainParent { parent } => write!(f, "domains: parent `{parent}` is not a declared label"),
            Issue::UnknownDomainLabel { ili, label } => {
                write!(f, "domains: {ili} tagged with undeclared label `{label}`")
            }
            Issue::VersionMapUnknownIli { from, to, ili } => {
                write!(f, "version map {from}->{to}: {ili} is not in the ILI")
            }
            Issue::CoreListUnknownIli { ili } => write!(f, "core list: {ili} is not in the ILI"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn errors(&self) -> impl Iterator<Item = &Issue> {
        self.issues.iter().filter(|i| i.severity() == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Issue> {
        self.issues.iter().filter(|i| i.severity() == Severity::Warning)
    }

    pub fn has_errors(&self) -> bool {
        self.errors().next().is_some()
    }
}

pub fn validate(repo: &Repository) -> ValidationReport {
    let mut issues = Vec::new();
    let inventory = repo.inventory();

    for def in inventory.inconsistent_inverses() {
        issues.push(Issue::InconsistentInverse { code: def.code.clone() });
    }

    for lex in repo.lexicons() {
        let key = lex.key().clone();

        for s in lex.synsets() {
            if s.id.lexicon() != key {
                issues.push(Issue::ForeignSynset { lexicon: key.clone(), synset: s.id.clone() });
            }
        }

        for r in lex.relations() {
            for end in [&r.source, &r.target] {
                if lex.synset(end).is_none() {
                    issues.push(Issue::DanglingRelationEndpoint {
                        lexicon: key.clone(),
                        relation: r.clone(),
                        missing: end.clone(),
                    });
                }
            }
            match inventory.get(&r.code) {
                None => issues.push(Issue::UnknownRelationCode { lexicon: key.clone(), relation: r.clone() }),
                Some(def) => {
                    if let Some(inv) = &def.inverse {
                        let back = Relation { source: r.target.clone(), code: inv.clone(), target: r.source.clone() };
                        if lex.relations().binary_search(&back).is_err() {
                            issues.push(Issue::AsymmetricInverse {
                                lexicon: key.clone(),
                                relation: r.clone(),
                                expected_inverse: inv.clone(),
                            });
                        }
                    }
                }
            }
        }

        let mut sense_slots: BTreeMap<(&str, Pos, u32), usize> = BTreeMap::new();
        for v in lex.variants() {
            if lex.synset(&v.synset).is_none() {
                issues.push(Issue::VariantToMissingSynset {
                    lexicon: key.clone(),
                    lemma: v.lemma.clone(),
                    synset: v.synset.clone(),
                });
            }
            *sense_slots.entry((v.lemma.as_str(), v.pos(), v.sense_index)).or_default() += 1;
        }
        for ((lemma, pos, sense_index), n) in sense_slots {
            if n > 1 {
                issues.push(Issue::DuplicateSenseIndex {
                    lexicon: key.clone(),
                    lemma: lemma.to_string(),
                    pos,
                    sense_index,
                });
            }
        }

        let mut per_ili: BTreeMap<&IliId, Vec<SynsetId>> = BTreeMap::new();
        for (s, ili) in lex.ili_links() {
            if lex.synset(s).is_none() {
                issues.push(Issue::IliLinkToMissingSynset { lexicon: key.clone(), synset: s.clone() });
            }
            if !repo.ili().contains(ili) {
                issues.push(Issue::IliLinkOutsideIli { lexicon: key.clone(), synset: s.clone(), ili: ili.clone() });
            }
            per_ili.entry(ili).or_default().push(s.clone());
        }
        for (ili, synsets) in per_ili {
            if synsets.len() > 1 {
                issues.push(Issue::DuplicateIliLink { lexicon: key.clone(), ili: ili.clone(), synsets });
            }
        }
    }

    let overlay = repo.overlay();
    for ili in overlay.referenced_ilis() {
        if !repo.ili().contains(ili) {
            issues.push(Issue::OverlayUnknownIli { ili: ili.clone() });
        }
    }
    for (ili, blc) in &overlay.blc {
        if overlay.blc.get(blc) != Some(blc) {
            issues.push(Issue::BlcNotIdempotent { ili: ili.clone(), blc: blc.clone() });
        }
    }
    for feature in overlay.to_hierarchy.cyclic_features() {
        issues.push(Issue::FeatureCycle { feature });
    }
    for f in overlay.to_hierarchy.iter() {
        for &p in &f.parents {
            if !overlay.to_hierarchy.contains(p) {
                issues.push(Issue::UnknownFeatureParent { feature: f.id, parent: p });
            }
        }
    }
    let hierarchy = &overlay.domain_hierarchy;
    for label in hierarchy.cyclic_labels() {
        issues.push(Issue::DomainCycle { label: label.to_string() });
    }
    for parent in hierarchy.undeclared_parents() {
        issues.push(Issue::UnknownDomainParent { parent: parent.to_string() });
    }
    if !hierarchy.is_empty() {
        let mut seen = BTreeSet::new();
        for (ili, labels) in &overlay.domains {
            for l in labels {
                if !hierarchy.contains(l) && seen.insert((ili, l)) {
                    issues.push(Issue::UnknownDomainLabel { ili: ili.clone(), label: l.clone() });
                }
            }
        }
    }

    for ((from, to), map) in repo.version_maps() {
        let mentioned: BTreeSet<&IliId> = map.iter().flat_map(|(a, bs)| std::iter::once(a).chain(bs)).collect();
        for ili in mentioned {
            if !repo.ili().contains(ili) {
                issues.push(Issue::VersionMapUnknownIli {
                    from: from.to_string(),
                    to: to.to_string(),
                    ili: ili.clone(),
                });
            }
        }
    }

    if let Some(core) = repo.core_list() {
        for ili in core {
            if !repo.ili().contains(ili) {
                issues.push(Issue::CoreListUnknownIli { ili: ili.clone() });
            }
        }
    }

    ValidationReport { issues }
}
