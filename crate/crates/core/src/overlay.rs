//! ILI-keyed ontology overlays: SUMO, Top Ontology, WordNet Domains and
//! Base Level Concepts.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::ids::IliId;

/// How a synset maps onto a SUMO term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SumoRel {
    /// `=` equivalent
    Equivalent,
    /// `+` subsumed by
    Subsumed,
    /// `@` instance of
    Instance,
}

impl SumoRel {
    pub fn symbol(self) -> char {
        match self {
            SumoRel::Equivalent => '=',
            SumoRel::Subsumed => '+',
            SumoRel::Instance => '@',
        }
    }
}

impl fmt::Display for SumoRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl FromStr for SumoRel {
    type Err = String;
    fn from_str(s: &str) -> Result<SumoRel, String> {
        match s {
            "=" => Ok(SumoRel::Equivalent),
            "+" => Ok(SumoRel::Subsumed),
            "@" => Ok(SumoRel::Instance),
            other => Err(format!("bad SUMO mapping relation `{other}` (expected =, + or @)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SumoMapping {
    pub term: String,
    pub rel: SumoRel,
}

pub type FeatureId = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Feature {
    pub id: FeatureId,
    pub name: String,
    pub parents: Vec<FeatureId>,
}

/// The Top Ontology feature lattice. Features may have several parents.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FeatureLattice {
    features: BTreeMap<FeatureId, Feature>,
}

impl FeatureLattice {
    pub fn new(features: impl IntoIterator<Item = Feature>) -> FeatureLattice {
        FeatureLattice { features: features.into_iter().map(|f| (f.id, f)).collect() }
    }

    pub fn get(&self, id: FeatureId) -> Option<&Feature> {
        self.features.get(&id)
    }

    pub fn contains(&self, id: FeatureId) -> bool {
        self.features.contains_key(&id)
    }

    pub fn by_name(&self, name: &str) -> Option<&Feature> {
        self.features.values().find(|f| f.name == name)
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Feature> {
        self.features.values()
    }

    pub fn roots(&self) -> Vec<&Feature> {
        self.features.values().filter(|f| f.parents.is_empty()).collect()
    }

    /// All ancestors of `id`, excluding `id` itself.
    pub fn ancestors(&self, id: FeatureId) -> BTreeSet<FeatureId> {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<FeatureId> = self.get(id).map(|f| f.parents.clone()).unwrap_or_default();
        while let Some(p) = stack.pop() {
            if seen.insert(p) {
                if let Some(f) = self.get(p) {
                    stack.extend(&f.parents);
                }
            }
        }
        seen
    }

    /// Features that lie on a parent cycle.
    pub fn cyclic_features(&self) -> Vec<FeatureId> {
        self.features.keys().copied().filter(|&id| self.ancestors(id).contains(&id)).collect()
    }
}

/// WordNet Domains label tree (a forest when well formed).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DomainHierarchy {
    parent: BTreeMap<String, Option<String>>,
}

impl DomainHierarchy {
    pub fn new(edges: impl IntoIterator<Item = (String, Option<String>)>) -> DomainHierarchy {
        DomainHierarchy { parent: edges.into_iter().collect() }
    }

    pub fn contains(&self, label: &str) -> bool {
        self.parent.contains_key(label)
    }

    pub fn parent(&self, label: &str) -> Option<&str> {
        self.parent.get(label).and_then(|p| p.as_deref())
    }

    pub fn labels(&self) -> impl Iterator<Item = (&str, Option<&str>)> {
        self.parent.iter().map(|(l, p)| (l.as_str(), p.as_deref()))
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Path from `label` up to its root, starting with `label`. Stops early
    /// if a cycle is met.
    pub fn lineage(&self, label: &str) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        let mut cur = self.parent.get_key_value(label).map(|(k, _)| k.as_str());
        while let Some(l) = cur {
            if out.contains(&l) {
                break;
            }
            out.push(l);
            cur = self.parent(l);
        }
        out
    }

    /// Labels whose parent chain loops back on itself.
    pub fn cyclic_labels(&self) -> Vec<&str> {
        self.parent
            .keys()
            .filter(|l| {
                let mut cur = self.parent(l);
                let mut steps = 0;
                while let Some(p) = cur {
                    if p == l.as_str() {
                        return true;
                    }
                    steps += 1;
                    if steps > self.parent.len() {
                        return false;
                    }
                    cur = self.parent(p);
                }
                false
            })
            .map(String::as_str)
            .collect()
    }

    /// Parents that are not themselves declared labels.
    pub fn undeclared_parents(&self) -> BTreeSet<&str> {
        self.parent
            .values()
            .flatten()
            .filter(|p| !self.parent.contains_key(p.as_str()))
            .map(String::as_str)
            .collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OntologyOverlay {
    pub sumo: BTreeMap<IliId, SumoMapping>,
    pub to_features: BTreeMap<IliId, BTreeSet<FeatureId>>,
    pub to_hierarchy: FeatureLattice,
    pub domains: BTreeMap<IliId, BTreeSet<String>>,
    pub domain_hierarchy: DomainHierarchy,
    pub blc: BTreeMap<IliId, IliId>,
}

impl OntologyOverlay {
    pub fn sumo_of(&self, ili: &IliId) -> Option<&SumoMapping> {
        self.sumo.get(ili)
    }

    pub fn features_of(&self, ili: &IliId) -> impl Iterator<Item = &Feature> {
        self.to_features.get(ili).into_iter().flatten().filter_map(|&f| self.to_hierarchy.get(f))
    }

    pub fn domains_of(&self, ili: &IliId) -> impl Iterator<Item = &str> {
        self.domains.get(ili).into_iter().flatten().map(String::as_str)
    }

    pub fn blc_of(&self, ili: &IliId) -> Option<&IliId> {
        self.blc.get(ili)
    }

    /// Every ILI record the overlay mentions, as keys or BLC targets.
    pub fn referenced_ilis(&self) -> BTreeSet<&IliId> {
        self.sumo
            .keys()
            .chain(self.to_features.keys())
            .chain(self.domains.keys())
            .chain(self.blc.keys())
            .chain(self.blc.values())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn feat(id: FeatureId, name: &str, parents: &[FeatureId]) -> Feature {
        Feature { id, name: name.into(), parents: parents.to_vec() }
    }

    #[test]
    fn lattice_roots_and_ancestors() {
        let l = FeatureLattice::new([
            feat(1, "1stOrderEntity", &[]),
            feat(2, "Origin", &[1]),
            feat(3, "Natural", &[2]),
            feat(4, "Function", &[1]),
            feat(5, "Comestible", &[3, 4]),
        ]);
        assert_eq!(l.roots().len(), 1);
        assert_eq!(l.ancestors(5), BTreeSet::from([1, 2, 3, 4]));
        assert!(l.cyclic_features().is_empty());
    }

    #[test]
    fn lattice_cycle_detected() {
        let l = FeatureLattice::new([feat(1, "a", &[2]), feat(2, "b", &[1]), feat(3, "c", &[])]);
        assert_eq!(l.cyclic_features(), vec![1, 2]);
    }

    #[test]
    fn domain_lineage() {
        let d = DomainHierarchy::new([
            ("free_time".to_string(), None),
            ("sport".to_string(), Some("free_time".to_string())),
            ("football".to_string(), Some("sport".to_string())),
        ]);
        assert_eq!(d.parent("sport"), Some("free_time"));
        assert_eq!(d.lineage("football"), vec!["football", "sport", "free_time"]);
        assert!(d.cyclic_labels().is_empty());
    }

    #[test]
    fn domain_cycle_detected() {
        let d = DomainHierarchy::new([
            ("a".to_string(), Some("b".to_string())),
            ("b".to_string(), Some("a".to_string())),
            ("c".to_string(), Some("a".to_string())),
        ]);
        assert_eq!(d.cyclic_labels(), vec!["a", "b"]);
        assert_eq!(d.lineage("c"), vec!["c", "a", "b"]);
    }

    #[test]
    fn sumo_rel_symbols() {
        for s in ["=", "+", "@"] {
            assert_eq!(s.parse::<SumoRel>().unwrap().to_string(), s);
        }
        assert!("~".parse::<SumoRel>().is_err());
    }
}
