//! The in-memory repository: ILI, lexicons, overlays, relation inventory and
//! version maps. Immutable once constructed; share it behind `&` or `Arc`.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::ids::{IliId, Lang, LexiconKey, Pos, SynsetId, Version};
use crate::model::{Lexicon, RelationInventory, Synset, Variant};
use crate::overlay::OntologyOverlay;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LookupError {
    #[error("unknown synset {0}")]
    UnknownSynset(SynsetId),
    #[error("synset {0} has no ILI link")]
    NoIliLink(SynsetId),
    #[error("no lexicon loaded for {0}")]
    UnknownLexicon(String),
}

/// Many-to-many correspondence between ILI records of two wordnet versions.
pub type VersionMap = BTreeMap<IliId, BTreeSet<IliId>>;

/// Lemma matching mode for [`Repository::senses_of`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LemmaMatch {
    #[default]
    Exact,
    FoldCase,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Repository {
    ili: BTreeSet<IliId>,
    lexicons: BTreeMap<LexiconKey, Lexicon>,
    overlay: OntologyOverlay,
    inventory: RelationInventory,
    version_maps: BTreeMap<(Version, Version), VersionMap>,
    core: Option<BTreeSet<IliId>>,
}

impl Repository {
    pub fn new(
        ili: BTreeSet<IliId>,
        lexicons: impl IntoIterator<Item = Lexicon>,
        overlay: OntologyOverlay,
        inventory: RelationInventory,
    ) -> Repository {
        Repository {
            ili,
            lexicons: lexicons.into_iter().map(|l| (l.key().clone(), l)).collect(),
            overlay,
            inventory,
            version_maps: BTreeMap::new(),
            core: None,
        }
    }

    pub fn with_version_map(mut self, from: Version, to: Version, map: VersionMap) -> Repository {
        self.version_maps.insert((from, to), map);
        self
    }

    pub fn with_core_list(mut self, core: BTreeSet<IliId>) -> Repository {
        self.core = Some(core);
        self
    }

    pub fn ili(&self) -> &BTreeSet<IliId> {
        &self.ili
    }

    pub fn overlay(&self) -> &OntologyOverlay {
        &self.overlay
    }

    pub fn inventory(&self) -> &RelationInventory {
        &self.inventory
    }

    pub fn version_maps(&self) -> &BTreeMap<(Version, Version), VersionMap> {
        &self.version_maps
    }

    pub fn version_map(&self, from: &Version, to: &Version) -> Option<&VersionMap> {
        self.version_maps.get(&(from.clone(), to.clone()))
    }

    /// Core-concept list shipped with the bundle, if any.
    pub fn core_list(&self) -> Option<&BTreeSet<IliId>> {
        self.core.as_ref()
    }

    pub fn lexicons(&self) -> impl Iterator<Item = &Lexicon> {
        self.lexicons.values()
    }

    pub fn lexicon(&self, key: &LexiconKey) -> Option<&Lexicon> {
        self.lexicons.get(key)
    }

    /// Lexicons for a language, in version order.
    pub fn lexicons_for(&self, lang: &Lang) -> impl Iterator<Item = &Lexicon> + '_ {
        let lang = lang.clone();
        self.lexicons.values().filter(move |l| l.key().lang == lang)
    }

    /// The single lexicon for `lang`, or the one named by `lang-version`.
    pub fn find_lexicon(&self, spec: &str) -> Result<&Lexicon, LookupError> {
        if let Ok(key) = spec.parse::<LexiconKey>() {
            return self.lexicon(&key).ok_or_else(|| LookupError::UnknownLexicon(spec.to_string()));
        }
        let lang = Lang::new(spec).map_err(|_| LookupError::UnknownLexicon(spec.to_string()))?;
        let mut found = self.lexicons_for(&lang);
        match (found.next(), found.next()) {
            (Some(l), None) => Ok(l),
            _ => Err(LookupError::UnknownLexicon(spec.to_string())),
        }
    }

    pub fn resolve_synset(&self, id: &SynsetId) -> Result<&Synset, LookupError> {
        self.lexicons
            .get(&id.lexicon())
            .and_then(|l| l.synset(id))
            .ok_or_else(|| LookupError::UnknownSynset(id.clone()))
    }

    pub fn ili_of(&self, id: &SynsetId) -> Option<&IliId> {
        self.lexicons.get(&id.lexicon()).and_then(|l| l.ili_of(id))
    }

    /// Variants of `lemma` in every lexicon of `lang`, optionally restricted
    /// to one POS, ordered by sense index (then synset id).
    pub fn senses_of(&self, lemma: &str, lang: &Lang, pos: Option<Pos>) -> Vec<&Variant> {
        self.senses_matching(lemma, lang, pos, LemmaMatch::Exact)
    }

    pub fn senses_matching(&self, lemma: &str, lang: &Lang, pos: Option<Pos>, mode: LemmaMatch) -> Vec<&Variant> {
        let mut out: Vec<&Variant> = Vec::new();
        for lex in self.lexicons_for(lang) {
            match mode {
                LemmaMatch::Exact => out.extend(lex.lemma_variants(lemma)),
                LemmaMatch::FoldCase => {
                    let folded = lemma.to_lowercase();
                    out.extend(lex.variants().iter().filter(|v| v.lemma.to_lowercase() == folded));
                }
            }
        }
        out.retain(|v| pos.is_none_or(|p| v.pos() == p));
        out.sort_by(|a, b| (a.sense_index, &a.synset, &a.lemma).cmp(&(b.sense_index, &b.synset, &b.lemma)));
        out
    }

    /// Synsets of `target_lang` sharing `id`'s ILI record.
    pub fn interlingual(&self, id: &SynsetId, target_lang: &Lang) -> Result<Vec<SynsetId>, LookupError> {
        self.resolve_synset(id)?;
        let ili = self.ili_of(id).ok_or_else(|| LookupError::NoIliLink(id.clone()))?;
        let mut out: Vec<SynsetId> = self
            .lexicons_for(target_lang)
            .flat_map(|l| l.synsets_for_ili(ili).iter().cloned())
            .filter(|s| s != id)
            .collect();
        out.sort();
        Ok(out)
    }

    /// Synsets across all lexicons linked to `ili`.
    pub fn synsets_for_ili(&self, ili: &IliId) -> Vec<&SynsetId> {
        self.lexicons.values().flat_map(|l| l.synsets_for_ili(ili)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{LexiconBuilder, Synset, Variant};

    fn sid(s: &str) -> SynsetId {
        s.parse().unwrap()
    }

    fn ili(s: &str) -> IliId {
        s.parse().unwrap()
    }

    fn small() -> Repository {
        let mut eng = LexiconBuilder::new("eng-30".parse().unwrap());
        let mut spa = LexiconBuilder::new("spa-30".parse().unwrap());
        for (lex, lang) in [(&mut eng, "eng"), (&mut spa, "spa")] {
            for off in ["02958343", "00001740"] {
                let id = sid(&format!("{lang}-30-{off}-n"));
                lex.synset(Synset::new(id.clone()));
                lex.ili_link(id, ili(&format!("ili-30-{off}-n")));
            }
        }
        // second spa synset on the same concept, plus an unlinked one
        spa.synset(Synset::new(sid("spa-30-90000001-n")));
        spa.ili_link(sid("spa-30-90000001-n"), ili("ili-30-02958343-n"));
        spa.synset(Synset::new(sid("spa-30-90000002-n")));
        eng.variant(Variant::new("car", sid("eng-30-02958343-n"), 1));
        eng.variant(Variant::new("Car", sid("eng-30-00001740-n"), 1));
        spa.variant(Variant::new("coche", sid("spa-30-02958343-n"), 1));
        let ilis = [ili("ili-30-02958343-n"), ili("ili-30-00001740-n")].into_iter().collect();
        Repository::new(ilis, [eng.build(), spa.build()], OntologyOverlay::default(), RelationInventory::default())
    }

    #[test]
    fn resolve_hit_and_miss() {
        let r = small();
        assert_eq!(r.resolve_synset(&sid("eng-30-02958343-n")).unwrap().id, sid("eng-30-02958343-n"));
        assert_eq!(
            r.resolve_synset(&sid("spa-30-99999999-n")),
            Err(LookupError::UnknownSynset(sid("spa-30-99999999-n")))
        );
        assert!(r.resolve_synset(&sid("cat-30-02958343-n")).is_err());
    }

    #[test]
    fn interlingual_join() {
        let r = small();
        let spa: Lang = "spa".parse().unwrap();
        let eng: Lang = "eng".parse().unwrap();
        assert_eq!(
            r.interlingual(&sid("eng-30-02958343-n"), &spa).unwrap(),
            vec![sid("spa-30-02958343-n"), sid("spa-30-90000001-n")]
        );
        assert_eq!(r.interlingual(&sid("spa-30-90000001-n"), &eng).unwrap(), vec![sid("eng-30-02958343-n")]);
        assert_eq!(
            r.interlingual(&sid("spa-30-90000002-n"), &eng),
            Err(LookupError::NoIliLink(sid("spa-30-90000002-n")))
        );
        let cat: Lang = "cat".parse().unwrap();
        assert!(r.interlingual(&sid("eng-30-00001740-n"), &cat).unwrap().is_empty());
    }

    #[test]
    fn senses_case_modes() {
        let r = small();
        let eng: Lang = "eng".parse().unwrap();
        assert_eq!(r.senses_of("car", &eng, None).len(), 1);
        assert_eq!(r.senses_matching("car", &eng, None, LemmaMatch::FoldCase).len(), 2);
        assert!(r.senses_of("bicycle", &eng, None).is_empty());
        assert!(r.senses_of("car", &eng, Some(Pos::Verb)).is_empty());
    }

    #[test]
    fn find_lexicon_by_lang_or_key() {
        let r = small();
        assert_eq!(r.find_lexicon("spa").unwrap().key().to_string(), "spa-30");
        assert_eq!(r.find_lexicon("eng-30").unwrap().key().to_string(), "eng-30");
        assert!(r.find_lexicon("por").is_err());
    }
}
