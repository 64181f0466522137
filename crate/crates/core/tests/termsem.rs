mod support;

use std::collections::BTreeMap;
use std::fs;

use mcr_core::model::{LexiconBuilder, RelCode, Relation, Synset, Variant};
use mcr_core::overlay::OntologyOverlay;
use mcr_core::termsem::{
    assign_epinonyms, corpus_filter, extract_terms, nearest_noun_seed, EpinonymSet, RelationRule, TermsemError,
    TraversalConfig,
};
use mcr_core::{load_bundle, Repository, SynsetId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::{bfs_oracle, epinonym_oracle, fixtures, random_lexicon, Rule, CODES};

fn sid(s: &str) -> SynsetId {
    s.parse().unwrap()
}

fn random_rules(rng: &mut impl Rng) -> BTreeMap<String, Rule> {
    let weights = [0.5, 1.0, 2.0, 4.0];
    let mut rules = BTreeMap::new();
    for c in CODES {
        rules.insert(
            c.to_string(),
            Rule { allowed: rng.gen_bool(0.7), max_depth: rng.gen_range(0..5), weight: weights[rng.gen_range(0..4)] },
        );
    }
    rules.get_mut("2").unwrap().allowed = true;
    rules
}

fn config(rules: &BTreeMap<String, Rule>, global: Option<u32>) -> TraversalConfig {
    TraversalConfig::new(
        rules.iter().map(|(c, r)| {
            (RelCode::new(c), RelationRule { allowed: r.allowed, max_depth: r.max_depth, weight: r.weight })
        }),
        global,
    )
    .unwrap()
}

#[test]
fn extract_terms_matches_bfs_oracle_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for round in 0..60 {
        let n = rng.gen_range(2..=15);
        let lx = random_lexicon(&mut rng, n, 0.2);
        let rules = random_rules(&mut rng);
        let global = if rng.gen_bool(0.5) { Some(rng.gen_range(0..4)) } else { None };
        let cfg = config(&rules, global);
        let seed = rng.gen_range(0..n);

        let got: Vec<(String, String, u32, String)> = extract_terms(&lx.ids[seed], &cfg, &lx.repo)
            .unwrap()
            .into_iter()
            .map(|t| (t.variant.lemma.clone(), t.synset.to_string(), t.depth, t.render_path()))
            .collect();

        let mut reached = bfs_oracle(&lx.ids, &lx.edges, &rules, global, seed);
        reached.retain(|(i, _, _)| lx.ids[*i].pos() == mcr_core::Pos::Noun);
        reached.sort_by(|a, b| (a.1, &lx.ids[a.0]).cmp(&(b.1, &lx.ids[b.0])));
        let mut want = Vec::new();
        for (i, d, path) in reached {
            let mut rendered = lx.ids[seed].to_string();
            for (c, v) in &path {
                rendered.push_str(&format!(">{c}>{}", lx.ids[*v]));
            }
            for l in &lx.lemmas[i] {
                want.push((l.clone(), lx.ids[i].to_string(), d, rendered.clone()));
            }
        }
        assert_eq!(got, want, "round {round}");
    }
}

#[test]
fn epinonyms_match_bellman_ford_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut checked = 0;
    while checked < 60 {
        let n = rng.gen_range(2..=15);
        let lx = random_lexicon(&mut rng, n, 0.2);
        let nouns: Vec<usize> = (0..n).filter(|&i| lx.ids[i].pos() == mcr_core::Pos::Noun).collect();
        if nouns.is_empty() {
            continue;
        }
        let k = rng.gen_range(1..=nouns.len().min(3));
        let sources: Vec<usize> = nouns[..k].to_vec();
        let rules = random_rules(&mut rng);
        let cfg = config(&rules, None);
        let epi = EpinonymSet::new(sources.iter().map(|&i| lx.ids[i].clone())).unwrap();

        let got = assign_epinonyms(&epi, &cfg, &lx.repo).unwrap();
        let want = epinonym_oracle(&lx.ids, &lx.edges, &rules, &sources);
        let got_idx: BTreeMap<usize, (usize, f64)> = got
            .iter()
            .map(|(id, a)| {
                let i = lx.ids.iter().position(|x| x == id).unwrap();
                let e = lx.ids.iter().position(|x| *x == a.epinonym).unwrap();
                (i, (e, a.distance))
            })
            .collect();
        assert_eq!(got_idx, want);

        // no allowed edge can shorten an assigned distance
        for (c, u, v) in &lx.edges {
            if let (Some(r), Some(du), Some(dv)) =
                (rules.get(c).filter(|r| r.allowed), got_idx.get(u), got_idx.get(v))
            {
                assert!(dv.1 <= du.1 + 1.0 / r.weight);
            }
        }
        for &s in &sources {
            assert_eq!(got_idx[&s], (s, 0.0));
        }
        checked += 1;
    }
}

fn chain_repo() -> Repository {
    // a -2-> b -2-> c, c -12-> a (cycle), d verb -12-> b, e adjective isolated
    let ids = ["eng-30-00000001-n", "eng-30-00000002-n", "eng-30-00000003-n", "eng-30-00000004-v", "eng-30-00000005-a"];
    let mut b = LexiconBuilder::new("eng-30".parse().unwrap());
    for (i, id) in ids.iter().enumerate() {
        b.synset(Synset::new(sid(id)));
        b.variant(Variant::new(&format!("t{i}"), sid(id), 1));
    }
    for (c, s, t) in [("2", 0, 1), ("2", 1, 2), ("12", 2, 0), ("12", 3, 1)] {
        b.relation(Relation::new(RelCode::new(c), sid(ids[s]), sid(ids[t])));
    }
    Repository::new(Default::default(), [b.build()], OntologyOverlay::default(), support::inventory())
}

#[test]
fn chain_depth_limit_and_cycle() {
    let repo = chain_repo();
    let seed = sid("eng-30-00000001-n");
    let cfg = TraversalConfig::parse("2 1 1 1\n").unwrap();
    let terms = extract_terms(&seed, &cfg, &repo).unwrap();
    let got: Vec<(&str, u32)> = terms.iter().map(|t| (t.variant.lemma.as_str(), t.depth)).collect();
    assert_eq!(got, [("t0", 0), ("t1", 1)]);

    let cfg = TraversalConfig::parse("2 1 5 1\n12 1 5 1\n").unwrap();
    let terms = extract_terms(&seed, &cfg, &repo).unwrap();
    assert_eq!(terms.len(), 3, "cycle back to the seed must not revisit it");
    assert_eq!(terms[2].render_path(), "eng-30-00000001-n>2>eng-30-00000002-n>2>eng-30-00000003-n");

    let none = TraversalConfig::parse("3 1 5 1\n").unwrap();
    assert_eq!(extract_terms(&seed, &none, &repo).unwrap().len(), 1);
    assert!(matches!(
        extract_terms(&sid("eng-30-00000009-n"), &cfg, &repo),
        Err(TermsemError::UnknownSynset(_))
    ));
}

#[test]
fn nearest_noun() {
    let repo = chain_repo();
    let v = sid("eng-30-00000004-v");
    let n = nearest_noun_seed(&v, &repo).unwrap();
    assert_eq!(n, sid("eng-30-00000002-n"));
    assert_eq!(nearest_noun_seed(&n, &repo).unwrap(), n);
    assert_eq!(
        nearest_noun_seed(&sid("eng-30-00000005-a"), &repo),
        Err(TermsemError::NoNounReachable(sid("eng-30-00000005-a")))
    );
}

#[test]
fn nearest_noun_is_idempotent_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..40 {
        let n = rng.gen_range(2..=12);
        let lx = random_lexicon(&mut rng, n, 0.15);
        for id in &lx.ids {
            if let Ok(x) = nearest_noun_seed(id, &lx.repo) {
                assert_eq!(nearest_noun_seed(&x, &lx.repo).unwrap(), x);
            }
        }
    }
}

#[test]
fn toy_termonet_and_corpus() {
    let repo = load_bundle(&fixtures().join("toy")).unwrap();
    let cfg = TraversalConfig::parse(&fs::read_to_string(fixtures().join("termsem/termonet.cfg")).unwrap()).unwrap();
    let terms = extract_terms(&sid("spa-30-00002684-n"), &cfg, &repo).unwrap();
    let lemmas: Vec<&str> = terms.iter().map(|t| t.variant.lemma.as_str()).collect();
    assert_eq!(lemmas, ["objeto", "organismo", "ser", "celular", "teléfono móvil", "célula", "animal", "can", "perro"]);

    let text = fs::read_to_string(fixtures().join("termsem/corpus_spa.txt")).unwrap();
    let corpus: Vec<&str> = text.split_whitespace().collect();
    let count = |w: &str| corpus.iter().filter(|t| **t == w).count();

    let kept = corpus_filter(&terms, &corpus, 3);
    assert_eq!(kept.len(), 1);
    assert_eq!((kept[0].0.variant.lemma.as_str(), kept[0].1), ("célula", count("célula")));
    assert_eq!(corpus_filter(&terms, &corpus, 0).len(), terms.len());
    let phone = corpus_filter(&terms, &corpus, 1);
    assert!(phone.iter().any(|(t, f)| t.variant.lemma == "teléfono móvil" && *f == 2));
    let mut prev = usize::MAX;
    for m in 0..6 {
        let len = corpus_filter(&terms, &corpus, m).len();
        assert!(len <= prev);
        prev = len;
    }
}

#[test]
fn toy_epinonyms() {
    let repo = load_bundle(&fixtures().join("toy")).unwrap();
    let cfg = TraversalConfig::parse(&fs::read_to_string(fixtures().join("termsem/epinonym.cfg")).unwrap()).unwrap();
    let epi = EpinonymSet::new([sid("eng-30-00015388-n"), sid("eng-30-03791235-n")]).unwrap();
    let map = assign_epinonyms(&epi, &cfg, &repo).unwrap();
    let dog = &map[&sid("eng-30-02084071-n")];
    assert_eq!((dog.epinonym.to_string().as_str(), dog.distance), ("eng-30-00015388-n", 1.0));
    let drive = &map[&sid("eng-30-01930874-v")];
    assert_eq!((drive.epinonym.to_string().as_str(), drive.distance), ("eng-30-03791235-n", 3.0));
    assert_eq!(map[&sid("eng-30-00015388-n")].distance, 0.0);
}
