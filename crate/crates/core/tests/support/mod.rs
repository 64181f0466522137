//! Reference implementations used as oracles. They share no code with the
//! library beyond its public types: dense matrices, edge-list scans and
//! Bellman-Ford instead of the engine's sparse or heap-based versions.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use mcr_core::model::{LexiconBuilder, RelCode, Relation, RelationDef, RelationInventory, Synset, Variant};
use mcr_core::overlay::OntologyOverlay;
use mcr_core::{LexiconKey, Repository, SynsetId};
use rand::Rng;

pub mod turtle;

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn toy() -> PathBuf {
    fixtures().join("toy")
}

/// Data rows of a TSV file: comment and blank lines skipped, split on TAB.
pub fn raw_rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap_or_else(|e| panic!("{}: {e}", path.display()))
        .lines()
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.split('\t').map(str::to_string).collect())
        .collect()
}

// ---------------------------------------------------------------- PageRank

/// Dense weight matrix with self-loops dropped and repeated arcs (unordered
/// pairs when undirected) collapsed to their largest weight.
pub fn dense_weights(n: usize, arcs: &[(usize, usize, f64)], undirected: bool) -> Vec<Vec<f64>> {
    let mut w = vec![vec![0.0; n]; n];
    for &(a, b, x) in arcs {
        if a == b {
            continue;
        }
        w[a][b] = f64::max(w[a][b], x);
        if undirected {
            w[b][a] = f64::max(w[b][a], x);
        }
    }
    w
}

pub struct OraclePpr {
    pub scores: Vec<f64>,
    pub iterations: usize,
    pub masses: Vec<f64>,
}

/// Power iteration on the dense transition matrix. Dangling rows restart at
/// the teleport vector. Stops once the L1 step falls below `eps`.
pub fn dense_ppr(w: &[Vec<f64>], t: &[f64], d: f64, eps: f64, max_iter: usize) -> OraclePpr {
    let n = w.len();
    let row: Vec<f64> = w.iter().map(|r| r.iter().sum()).collect();
    let mut v = t.to_vec();
    let mut masses = Vec::new();
    for it in 1..=max_iter {
        let dangling: f64 = (0..n).filter(|&i| row[i] == 0.0).map(|i| v[i]).sum();
        let mut next = vec![0.0; n];
        for j in 0..n {
            let mut acc = 0.0;
            for i in 0..n {
                if row[i] > 0.0 {
                    acc += v[i] * w[i][j] / row[i];
                }
            }
            next[j] = (1.0 - d) * t[j] + d * (acc + dangling * t[j]);
        }
        let step: f64 = (0..n).map(|i| (next[i] - v[i]).abs()).sum();
        v = next;
        masses.push(v.iter().sum());
        if step < eps {
            return OraclePpr { scores: v, iterations: it, masses };
        }
    }
    OraclePpr { scores: v, iterations: max_iter, masses }
}

/// Solves `v = (1-d) t + d (P^T v + (dangling . v) t)` by Gaussian
/// elimination with partial pivoting.
pub fn exact_ppr(w: &[Vec<f64>], t: &[f64], d: f64) -> Vec<f64> {
    let n = w.len();
    let row: Vec<f64> = w.iter().map(|r| r.iter().sum()).collect();
    let mut a = vec![vec![0.0; n + 1]; n];
    for j in 0..n {
        a[j][j] = 1.0;
        for i in 0..n {
            if row[i] > 0.0 {
                a[j][i] -= d * w[i][j] / row[i];
            } else {
                a[j][i] -= d * t[j];
            }
        }
        a[j][n] = (1.0 - d) * t[j];
    }
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs())).unwrap();
        a.swap(c, p);
        for r in 0..n {
            if r != c {
                let f = a[r][c] / a[c][c];
                for k in c..=n {
                    a[r][k] -= f * a[c][k];
                }
            }
        }
    }
    (0..n).map(|i| a[i][n] / a[i][i]).collect()
}

/// Random simple graph: `n` nodes, each pair linked with probability `p`,
/// weights drawn from `weights`.
pub fn random_arcs(rng: &mut impl Rng, n: usize, p: f64, weights: &[f64]) -> Vec<(usize, usize, f64)> {
    let mut arcs = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && rng.gen_bool(p) {
                arcs.push((a, b, weights[rng.gen_range(0..weights.len())]));
            }
        }
    }
    arcs
}

pub fn random_teleport(rng: &mut impl Rng, n: usize) -> Vec<(usize, f64)> {
    let k = rng.gen_range(1..=n);
    let mut nodes: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.gen_range(i..n);
        nodes.swap(i, j);
    }
    nodes[..k].iter().map(|&i| (i, rng.gen_range(1..=4) as f64)).collect()
}

// ------------------------------------------------------- random lexicons

pub const CODES: [&str; 4] = ["1", "2", "12", "3"];

pub fn inventory() -> RelationInventory {
    let def = |code: &str, name: &str, inv: &str, tr: bool| RelationDef {
        code: RelCode::new(code),
        name: name.into(),
        inverse: Some(RelCode::new(inv)),
        transitive: tr,
    };
    RelationInventory::new([
        def("1", "has_hypernym", "2", true),
        def("2", "has_hyponym", "1", true),
        def("12", "related_to", "12", false),
        def("3", "near_synonym", "3", false),
    ])
}

pub fn node_id(i: usize, noun: bool) -> SynsetId {
    format!("eng-30-{:08}-{}", i + 1, if noun { 'n' } else { 'v' }).parse().unwrap()
}

/// A single-lexicon repository over `n` synsets with random relations.
pub struct RandomLexicon {
    pub repo: Repository,
    pub ids: Vec<SynsetId>,
    /// `(code, source index, target index)`
    pub edges: Vec<(String, usize, usize)>,
    /// Variant lemmas per synset, sorted.
    pub lemmas: Vec<Vec<String>>,
}

pub fn random_lexicon(rng: &mut impl Rng, n: usize, p: f64) -> RandomLexicon {
    let ids: Vec<SynsetId> = (0..n).map(|i| node_id(i, rng.gen_bool(0.75))).collect();
    let key: LexiconKey = "eng-30".parse().unwrap();
    let mut b = LexiconBuilder::new(key);
    let mut lemmas = Vec::new();
    for (i, id) in ids.iter().enumerate() {
        b.synset(Synset::new(id.clone()));
        let mut ls = vec![format!("w{i}")];
        if rng.gen_bool(0.3) {
            ls.push(format!("x{i}"));
        }
        for l in &ls {
            b.variant(Variant::new(l, id.clone(), 1));
        }
        lemmas.push(ls);
    }
    let mut edges = BTreeSet::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                edges.insert((CODES[rng.gen_range(0..CODES.len())].to_string(), u, v));
            }
        }
    }
    for (c, u, v) in &edges {
        b.relation(Relation::new(RelCode::new(c), ids[*u].clone(), ids[*v].clone()));
    }
    let repo = Repository::new(BTreeSet::new(), [b.build()], OntologyOverlay::default(), inventory());
    RandomLexicon { repo, ids, edges: edges.into_iter().collect(), lemmas }
}

// ------------------------------------------------------------ Termonet

pub struct Rule {
    pub allowed: bool,
    pub max_depth: u32,
    pub weight: f64,
}

/// Level-by-level scan of the full edge list. A node enters level `k` via
/// an allowed edge from level `k-1` whose code permits depth `k`; among
/// several such edges the one with the smallest `(parent id, code)` wins.
/// Returns `(node, depth, path)` for every reached node.
pub fn bfs_oracle(
    ids: &[SynsetId],
    edges: &[(String, usize, usize)],
    rules: &BTreeMap<String, Rule>,
    global: Option<u32>,
    seed: usize,
) -> Vec<(usize, u32, Vec<(String, usize)>)> {
    let n = ids.len();
    let mut depth: Vec<Option<u32>> = vec![None; n];
    let mut path: Vec<Vec<(String, usize)>> = vec![Vec::new(); n];
    depth[seed] = Some(0);
    for k in 1u32.. {
        let mut chosen: BTreeMap<usize, (SynsetId, String, usize)> = BTreeMap::new();
        for (c, u, v) in edges {
            let ok = rules.get(c).is_some_and(|r| r.allowed && k <= r.max_depth) && global.is_none_or(|g| k <= g);
            if ok && depth[*u] == Some(k - 1) && depth[*v].is_none() {
                let cand = (ids[*u].clone(), c.clone(), *u);
                let slot = chosen.entry(*v).or_insert_with(|| cand.clone());
                if (&cand.0, &cand.1) < (&slot.0, &slot.1) {
                    *slot = cand;
                }
            }
        }
        if chosen.is_empty() {
            break;
        }
        for (v, (_, c, u)) in chosen {
            depth[v] = Some(k);
            let mut p = path[u].clone();
            p.push((c, v));
            path[v] = p;
        }
    }
    (0..n).filter_map(|i| depth[i].map(|d| (i, d, path[i].clone()))).collect()
}

/// Bellman-Ford from each source separately, then per node the source with
/// the smallest `(distance, source id)`.
pub fn epinonym_oracle(
    ids: &[SynsetId],
    edges: &[(String, usize, usize)],
    rules: &BTreeMap<String, Rule>,
    sources: &[usize],
) -> BTreeMap<usize, (usize, f64)> {
    let n = ids.len();
    let mut best: BTreeMap<usize, (usize, f64)> = BTreeMap::new();
    for &s in sources {
        let mut dist = vec![f64::INFINITY; n];
        dist[s] = 0.0;
        for _ in 0..n {
            for (c, u, v) in edges {
                if let Some(r) = rules.get(c).filter(|r| r.allowed) {
                    let alt = dist[*u] + 1.0 / r.weight;
                    if alt < dist[*v] {
                        dist[*v] = alt;
                    }
                }
            }
        }
        for v in 0..n {
            if dist[v].is_finite() {
                let better = match best.get(&v) {
                    None => true,
                    Some(&(e, d)) => dist[v] < d || (dist[v] == d && ids[s] < ids[e]),
                };
                if better {
                    best.insert(v, (s, dist[v]));
                }
            }
        }
    }
    best
}
