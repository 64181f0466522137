//! Sparse knowledge-base graph over synsets and personalized PageRank.
//!
//! The walk is the strongly preferential variant: with damping `d`, teleport
//! distribution `t` and the row-normalized weight matrix `W`, the scores are
//! the fixed point of
//!
//! ```text
//! v = (1 - d) t + d (Wᵀ v + (Σ dangling v) t)
//! ```
//!
//! computed by plain power iteration from `v₀ = t`. Iteration stops when the
//! L1 distance between successive iterates drops below `epsilon`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use rayon::prelude::*;
use thiserror::Error;

use crate::ids::{IliId, Lang, SynsetId};
use crate::model::RelCode;
use crate::repo::Repository;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("no synsets match the graph filter")]
    EmptyGraph,
    #[error("invalid PageRank parameters: {0}")]
    InvalidParams(String),
    #[error("invalid teleport vector: {0}")]
    InvalidTeleport(String),
}

/// A graph vertex: one synset, or one ILI record standing for every synset
/// merged onto it in cross-lingual graphs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NodeKey {
    Synset(SynsetId),
    Ili(IliId),
}

impl fmt::Display for NodeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeKey::Synset(s) => s.fmt(f),
            NodeKey::Ili(i) => i.fmt(f),
        }
    }
}

/// Ordered by canonical string form.
impl Ord for NodeKey {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (NodeKey::Synset(a), NodeKey::Synset(b)) => a.cmp(b),
            (NodeKey::Ili(a), NodeKey::Ili(b)) => a.cmp(b),
            _ => self.to_string().cmp(&other.to_string()),
        }
    }
}

impl PartialOrd for NodeKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone)]
pub struct KbGraph {
    keys: Vec<NodeKey>,
    index: HashMap<NodeKey, usize>,
    synset_node: HashMap<SynsetId, usize>,
    /// outgoing arcs `(target, weight)`, sorted by target
    out: Vec<Vec<(usize, f64)>>,
    /// incoming arcs `(source, weight / out_weight[source])`
    inc: Vec<Vec<(usize, f64)>>,
    out_weight: Vec<f64>,
    undirected: bool,
    edge_count: usize,
}

impl KbGraph {
    /// Builds a graph from explicit arcs. Self-loops are dropped; repeated
    /// arcs (or, when `undirected`, repeated unordered pairs) collapse into one
    /// carrying the largest weight. Undirected edges contribute both arcs.
    pub fn from_edges(keys: Vec<NodeKey>, edges: &[(usize, usize, f64)], undirected: bool) -> KbGraph {
        let n = keys.len();
        let mut unique: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for &(a, b, w) in edges {
            assert!(a < n && b < n, "edge ({a},{b}) out of range for {n} nodes");
            assert!(w > 0.0 && w.is_finite(), "edge weight must be positive and finite");
            if a == b {
                continue;
            }
            let k = if undirected { (a.min(b), a.max(b)) } else { (a, b) };
            let slot = unique.entry(k).or_insert(w);
            if w > *slot {
                *slot = w;
            }
        }

        let mut out: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (&(a, b), &w) in &unique {
            out[a].push((b, w));
            if undirected {
                out[b].push((a, w));
            }
        }
        for list in &mut out {
            list.sort_by_key(|&(t, _)| t);
        }
        let out_weight: Vec<f64> = out.iter().map(|l| l.iter().map(|&(_, w)| w).sum()).collect();
        let mut inc: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (s, list) in out.iter().enumerate() {
            for &(t, w) in list {
                inc[t].push((s, w / out_weight[s]));
            }
        }

        let index: HashMap<NodeKey, usize> = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        let synset_node = keys
            .iter()
            .enumerate()
            .filter_map(|(i, k)| match k {
                NodeKey::Synset(s) => Some((s.clone(), i)),
                NodeKey::Ili(_) => None,
            })
            .collect();

        KbGraph { keys, index, synset_node, out, inc, out_weight, undirected, edge_count: unique.len() }
    }

    pub fn node_count(&self) -> usize {
        self.keys.len()
    }

    /// Distinct edges (unordered pairs when undirected, arcs otherwise).
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_undirected(&self) -> bool {
        self.undirected
    }

    pub fn key(&self, node: usize) -> &NodeKey {
        &self.keys[node]
    }

    pub fn keys(&self) -> &[NodeKey] {
        &self.keys
    }

    pub fn node(&self, key: &NodeKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    /// Node carrying a synset, directly or through its merged ILI node.
    pub fn node_of_synset(&self, id: &SynsetId) -> Option<usize> {
        self.synset_node.get(id).copied()
    }

    pub fn neighbors(&self, node: usize) -> &[(usize, f64)] {
        &self.out[node]
    }

    /// All arcs as `(source, target, weight)`; undirected edges appear twice.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.out.iter().enumerate().flat_map(|(s, l)| l.iter().map(move |&(t, w)| (s, t, w)))
    }

    /// Edges as given to [`KbGraph::from_edges`]: each undirected pair once.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        self.arcs().filter(|&(s, t, _)| !self.undirected || s < t).collect()
    }

    /// Same graph with every edge weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> KbGraph {
        let edges: Vec<_> = self.edges().into_iter().map(|(s, t, w)| (s, t, w * factor)).collect();
        let mut g = KbGraph::from_edges(self.keys.clone(), &edges, self.undirected);
        g.synset_node = self.synset_node.clone();
        g
    }

    /// Writes `nodes.tsv` (`index TAB id`) and `edges.tsv`
    /// (`src_index TAB dst_index TAB weight`, one row per stored edge).
    pub fn write_dump(&self, dir: &Path) -> io::Result<()> {
        fs::create_dir_all(dir)?;
        let mut nodes = io::BufWriter::new(fs::File::create(dir.join("nodes.tsv"))?);
        for (i, k) in self.keys.iter().enumerate() {
            writeln!(nodes, "{i}\t{k}")?;
        }
        nodes.flush()?;
        let mut edges = io::BufWriter::new(fs::File::create(dir.join("edges.tsv"))?);
        for (s, t, w) in self.edges() {
            writeln!(edges, "{s}\t{t}\t{w}")?;
        }
        edges.flush()
    }
}

/// Which synsets and relations go into a graph built from a repository.
#[derive(Debug, Clone, Default)]
pub struct GraphFilter {
    /// Languages to include; empty means all loaded lexicons.
    pub langs: BTreeSet<Lang>,
    /// Relation codes to include; `None` means all.
    pub relations: Option<BTreeSet<RelCode>>,
    /// Merge synsets sharing an ILI record into one node.
    pub cross_lingual: bool,
}

/// Builds the undirected KB graph. Relations whose endpoints are missing
/// from the node set are skipped.
pub fn build_graph(repo: &Repository, filter: &GraphFilter) -> Result<KbGraph, GraphError> {
    let lexicons: Vec<_> = repo
        .lexicons()
        .filter(|l| filter.langs.is_empty() || filter.langs.contains(&l.key().lang))
        .collect();

    let mut member: BTreeMap<SynsetId, NodeKey> = BTreeMap::new();
    for lex in &lexicons {
        for s in lex.synsets() {
            let key = match lex.ili_of(&s.id) {
                Some(ili) if filter.cross_lingual => NodeKey::Ili(ili.clone()),
                _ => NodeKey::Synset(s.id.clone()),
            };
            member.insert(s.id.clone(), key);
        }
    }
    if member.is_empty() {
        return Err(GraphError::EmptyGraph);
    }

    let keys: Vec<NodeKey> = member.values().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let index: HashMap<&NodeKey, usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();

    let mut edges = Vec::new();
    for lex in &lexicons {
        for r in lex.relations() {
            if filter.relations.as_ref().is_some_and(|codes| !codes.contains(&r.code)) {
                continue;
            }
            if let (Some(a), Some(b)) = (member.get(&r.source), member.get(&r.target)) {
                edges.push((index[a], index[b], 1.0));
            }
        }
    }

    let mut g = KbGraph::from_edges(keys, &edges, true);
    g.synset_node = member.iter().map(|(s, k)| (s.clone(), g.index[k])).collect();
    Ok(g)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PprParams {
    pub damping: f64,
    pub epsilon: f64,
    pub max_iter: usize,
}

impl Default for PprParams {
    fn default() -> Self {
        PprParams { damping: 0.85, epsilon: 1e-9, max_iter: 1000 }
    }
}

impl PprParams {
    pub fn check(&self) -> Result<(), GraphError> {
        if !(self.damping > 0.0 && self.damping < 1.0) {
            return Err(GraphError::InvalidParams(format!("damping {} outside (0,1)", self.damping)));
        }
        if !(self.epsilon > 0.0) {
            return Err(GraphError::InvalidParams(format!("epsilon {} must be positive", self.epsilon)));
        }
        if self.max_iter == 0 {
            return Err(GraphError::InvalidParams("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

/// Sparse teleport distribution over graph nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Teleport {
    len: usize,
    entries: BTreeMap<usize, f64>,
}

impl Teleport {
    /// Checks entries are nonnegative, in range and sum to 1 within 1e-12.
    pub fn new(len: usize, entries: impl IntoIterator<Item = (usize, f64)>) -> Result<Teleport, GraphError> {
        let mut map: BTreeMap<usize, f64> = BTreeMap::new();
        for (i, p) in entries {
            if i >= len {
                return Err(GraphError::InvalidTeleport(format!("node {i} out of range for {len} nodes")));
            }
            if !(p >= 0.0 && p.is_finite()) {
                return Err(GraphError::InvalidTeleport(format!("entry {p} for node {i} is not a probability")));
            }
            if p > 0.0 {
                *map.entry(i).or_default() += p;
            }
        }
        let total: f64 = map.values().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(GraphError::InvalidTeleport(format!("mass sums to {total}, not 1")));
        }
        Ok(Teleport { len, entries: map })
    }

    /// Normalizes nonnegative weights into a distribution.
    pub fn from_weights(len: usize, weights: impl IntoIterator<Item = (usize, f64)>) -> Result<Teleport, GraphError> {
        let mut map: BTreeMap<usize, f64> = BTreeMap::new();
        for (i, w) in weights {
            if !(w >= 0.0 && w.is_finite()) {
                return Err(GraphError::InvalidTeleport(format!("weight {w} for node {i}")));
            }
            *map.entry(i).or_default() += w;
        }
        let total: f64 = map.values().sum();
        if total <= 0.0 {
            return Err(GraphError::InvalidTeleport("no mass".into()));
        }
        Teleport::new(len, map.into_iter().map(|(i, w)| (i, w / total)))
    }

    pub fn uniform(len: usize) -> Teleport {
        let p = 1.0 / len as f64;
        Teleport { len, entries: (0..len).map(|i| (i, p)).collect() }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn mass(&self, node: usize) -> f64 {
        self.entries.get(&node).copied().unwrap_or(0.0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.entries.iter().map(|(&i, &p)| (i, p))
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.len];
        for (&i, &p) in &self.entries {
            v[i] = p;
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PprResult {
    pub scores: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// L1 distance between successive iterates, one per iteration.
    pub deltas: Vec<f64>,
    /// Total mass of each iterate.
    pub masses: Vec<f64>,
}

/// Below this size the update runs on one thread. Either path computes each
/// entry with the same summation order, so results are bitwise identical.
const PARALLEL_THRESHOLD: usize = 1 << 14;

pub fn personalized_pagerank(g: &KbGraph, params: &PprParams, teleport: &Teleport) -> Result<PprResult, GraphError> {
    params.check()?;
    let n = g.node_count();
    if n == 0 {
        return Err(GraphError::EmptyGraph);
    }
    if teleport.len() != n {
        return Err(GraphError::InvalidTeleport(format!("length {} for {n} nodes", teleport.len())));
    }

    let d = params.damping;
    let t = teleport.to_dense();
    let dangling: Vec<usize> = (0..n).filter(|&i| g.out_weight[i] == 0.0).collect();
    let mut v = t.clone();
    let mut next = vec![0.0; n];
    let mut deltas = Vec::new();
    let mut masses = Vec::new();

    let update = |i: usize, v: &[f64], dangling_mass: f64| -> f64 {
        let walked: f64 = g.inc[i].iter().map(|&(j, p)| v[j] * p).sum();
        (1.0 - d) * t[i] + d * (walked + dangling_mass * t[i])
    };

    for _ in 0..params.max_iter {
        let dangling_mass: f64 = dangling.iter().map(|&j| v[j]).sum();
        if n >= PARALLEL_THRESHOLD {
            next.par_iter_mut().enumerate().for_each(|(i, x)| *x = update(i, &v, dangling_mass));
        } else {
            for (i, x) in next.iter_mut().enumerate() {
                *x = update(i, &v, dangling_mass);
            }
        }
        let delta: f64 = v.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut v, &mut next);
        deltas.push(delta);
        masses.push(v.iter().sum());
        if delta < params.epsilon {
            return Ok(PprResult { scores: v, iterations: deltas.len(), converged: true, deltas, masses });
        }
    }
    Ok(PprResult { scores: v, iterations: deltas.len(), converged: false, deltas, masses })
}

/// Compares `(score desc, key asc)`.
fn by_rank<'a>(g: &'a KbGraph, scores: &'a [f64]) -> impl Fn(&usize, &usize) -> Ordering + 'a {
    move |&a, &b| scores[b].total_cmp(&scores[a]).then_with(|| g.keys[a].cmp(&g.keys[b]))
}

/// Top `top_k` nodes by descending score; equal scores order by canonical id.
pub fn rank_nodes<'g>(g: &'g KbGraph, scores: &[f64], top_k: usize) -> Vec<(&'g NodeKey, f64)> {
    let mut order: Vec<usize> = (0..g.node_count()).collect();
    order.sort_by(by_rank(g, scores));
    order.into_iter().take(top_k).map(|i| (&g.keys[i], scores[i])).collect()
}
