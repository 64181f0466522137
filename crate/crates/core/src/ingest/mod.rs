//! Reading and writing source bundles.
//!
//! A bundle is a directory of tab-separated files (layout in `docs/FORMATS.md`):
//!
//! ```text
//! ili.tsv  relation_defs.tsv  sumo.tsv  domains.tsv  domain_hierarchy.tsv
//! to_features.tsv  ili_to_to.tsv  blc.tsv  version_map_{a}_{b}.tsv  core_synsets.txt
//! {lang}-{version}/synsets.tsv variants.tsv relations.tsv examples.tsv to_ili.tsv
//! ```
//!
//! Only `ili.tsv` is mandatory at the top level; inside a lexicon directory
//! `synsets.tsv` and `variants.tsv` are. A malformed line aborts the whole
//! load and names the file and 1-based line number.

pub mod lines;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

use crate::ids::{IliId, LexiconKey, SynsetId, Version};
use crate::model::{Lexicon, LexiconBuilder, RelationInventory};
use crate::overlay::{DomainHierarchy, FeatureLattice, OntologyOverlay};
use crate::repo::{Repository, VersionMap};

pub use lines::{parse_variant_line, LineError};

pub const ILI_FILE: &str = "ili.tsv";
pub const RELATION_DEFS_FILE: &str = "relation_defs.tsv";
pub const SUMO_FILE: &str = "sumo.tsv";
pub const DOMAINS_FILE: &str = "domains.tsv";
pub const DOMAIN_HIERARCHY_FILE: &str = "domain_hierarchy.tsv";
pub const TO_FEATURES_FILE: &str = "to_features.tsv";
pub const ILI_TO_TO_FILE: &str = "ili_to_to.tsv";
pub const BLC_FILE: &str = "blc.tsv";
pub const CORE_FILE: &str = "core_synsets.txt";
pub const SYNSETS_FILE: &str = "synsets.tsv";
pub const VARIANTS_FILE: &str = "variants.tsv";
pub const RELATIONS_FILE: &str = "relations.tsv";
pub const EXAMPLES_FILE: &str = "examples.tsv";
pub const TO_ILI_FILE: &str = "to_ili.tsv";

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("missing file {0}")]
    MissingFile(PathBuf),
    #[error("{}:{line}: {reason}", file.display())]
    MalformedLine { file: PathBuf, line: usize, reason: String },
    #[error("{}:{line}: invalid UTF-8", file.display())]
    Encoding { file: PathBuf, line: usize },
    #[error("{}:{line}: unknown Top Ontology feature {feature}", file.display())]
    UnknownFeature { file: PathBuf, line: usize, feature: u32 },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

impl IngestError {
    fn io(path: &Path, source: io::Error) -> IngestError {
        IngestError::Io { path: path.to_path_buf(), source }
    }
}

/// Reads a file as UTF-8 and yields its data lines with 1-based numbers,
/// skipping blank lines and `#` comments.
fn read_lines(path: &Path) -> Result<Vec<(usize, String)>, IngestError> {
    let bytes = match fs::read(path) {
        Ok(b) => b,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Err(IngestError::MissingFile(path.to_path_buf())),
        Err(e) => return Err(IngestError::io(path, e)),
    };
    let text = String::from_utf8(bytes).map_err(|e| {
        let good = &e.as_bytes()[..e.utf8_error().valid_up_to()];
        let line = good.iter().filter(|&&b| b == b'\n').count() + 1;
        IngestError::Encoding { file: path.to_path_buf(), line }
    })?;
    Ok(text
        .split('\n')
        .enumerate()
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(i, l)| (i + 1, l.to_string()))
        .collect())
}

fn parse_file<T>(path: &Path, parse: impl Fn(&str) -> Result<T, LineError>) -> Result<Vec<(usize, T)>, IngestError> {
    read_lines(path)?
        .into_iter()
        .map(|(n, l)| {
            parse(&l)
                .map(|v| (n, v))
                .map_err(|e| IngestError::MalformedLine { file: path.to_path_buf(), line: n, reason: e.0 })
        })
        .collect()
}

fn parse_optional<T>(
    path: &Path,
    parse: impl Fn(&str) -> Result<T, LineError>,
) -> Result<Vec<(usize, T)>, IngestError> {
    if path.exists() {
        parse_file(path, parse)
    } else {
        Ok(Vec::new())
    }
}

fn malformed(file: &Path, line: usize, reason: impl Into<String>) -> IngestError {
    IngestError::MalformedLine { file: file.to_path_buf(), line, reason: reason.into() }
}

/// Paths of the overlay files; `None` entries are treated as empty.
#[derive(Debug, Clone, Default)]
pub struct OntologyPaths {
    pub sumo: Option<PathBuf>,
    pub domains: Option<PathBuf>,
    pub domain_hierarchy: Option<PathBuf>,
    pub to_features: Option<PathBuf>,
    pub ili_to_to: Option<PathBuf>,
    pub blc: Option<PathBuf>,
}

impl OntologyPaths {
    /// The standard file names under `dir`, keeping only files that exist.
    pub fn in_dir(dir: &Path) -> OntologyPaths {
        let pick = |name: &str| Some(dir.join(name)).filter(|p| p.exists());
        OntologyPaths {
            sumo: pick(SUMO_FILE),
            domains: pick(DOMAINS_FILE),
            domain_hierarchy: pick(DOMAIN_HIERARCHY_FILE),
            to_features: pick(TO_FEATURES_FILE),
            ili_to_to: pick(ILI_TO_TO_FILE),
            blc: pick(BLC_FILE),
        }
    }
}

fn parse_maybe<T>(
    path: &Option<PathBuf>,
    parse: impl Fn(&str) -> Result<T, LineError>,
) -> Result<Vec<(usize, T)>, IngestError> {
    match path {
        Some(p) => parse_file(p, parse),
        None => Ok(Vec::new()),
    }
}

pub fn load_ontology_files(paths: &OntologyPaths) -> Result<OntologyOverlay, IngestError> {
    let mut overlay = OntologyOverlay::default();

    for (n, (ili, mapping)) in parse_maybe(&paths.sumo, lines::parse_sumo_line)? {
        if overlay.sumo.insert(ili.clone(), mapping).is_some() {
            return Err(malformed(paths.sumo.as_ref().unwrap(), n, format!("second SUMO mapping for {ili}")));
        }
    }

    let features = parse_maybe(&paths.to_features, lines::parse_feature_line)?;
    let mut seen = BTreeSet::new();
    for (n, f) in &features {
        if !seen.insert(f.id) {
            return Err(malformed(paths.to_features.as_ref().unwrap(), *n, format!("duplicate feature id {}", f.id)));
        }
    }
    overlay.to_hierarchy = FeatureLattice::new(features.into_iter().map(|(_, f)| f));

    for (n, (ili, feature)) in parse_maybe(&paths.ili_to_to, lines::parse_ili_to_to_line)? {
        if !overlay.to_hierarchy.contains(feature) {
            return Err(IngestError::UnknownFeature {
                file: paths.ili_to_to.clone().unwrap(),
                line: n,
                feature,
            });
        }
        overlay.to_features.entry(ili).or_default().insert(feature);
    }

    for (_, (ili, label)) in parse_maybe(&paths.domains, lines::parse_domain_line)? {
        overlay.domains.entry(ili).or_default().insert(label);
    }

    let mut edges = BTreeMap::new();
    for (n, (label, parent)) in parse_maybe(&paths.domain_hierarchy, lines::parse_domain_hierarchy_line)? {
        if edges.insert(label.clone(), parent).is_some() {
            return Err(malformed(
                paths.domain_hierarchy.as_ref().unwrap(),
                n,
                format!("label `{label}` declared twice"),
            ));
        }
    }
    overlay.domain_hierarchy = DomainHierarchy::new(edges);

    for (n, (ili, blc)) in parse_maybe(&paths.blc, lines::parse_ili_pair_line)? {
        if overlay.blc.insert(ili.clone(), blc).is_some() {
            return Err(malformed(paths.blc.as_ref().unwrap(), n, format!("second BLC for {ili}")));
        }
    }

    Ok(overlay)
}

fn is_lexicon_dir(path: &Path) -> Option<LexiconKey> {
    if !path.is_dir() {
        return None;
    }
    path.file_name()?.to_str()?.parse().ok()
}

fn check_owner(file: &Path, line: usize, key: &LexiconKey, id: &SynsetId) -> Result<(), IngestError> {
    if &id.lexicon() != key {
        Err(malformed(file, line, format!("synset {id} does not belong to lexicon {key}")))
    } else {
        Ok(())
    }
}

/// Loads one `{lang}-{version}` directory.
pub fn load_lexicon(dir: &Path, key: LexiconKey) -> Result<Lexicon, IngestError> {
    let mut b = LexiconBuilder::new(key.clone());

    let file = dir.join(SYNSETS_FILE);
    let mut declared = BTreeSet::new();
    for (n, s) in parse_file(&file, lines::parse_synset_line)? {
        check_owner(&file, n, &key, &s.id)?;
        if !declared.insert(s.id.clone()) {
            return Err(malformed(&file, n, format!("duplicate synset {}", s.id)));
        }
        b.synset(s);
    }

    let file = dir.join(VARIANTS_FILE);
    for (n, v) in parse_file(&file, lines::parse_variant_line)? {
        check_owner(&file, n, &key, &v.synset)?;
        b.variant(v);
    }

    let file = dir.join(RELATIONS_FILE);
    for (n, r) in parse_optional(&file, lines::parse_relation_line)? {
        check_owner(&file, n, &key, &r.source)?;
        check_owner(&file, n, &key, &r.target)?;
        b.relation(r);
    }

    let file = dir.join(EXAMPLES_FILE);
    for (n, (id, text)) in parse_optional(&file, lines::parse_example_line)? {
        check_owner(&file, n, &key, &id)?;
        if !declared.contains(&id) {
            return Err(malformed(&file, n, format!("example for undeclared synset {id}")));
        }
        b.example(id, &text);
    }

    let file = dir.join(TO_ILI_FILE);
    let mut linked = BTreeSet::new();
    for (n, (id, ili)) in parse_optional(&file, lines::parse_to_ili_line)? {
        check_owner(&file, n, &key, &id)?;
        if !linked.insert(id.clone()) {
            return Err(malformed(&file, n, format!("second ILI link for {id}")));
        }
        b.ili_link(id, ili);
    }

    Ok(b.build())
}

fn version_map_versions(name: &str) -> Option<(Version, Version)> {
    let rest = name.strip_prefix("version_map_")?.strip_suffix(".tsv")?;
    let (a, b) = rest.split_once('_')?;
    Some((a.parse().ok()?, b.parse().ok()?))
}

/// Loads a whole bundle directory.
pub fn load_bundle(dir: &Path) -> Result<Repository, IngestError> {
    let ili_path = dir.join(ILI_FILE);
    if !dir.is_dir() || !ili_path.is_file() {
        return Err(IngestError::MissingFile(ili_path));
    }
    let ili: BTreeSet<IliId> = parse_file(&ili_path, lines::parse_ili_line)?.into_iter().map(|(_, i)| i).collect();

    let inventory = RelationInventory::new(
        parse_optional(&dir.join(RELATION_DEFS_FILE), lines::parse_relation_def_line)?.into_iter().map(|(_, d)| d),
    );

    let mut lexicon_dirs = Vec::new();
    let mut map_files = Vec::new();
    let entries = fs::read_dir(dir).map_err(|e| IngestError::io(dir, e))?;
    for entry in entries {
        let path = entry.map_err(|e| IngestError::io(dir, e))?.path();
        if let Some(key) = is_lexicon_dir(&path) {
            lexicon_dirs.push((path, key));
        } else if let Some(versions) = path.file_name().and_then(|n| n.to_str()).and_then(version_map_versions) {
            map_files.push((path, versions));
        }
    }
    lexicon_dirs.sort();
    map_files.sort();

    // Lexicons parse independently; the merge below is sequential.
    let lexicons: Vec<Lexicon> = lexicon_dirs
        .into_par_iter()
        .map(|(path, key)| load_lexicon(&path, key))
        .collect::<Result<_, _>>()?;

    let overlay = load_ontology_files(&OntologyPaths::in_dir(dir))?;
    let mut repo = Repository::new(ili, lexicons, overlay, inventory);

    for (path, (from, to)) in map_files {
        let mut map = VersionMap::new();
        for (_, (a, b)) in parse_file(&path, lines::parse_ili_pair_line)? {
            map.entry(a).or_default().insert(b);
        }
        repo = repo.with_version_map(from, to, map);
    }

    let core_path = dir.join(CORE_FILE);
    if core_path.exists() {
        let core = parse_file(&core_path, lines::parse_ili_line)?.into_iter().map(|(_, i)| i).collect();
        repo = repo.with_core_list(core);
    }

    Ok(repo)
}

fn optional_text(v: Option<&str>) -> &str {
    v.unwrap_or(lines::NONE)
}

struct TsvWriter {
    path: PathBuf,
    out: io::BufWriter<fs::File>,
}

impl TsvWriter {
    fn create(path: PathBuf, header: &str) -> Result<TsvWriter, IngestError> {
        let file = fs::File::create(&path).map_err(|e| IngestError::io(&path, e))?;
        let mut w = TsvWriter { path, out: io::BufWriter::new(file) };
        w.line(&format!("# {header}"))?;
        Ok(w)
    }

    fn line(&mut self, text: &str) -> Result<(), IngestError> {
        writeln!(self.out, "{text}").map_err(|e| IngestError::io(&self.path, e))
    }

    fn row(&mut self, cols: &[&str]) -> Result<(), IngestError> {
        self.line(&cols.join("\t"))
    }

    fn finish(mut self) -> Result<(), IngestError> {
        self.out.flush().map_err(|e| IngestError::io(&self.path, e))
    }
}

/// Writes `repo` as a bundle under `dir` (created if needed). Loading the
/// result yields a repository equal to `repo`.
pub fn write_bundle(repo: &Repository, dir: &Path) -> Result<(), IngestError> {
    fs::create_dir_all(dir).map_err(|e| IngestError::io(dir, e))?;

    let mut w = TsvWriter::create(dir.join(ILI_FILE), "ili_id")?;
    for ili in repo.ili() {
        w.row(&[&ili.to_string()])?;
    }
    w.finish()?;

    let mut w = TsvWriter::create(dir.join(RELATION_DEFS_FILE), "code\tname\tinverse_code\ttransitive")?;
    for d in repo.inventory().iter() {
        w.row(&[
            d.code.as_str(),
            &d.name,
            optional_text(d.inverse.as_ref().map(|c| c.as_str())),
            if d.transitive { "1" } else { "0" },
        ])?;
    }
    w.finish()?;

    let overlay = repo.overlay();
    let mut w = TsvWriter::create(dir.join(SUMO_FILE), "ili_id\tsumo_term\tmapping_rel")?;
    for (ili, m) in &overlay.sumo {
        w.row(&[&ili.to_string(), &m.term, &m.rel.to_string()])?;
    }
    w.finish()?;

    let mut w = TsvWriter::create(dir.join(DOMAINS_FILE), "ili_id\tdomain_label")?;
    for (ili, labels) in &overlay.domains {
        for l in labels {
            w.row(&[&ili.to_string(), l])?;
        }
    }
    w.finish()?;

    let mut w = TsvWriter::create(dir.join(DOMAIN_HIERARCHY_FILE), "label\tparent_label")?;
    for (label, parent) in overlay.domain_hierarchy.labels() {
        w.row(&[label, optional_text(parent)])?;
    }
    w.finish()?;

    let mut w = TsvWriter::create(dir.join(TO_FEATURES_FILE), "feature_id\tname\tparent_ids")?;
    for f in overlay.to_hierarchy.iter() {
        let parents: Vec<String> = f.parents.iter().map(ToString::to_string).collect();
        let parents = if parents.is_empty() { lines::NONE.to_string() } else { parents.join(",") };
        w.row(&[&f.id.to_string(), &f.name, &parents])?;
    }
    w.finish()?;

    let mut w = TsvWriter::create(dir.join(ILI_TO_TO_FILE), "ili_id\tfeature_id")?;
    for (ili, features) in &overlay.to_features {
        for f in features {
            w.row(&[&ili.to_string(), &f.to_string()])?;
        }
    }
    w.finish()?;

    let mut w = TsvWriter::create(dir.join(BLC_FILE), "ili_id\tblc_ili_id")?;
    for (ili, blc) in &overlay.blc {
        w.row(&[&ili.to_string(), &blc.to_string()])?;
    }
    w.finish()?;

    for ((from, to), map) in repo.version_maps() {
        let mut w = TsvWriter::create(dir.join(format!("version_map_{from}_{to}.tsv")), "ili_from\tili_to")?;
        for (a, bs) in map {
            for b in bs {
                w.row(&[&a.to_string(), &b.to_string()])?;
            }
        }
        w.finish()?;
    }

    if let Some(core) = repo.core_list() {
        let mut w = TsvWriter::create(dir.join(CORE_FILE), "ili_id")?;
        for ili in core {
            w.row(&[&ili.to_string()])?;
        }
        w.finish()?;
    }

    for lex in repo.lexicons() {
        write_lexicon(lex, &dir.join(lex.key().to_string()))?;
    }
    Ok(())
}

fn write_lexicon(lex: &Lexicon, dir: &Path) -> Result<(), IngestError> {
    fs::create_dir_all(dir).map_err(|e| IngestError::io(dir, e))?;

    let mut w = TsvWriter::create(dir.join(SYNSETS_FILE), "synset_id\tpos\tgloss")?;
    for s in lex.synsets() {
        w.row(&[&s.id.to_string(), &s.pos().to_string(), optional_text(s.gloss.as_deref())])?;
    }
    w.finish()?;

    let mut w = TsvWriter::create(dir.join(VARIANTS_FILE), "lemma\tsynset_id\tsense_index\tconfidence\tsource")?;
    for v in lex.variants() {
        w.row(&[&v.lemma, &v.synset.to_string(), &v.sense_index.to_string(), v.confidence.as_str(), &v.source])?;
    }
    w.finish()?;

    let mut w = TsvWriter::create(dir.join(RELATIONS_FILE), "code\tsource_synset\ttarget_synset")?;
    for r in lex.relations() {
        w.row(&[r.code.as_str(), &r.source.to_string(), &r.target.to_string()])?;
    }
    w.finish()?;

    let mut w = TsvWriter::create(dir.join(EXAMPLES_FILE), "synset_id\texample")?;
    for s in lex.synsets() {
        for e in &s.examples {
            w.row(&[&s.id.to_string(), e])?;
        }
    }
    w.finish()?;

    let mut w = TsvWriter::create(dir.join(TO_ILI_FILE), "synset_id\tili_id")?;
    for (s, ili) in lex.ili_links() {
        w.row(&[&s.to_string(), &ili.to_string()])?;
    }
    w.finish()
}
