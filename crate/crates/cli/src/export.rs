use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::anyhow;
use flate2::write::GzEncoder;
use flate2::Compression;
use mcr_core::rdf::{
    alignment_triples, epinonym_triples, ili_triples, lexicon_triples, overlay_triples, write_turtle, Overlay,
    RdfError, RdfProfile, Triple,
};
use mcr_core::termsem::Assignment;
use mcr_core::{SynsetId, Version};

use crate::commands::{emit, read, Context};
use crate::failure::{Classify, Failure, Outcome};
use crate::ExportArgs;

/// Reads `synset TAB epinonym TAB distance` rows.
fn parse_assignments(text: &str) -> anyhow::Result<BTreeMap<SynsetId, Assignment>> {
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let bad = || anyhow!("line {}: expected `synset TAB epinonym TAB distance`", n + 1);
        let cols: Vec<&str> = line.split('\t').collect();
        let [id, epi, dist] = cols[..] else { return Err(bad()) };
        let a = Assignment {
            epinonym: epi.parse().map_err(|_| bad())?,
            distance: dist.parse().map_err(|_| bad())?,
        };
        map.insert(id.parse().map_err(|_| bad())?, a);
    }
    Ok(map)
}

fn parse_pair(s: &str) -> Outcome<(Version, Version)> {
    let bad = || Failure::input(anyhow!("--align expects FROM:TO, got `{s}`"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    Ok((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?))
}

fn write_file(dir: &Path, stem: &str, gzip: bool, triples: Vec<Triple>, p: &RdfProfile) -> Outcome<(String, usize)> {
    let name = if gzip { format!("{stem}.ttl.gz") } else { format!("{stem}.ttl") };
    let path = dir.join(&name);
    let file = File::create(&path).input_ctx(format!("creating {}", path.display()))?;
    let write = |out: &mut dyn Write| -> Result<usize, RdfError> {
        let n = write_turtle(triples, p, out)?;
        out.flush()?;
        Ok(n)
    };
    let count = if gzip {
        let mut gz = GzEncoder::new(BufWriter::new(file), Compression::default());
        let n = write(&mut gz);
        gz.finish().and_then(|mut w| w.flush()).input_ctx(format!("writing {}", path.display()))?;
        n
    } else {
        write(&mut BufWriter::new(file))
    }
    .input_ctx(format!("writing {}", path.display()))?;
    Ok((name, count))
}

pub fn cmd_export_rdf(ctx: &Context, a: &ExportArgs) -> Outcome {
    let mut p = RdfProfile::new(&a.base).input_err()?;
    if let Some(iri) = &a.alignment_predicate {
        p = p.with_alignment_predicate(iri).input_err()?;
    }
    p.include_sumo = !a.no_sumo;
    p.include_to = !a.no_to;
    p.include_domains = !a.no_domains;
    p.include_blc = !a.no_blc;
    let pairs: Vec<(Version, Version)> = a.alignments.iter().map(|s| parse_pair(s)).collect::<Outcome<_>>()?;
    let epinonyms = match &a.epinonyms {
        Some(path) => Some(parse_assignments(&read(path)?).input_ctx(path.display().to_string())?),
        None => None,
    };
    p.include_epinonyms = epinonyms.is_some();
    let repo = ctx.load()?;

    let mut shards: Vec<(String, Vec<Triple>)> = Vec::new();
    for lex in repo.lexicons() {
        shards.push((lex.key().to_string(), lexicon_triples(&repo, lex, &p)));
    }
    shards.push(("ili".into(), ili_triples(&repo, &p)));
    for o in Overlay::ALL.into_iter().filter(|o| o.enabled(&p)) {
        shards.push((format!("overlay-{}", o.name()), overlay_triples(&repo, o, &p)));
    }
    for (from, to) in &pairs {
        shards.push((format!("align-{from}-{to}"), alignment_triples(&repo, from, to, &p).domain_err()?));
    }
    if let Some(map) = &epinonyms {
        shards.push(("epinonyms".into(), epinonym_triples(map, &p)));
    }

    fs::create_dir_all(&a.out).input_ctx(format!("creating {}", a.out.display()))?;
    let mut manifest = String::new();
    for (stem, triples) in shards {
        let (name, count) = write_file(&a.out, &stem, a.gzip, triples, &p)?;
        manifest.push_str(&format!("{name}\t{count}\n"));
    }
    emit(&manifest)
}
