use std::collections::BTreeSet;
use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::anyhow;
use mcr_core::expand::{
    evaluate_candidates, expand_gloss_overlap, expand_monosemic, expand_parallel, parse_alignments,
    parse_tagged_tokens, render_candidates, BilingualDictionary, Stopwords,
};
use mcr_core::graph::{build_graph, GraphFilter, KbGraph, PprParams};
use mcr_core::model::RelCode;
use mcr_core::stats::{compute_pos_stats, compute_stats, compute_stats_with_core, render_pos_report, render_report, Format, StatsError};
use mcr_core::termsem::{
    assign_epinonyms, corpus_filter, extract_terms, nearest_noun_seed, render_assignments, render_terms, EpinonymSet,
    TraversalConfig,
};
use mcr_core::wsd::{disambiguate_batch, parse_context_line, render_result, WsdMode};
use mcr_core::{load_bundle, validate, Lang, Repository, Severity, SynsetId};
use rayon::prelude::*;

use crate::config::{check_jobs, FileConfig};
use crate::failure::{Classify, Failure, Outcome, DOMAIN, NONCONVERGED};
use crate::{
    Cli, Command, DumpArgs, EpinonymArgs, ExpandArgs, GraphCommand, GraphOpts, Mode, OutputFormat, PprOpts, StatsArgs,
    StrategyArg, TermonetArgs, TraversalOpts, WsdArgs,
};

/// Values merged from the config file and global flags.
pub struct Context {
    pub file: FileConfig,
    pub bundle: Option<PathBuf>,
}

impl Context {
    pub fn load(&self) -> Outcome<Repository> {
        let dir = self.bundle.as_ref().ok_or_else(|| Failure::input(anyhow!("no bundle given (use --bundle or MCR_BUNDLE)")))?;
        load_bundle(dir).input_ctx(format!("loading bundle {}", dir.display()))
    }

    fn lang(&self, flag: &Option<String>) -> Outcome<Lang> {
        let code = flag.as_ref().or(self.file.lang.as_ref()).ok_or_else(|| Failure::input(anyhow!("no language given (use --lang)")))?;
        parse_lang(code)
    }

    fn ppr(&self, o: &PprOpts) -> Outcome<PprParams> {
        let d = PprParams::default();
        let p = PprParams {
            damping: o.damping.or(self.file.damping).unwrap_or(d.damping),
            epsilon: o.epsilon.or(self.file.epsilon).unwrap_or(d.epsilon),
            max_iter: o.max_iter.or(self.file.max_iter).unwrap_or(d.max_iter),
        };
        p.check().input_err()?;
        Ok(p)
    }

    fn traversal(&self, o: &TraversalOpts) -> Outcome<TraversalConfig> {
        let path = o
            .traversal
            .as_ref()
            .or(self.file.traversal.as_ref())
            .ok_or_else(|| Failure::input(anyhow!("no traversal config given (use --traversal)")))?;
        TraversalConfig::parse(&read(path)?).input_ctx(format!("traversal config {}", path.display()))
    }
}

pub fn run(cli: Cli) -> Outcome {
    let file = match &cli.global.config {
        Some(p) => FileConfig::load(p).input_err()?,
        None => FileConfig::default(),
    };
    let jobs = check_jobs(cli.global.jobs.or(file.jobs)).input_err()?;
    if let Some(n) = jobs {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().input_err()?;
    }
    let bundle = cli.global.bundle.clone().or_else(|| file.bundle.clone());
    let ctx = Context { file, bundle };
    match &cli.command {
        Command::Validate => cmd_validate(&ctx),
        Command::Query(a) => crate::query::cmd_query(&ctx, a),
        Command::Stats(a) => cmd_stats(&ctx, a),
        Command::Wsd(a) => cmd_wsd(&ctx, a),
        Command::Termonet(a) => cmd_termonet(&ctx, a),
        Command::Epinonym(a) => cmd_epinonym(&ctx, a),
        Command::Expand(a) => cmd_expand(&ctx, a),
        Command::ExportRdf(a) => crate::export::cmd_export_rdf(&ctx, a),
        Command::Graph(GraphCommand::Dump(a)) => cmd_graph_dump(&ctx, a),
    }
}

pub fn parse_lang(code: &str) -> Outcome<Lang> {
    code.parse::<Lang>().input_ctx(format!("language `{code}`"))
}

pub fn parse_synset(s: &str) -> Outcome<SynsetId> {
    s.parse::<SynsetId>().input_ctx(format!("synset id `{s}`"))
}

pub fn read(path: &Path) -> Outcome<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).input_ctx("reading standard input")?;
        return Ok(s);
    }
    fs::read_to_string(path).input_ctx(format!("reading {}", path.display()))
}

pub fn emit(text: &str) -> Outcome {
    let mut out = BufWriter::new(io::stdout().lock());
    out.write_all(text.as_bytes()).and_then(|_| out.flush()).input_ctx("writing standard output")
}

fn cmd_validate(ctx: &Context) -> Outcome {
    let repo = ctx.load()?;
    let report = validate(&repo);
    for issue in &report.issues {
        let level = match issue.severity() {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        eprintln!("{level}: {issue}");
    }
    let errors = report.errors().count();
    eprintln!("{errors} error(s), {} warning(s)", report.warnings().count());
    if errors > 0 {
        Err(Failure::silent(DOMAIN))
    } else {
        Ok(())
    }
}

fn cmd_stats(ctx: &Context, a: &StatsArgs) -> Outcome {
    let requested: Vec<Lang> = a.langs.iter().map(|l| parse_lang(l)).collect::<Outcome<_>>()?;
    let format = match a.format.or(ctx.file.format).unwrap_or(OutputFormat::Tsv) {
        OutputFormat::Tsv => Format::Tsv,
        OutputFormat::Markdown => Format::Markdown,
    };
    let repo = ctx.load()?;
    let langs: Vec<Lang> = if requested.is_empty() {
        repo.lexicons().map(|l| l.key().lang.clone()).collect::<BTreeSet<_>>().into_iter().collect()
    } else {
        requested
    };
    let classify = |e: StatsError| match e {
        StatsError::MissingCoreList => Failure::input(e),
        e => Failure::domain(e),
    };
    let text = if a.pos {
        let tables: Vec<_> = langs.par_iter().map(|l| compute_pos_stats(&repo, l)).collect();
        let rows: Vec<_> = tables.into_iter().collect::<Result<Vec<_>, _>>().map_err(classify)?.concat();
        render_pos_report(&rows, format)
    } else {
        let compute = |l: &Lang| {
            if a.require_core {
                compute_stats_with_core(&repo, l, repo.core_list())
            } else {
                compute_stats(&repo, l, repo.core_list())
            }
        };
        let report: Vec<_> = langs.par_iter().map(compute).collect();
        render_report(&report.into_iter().collect::<Result<Vec<_>, _>>().map_err(classify)?, format)
    };
    emit(&text)
}

fn graph_filter(o: &GraphOpts) -> Outcome<GraphFilter> {
    Ok(GraphFilter {
        langs: o.graph_langs.iter().map(|l| parse_lang(l)).collect::<Outcome<_>>()?,
        relations: o.relations.as_ref().map(|codes| codes.iter().map(|c| RelCode::new(c.trim())).collect()),
        cross_lingual: o.cross_lingual,
    })
}

fn build(repo: &Repository, o: &GraphOpts) -> Outcome<KbGraph> {
    build_graph(repo, &graph_filter(o)?).domain_err()
}

fn cmd_wsd(ctx: &Context, a: &WsdArgs) -> Outcome {
    let lang = ctx.lang(&a.lang)?;
    let params = ctx.ppr(&a.ppr)?;
    graph_filter(&a.graph)?;
    let text = read(&a.input)?;
    let mut contexts = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let words = parse_context_line(line, &lang).input_ctx(format!("{} line {}", a.input.display(), n + 1))?;
        contexts.push((n + 1, words));
    }
    let repo = ctx.load()?;
    let g = build(&repo, &a.graph)?;
    let mode = match a.mode {
        Mode::Ppr => WsdMode::Ppr,
        Mode::W2w => WsdMode::PprW2w,
    };
    let words: Vec<_> = contexts.iter().map(|(_, w)| w.clone()).collect();
    let results = disambiguate_batch(mode, &words, &g, &repo, &params);

    let mut out = String::new();
    let (mut failed, mut nonconverged) = (false, false);
    for (i, ((line, _), r)) in contexts.iter().zip(&results).enumerate() {
        if i > 0 {
            out.push('\n');
        }
        match r {
            Ok(r) => {
                out.push_str(&render_result(r));
                nonconverged |= r.targets.iter().any(|t| t.flags.nonconverged);
            }
            Err(e) => {
                eprintln!("mcr: {} line {line}: {e}", a.input.display());
                failed = true;
            }
        }
    }
    emit(&out)?;
    if failed {
        Err(Failure::silent(DOMAIN))
    } else if nonconverged {
        eprintln!("mcr: PageRank did not converge within {} iterations", params.max_iter);
        Err(Failure::silent(NONCONVERGED))
    } else {
        Ok(())
    }
}

fn cmd_termonet(ctx: &Context, a: &TermonetArgs) -> Outcome {
    let seed = parse_synset(&a.seed)?;
    let cfg = ctx.traversal(&a.traversal)?;
    let corpus = a.corpus.as_ref().map(|p| read(p)).transpose()?;
    let repo = ctx.load()?;
    let seed = if a.nearest_noun { nearest_noun_seed(&seed, &repo).domain_err()? } else { seed };
    let terms = extract_terms(&seed, &cfg, &repo).domain_err()?;
    let text = match corpus {
        Some(c) => {
            let tokens: Vec<&str> = c.split_whitespace().collect();
            let (kept, freqs): (Vec<_>, Vec<_>) = corpus_filter(&terms, &tokens, a.min_freq).into_iter().unzip();
            render_terms(&kept, Some(&freqs))
        }
        None => render_terms(&terms, None),
    };
    emit(&text)
}

fn cmd_epinonym(ctx: &Context, a: &EpinonymArgs) -> Outcome {
    let ids: Vec<SynsetId> = a.epinonyms.iter().map(|s| parse_synset(s)).collect::<Outcome<_>>()?;
    let set = EpinonymSet::new(ids).input_err()?;
    let cfg = ctx.traversal(&a.traversal)?;
    let repo = ctx.load()?;
    let map = assign_epinonyms(&set, &cfg, &repo).domain_err()?;
    emit(&render_assignments(&map))
}

fn require<'a>(path: &'a Option<PathBuf>, flag: &str, strategy: &str) -> Outcome<&'a Path> {
    path.as_deref().ok_or_else(|| Failure::input(anyhow!("--{flag} is required by the {strategy} strategy")))
}

fn cmd_expand(ctx: &Context, a: &ExpandArgs) -> Outcome {
    let target = parse_lang(&a.target)?;
    let candidates = match a.strategy {
        StrategyArg::Monosemic | StrategyArg::GlossOverlap => {
            let name = if a.strategy == StrategyArg::Monosemic { "monosemic" } else { "gloss-overlap" };
            let path = require(&a.dict, "dict", name)?;
            let dict = BilingualDictionary::parse(&read(path)?).input_ctx(path.display().to_string())?;
            let stop = a.stopwords.as_ref().map(|p| read(p)).transpose()?;
            let repo = ctx.load()?;
            let source = repo.find_lexicon(&a.source).domain_err()?;
            let out = if a.strategy == StrategyArg::Monosemic {
                expand_monosemic(&dict, source, &target)
            } else {
                let stop = stop.map_or_else(|| Stopwords::builtin(&source.key().lang), |s| Stopwords::parse(&s));
                let r = expand_gloss_overlap(&dict, source, &target, a.min_overlap, &stop);
                eprintln!("{} abstained, {} senses without gloss", r.abstained, r.missing_gloss);
                r.candidates
            };
            evaluate(&repo, a, &out)?;
            out
        }
        StrategyArg::Parallel => {
            let src = read(require(&a.src, "src", "parallel")?)?;
            let tgt = read(require(&a.tgt, "tgt", "parallel")?)?;
            let align = read(require(&a.align, "align", "parallel")?)?;
            let src = parse_tagged_tokens(&src).input_ctx("source text")?;
            let tgt: Vec<String> = tgt.split_whitespace().map(str::to_string).collect();
            let align = parse_alignments(&align).input_ctx("alignment file")?;
            let out = expand_parallel(&src, &tgt, &align, a.min_count, &target).input_err()?;
            if a.gold.is_some() {
                evaluate(&ctx.load()?, a, &out)?;
            }
            out
        }
    };
    emit(&render_candidates(&candidates))
}

fn evaluate(repo: &Repository, a: &ExpandArgs, out: &[mcr_core::expand::CandidateVariant]) -> Outcome {
    if let Some(gold) = &a.gold {
        let s = evaluate_candidates(out, repo.find_lexicon(gold).domain_err()?);
        eprintln!("emitted {}, correct {}, precision {:.3}, coverage {:.3}", s.emitted, s.correct, s.precision, s.coverage);
    }
    Ok(())
}

fn cmd_graph_dump(ctx: &Context, a: &DumpArgs) -> Outcome {
    graph_filter(&a.graph)?;
    let repo = ctx.load()?;
    let g = build(&repo, &a.graph)?;
    g.write_dump(&a.out).input_ctx(format!("writing {}", a.out.display()))?;
    emit(&format!("nodes\t{}\nedges\t{}\n", g.node_count(), g.edge_count()))
}
