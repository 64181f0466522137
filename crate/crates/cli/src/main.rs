mod commands;
mod config;
mod export;
mod failure;
mod query;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::failure::Failure;

/// Multilingual wordnet toolchain: validation, lookup, statistics, word sense
/// disambiguation, term extraction, wordnet expansion and RDF export.
#[derive(Debug, Parser)]
#[command(name = "mcr", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Bundle directory to load
    #[arg(long, global = true, env = "MCR_BUNDLE", value_name = "DIR")]
    pub bundle: Option<PathBuf>,
    /// Key-value config file; flags override its values
    #[arg(long, global = true, env = "MCR_CONFIG", value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Worker threads for batch WSD and stats [default: available cores]
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a bundle for integrity violations
    Validate,
    /// Show senses, relations, ILI links, ontology labels and equivalents
    Query(QueryArgs),
    /// Per-language statistics
    Stats(StatsArgs),
    /// Disambiguate a batch of contexts
    Wsd(WsdArgs),
    /// Extract terms reachable from a seed synset
    Termonet(TermonetArgs),
    /// Assign each synset its nearest epinonym
    Epinonym(EpinonymArgs),
    /// Propose target-language variants from a bilingual resource
    Expand(ExpandArgs),
    /// Write the repository as Turtle files
    ExportRdf(ExportArgs),
    /// Knowledge-base graph utilities
    #[command(subcommand)]
    Graph(GraphCommand),
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    /// Lemma or synset id
    pub item: String,
    /// Restrict lemma lookup to one language
    #[arg(long, value_name = "LANG")]
    pub lang: Option<String>,
    /// Restrict lemma lookup to one part of speech (n, v, a, r)
    #[arg(long, value_name = "POS")]
    pub pos: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Tsv,
    Markdown,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Language to report (repeatable) [default: every loaded language]
    #[arg(long = "lang", value_name = "LANG")]
    pub langs: Vec<String>,
    /// Output format [config: format] [default: tsv]
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Print the per-POS table instead of the summary
    #[arg(long)]
    pub pos: bool,
    /// Fail when the bundle has no core synset list
    #[arg(long)]
    pub require_core: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Ppr,
    W2w,
}

#[derive(Debug, Args)]
pub struct PprOpts {
    /// Damping factor in (0,1) [config: damping] [default: 0.85]
    #[arg(long, value_name = "D")]
    pub damping: Option<f64>,
    /// L1 convergence threshold [config: epsilon] [default: 1e-9]
    #[arg(long, value_name = "EPS")]
    pub epsilon: Option<f64>,
    /// Iteration cap [config: max_iter] [default: 1000]
    #[arg(long, value_name = "N")]
    pub max_iter: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GraphOpts {
    /// Language whose synsets enter the graph (repeatable) [default: all]
    #[arg(long = "graph-lang", value_name = "LANG")]
    pub graph_langs: Vec<String>,
    /// Relation codes to keep, comma separated [default: all]
    #[arg(long, value_name = "CODES", value_delimiter = ',')]
    pub relations: Option<Vec<String>>,
    /// Merge synsets sharing an ILI record into one node
    #[arg(long)]
    pub cross_lingual: bool,
}

#[derive(Debug, Args)]
pub struct WsdArgs {
    /// Context file, one context per line; `-` reads standard input
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
    /// Language of the context words [config: lang]
    #[arg(long, value_name = "LANG")]
    pub lang: Option<String>,
    /// Single walk per context, or one walk per target word
    #[arg(long, value_enum, default_value_t = Mode::Ppr)]
    pub mode: Mode,
    #[command(flatten)]
    pub ppr: PprOpts,
    #[command(flatten)]
    pub graph: GraphOpts,
}

#[derive(Debug, Args)]
pub struct TraversalOpts {
    /// Traversal config file [config: traversal]
    #[arg(long, value_name = "FILE")]
    pub traversal: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TermonetArgs {
    /// Seed synset id
    pub seed: String,
    #[command(flatten)]
    pub traversal: TraversalOpts,
    /// Replace a non-noun seed by its nearest noun synset
    #[arg(long)]
    pub nearest_noun: bool,
    /// Whitespace-tokenized corpus used to filter the terms
    #[arg(long, value_name = "FILE")]
    pub corpus: Option<PathBuf>,
    /// Minimum corpus frequency kept by --corpus
    #[arg(long, value_name = "N", default_value_t = 1, requires = "corpus")]
    pub min_freq: usize,
}

#[derive(Debug, Args)]
pub struct EpinonymArgs {
    /// Epinonym synset ids (nouns)
    #[arg(required = true)]
    pub epinonyms: Vec<String>,
    #[command(flatten)]
    pub traversal: TraversalOpts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Monosemic,
    GlossOverlap,
    Parallel,
}

#[derive(Debug, Args)]
pub struct ExpandArgs {
    /// Expansion strategy
    #[arg(long, value_enum)]
    pub strategy: StrategyArg,
    /// Language of the produced variants
    #[arg(long, value_name = "LANG")]
    pub target: String,
    /// Source lexicon, as `lang-version` or a language code
    #[arg(long, value_name = "LEXICON", default_value = "eng")]
    pub source: String,
    /// Bilingual dictionary (monosemic, gloss-overlap)
    #[arg(long, value_name = "FILE")]
    pub dict: Option<PathBuf>,
    /// Minimum shared content words (gloss-overlap)
    #[arg(long, value_name = "N", default_value_t = 1)]
    pub min_overlap: usize,
    /// Stopword list, one word per line (gloss-overlap) [default: built-in list of the source language]
    #[arg(long, value_name = "FILE")]
    pub stopwords: Option<PathBuf>,
    /// Sense-tagged source text, `token/synset_id` tokens (parallel)
    #[arg(long, value_name = "FILE")]
    pub src: Option<PathBuf>,
    /// Target text, whitespace tokenized (parallel)
    #[arg(long, value_name = "FILE")]
    pub tgt: Option<PathBuf>,
    /// Word alignments, `i-j` pairs (parallel)
    #[arg(long, value_name = "FILE")]
    pub align: Option<PathBuf>,
    /// Minimum aligned occurrences of a (synset, word) pair (parallel)
    #[arg(long, value_name = "N", default_value_t = 1)]
    pub min_count: usize,
    /// Lexicon to score the candidates against; scores go to standard error
    #[arg(long, value_name = "LEXICON")]
    pub gold: Option<String>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    /// Output directory
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    /// Base IRI of every minted resource
    #[arg(long, value_name = "IRI", default_value = "http://example.org/mcr")]
    pub base: String,
    /// Gzip each file (adds `.gz`)
    #[arg(long)]
    pub gzip: bool,
    /// Skip the SUMO overlay
    #[arg(long)]
    pub no_sumo: bool,
    /// Skip the Top Ontology overlay
    #[arg(long)]
    pub no_to: bool,
    /// Skip the domain overlay
    #[arg(long)]
    pub no_domains: bool,
    /// Skip the Base Level Concept overlay
    #[arg(long)]
    pub no_blc: bool,
    /// Version pair to align, `FROM:TO` (repeatable)
    #[arg(long = "align", value_name = "FROM:TO")]
    pub alignments: Vec<String>,
    /// Predicate IRI of alignment triples [default: skos:exactMatch]
    #[arg(long, value_name = "IRI")]
    pub alignment_predicate: Option<String>,
    /// Epinonym assignments as written by `mcr epinonym`
    #[arg(long, value_name = "FILE")]
    pub epinonyms: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum GraphCommand {
    /// Write nodes.tsv and edges.tsv for the knowledge-base graph
    Dump(DumpArgs),
}

#[derive(Debug, Args)]
pub struct DumpArgs {
    /// Output directory
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    #[command(flatten)]
    pub graph: GraphOpts,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure { code, error }) => {
            if let Some(e) = error {
                eprintln!("mcr: {e:#}");
            }
            ExitCode::from(code)
        }
    }
}
