//! Multilingual wordnet repository aligned on an interlingual index, with
//! ontology overlays and the tools built on top of it: statistics,
//! personalized-PageRank word sense disambiguation, domain term extraction,
//! epinonym categorization, expand-model candidate generation and Turtle
//! export.

pub mod expand;
pub mod graph;
pub mod ids;
pub mod ingest;
pub mod model;
pub mod overlay;
pub mod rdf;
pub mod repo;
pub mod stats;
pub mod termsem;
pub mod validate;
pub mod wsd;

pub use ids::{IdError, IliId, Lang, LexiconKey, Pos, SynsetId, Version};
pub use ingest::{load_bundle, write_bundle, IngestError};
pub use model::{Confidence, Lexicon, LexiconBuilder, RelCode, Relation, RelationDef, RelationInventory, Synset, Variant};
pub use overlay::OntologyOverlay;
pub use repo::{LookupError, Repository};
pub use validate::{validate, Issue, Severity, ValidationReport};
