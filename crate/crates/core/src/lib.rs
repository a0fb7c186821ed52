//! Case-based retrieval of short titles.
//!
//! Titles are tokenized ([`preprocess`]), weighted with TF-IDF
//! ([`index`]) and compared to queries by cosine or set-overlap similarity
//! ([`similarity`]). [`case_base`] wraps the index in the
//! retrieve / reuse / revise / retain cycle, and [`eval`] runs the
//! word-order permutation experiment.

pub mod case_base;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod exec;
pub mod index;
pub mod persist;
pub mod preprocess;
pub mod similarity;

pub use case_base::{CaseBase, CaseEdit, RetrievalOutcome, Reuse};
pub use corpus::CorpusFormat;
pub use error::{Error, Result};
pub use eval::{run_two_stage, EvalReport, EvalRow};
pub use exec::ExecMode;
pub use index::{
    build_index, build_index_with, BuildOptions, Case, DocumentVector, IdfBase, Index,
    IngestReport, QueryTerms, QueryVector, TermId, TfMode, Vocabulary, Weighting,
};
pub use preprocess::{load_stopwords, tokenize, PreprocessConfig, TokenList};
pub use similarity::{
    cosine_similarity, rank, rank_batch, set_similarity, Hit, Query, RankParams, RankedResults,
    Scorer, SearchParams, SparseVector, TermSet,
};
