//! Test support: a brute-force dense TF-IDF oracle and seeded corpus
//! generators. Nothing here depends on the engine crate, so the oracle stays
//! an independent check of the inverted-index path.

pub mod gen;
pub mod oracle;

pub use gen::{random_corpus, random_query, synthetic_titles, TokenDoc, TABLE_ONE_TITLES};
pub use oracle::{DenseOracle, OracleHit, OracleScorer, OracleWeighting};
